"""Static analysis of a keyword query against a schema under access patterns.

Keywords are handled through their *candidate domains*: a typed keyword has
exactly one, a keyword of unknown domain has every domain of the catalog.
The public functions take a :class:`KeywordQuery`; the ``*_domains``
variants take the candidate sets directly and are what the extraction
engine uses while it discovers domains.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .core import KeywordQuery, Schema, UnknownDomainError, check_query
from .graphs import (
    SchemaJoinGraph,
    UnionFind,
    d_graph,
    schema_join_graph,
    visible_relations,
    visible_with_seeds,
)

Candidates = tuple[frozenset[str], ...]


def keyword_candidates(query: KeywordQuery, schema: Schema) -> Candidates:
    check_query(schema, query)
    return tuple(
        frozenset({k.domain}) if k.typed else frozenset(schema.catalog) for k in query
    )


def _typed_candidates(query: KeywordQuery, schema: Schema) -> Candidates:
    for k in query:
        if not k.typed:
            raise UnknownDomainError(f"keyword {k.literal!r} has no domain")
    return keyword_candidates(query, schema)


# compatibility / answerability -----------------------------------------------


def compatible_domains(schema: Schema, cands: Candidates) -> bool:
    present = schema.domains
    if any(not (c & present) for c in cands):
        return False
    if len(cands) == 1:
        return True
    # Keywords are linked when their domains meet in one component of the
    # join graph of non-unary relations; the query is compatible when the
    # linkage over all keywords is connected.
    jg = schema_join_graph(schema, exclude_unary=True)
    uf = UnionFind(("kw", i) for i in range(len(cands)))
    for comp in jg.components():
        doms = {d for r in comp for d in schema.relation(r).domains}
        for i, c in enumerate(cands):
            if c & doms:
                uf.union(("kw", i), ("comp", min(comp)))
    return len({uf.find(("kw", i)) for i in range(len(cands))}) == 1


def compatible(query: KeywordQuery, schema: Schema) -> bool:
    """Can some access patterns and instance give ``query`` an answer?"""
    return compatible_domains(schema, _typed_candidates(query, schema))


def answerable_domains(schema: Schema, cands: Candidates) -> bool:
    seeds = set().union(*cands)
    visible = visible_with_seeds(schema, seeds)
    return compatible_domains(schema.restrict(visible), cands)


def answerable(query: KeywordQuery, schema: Schema) -> bool:
    """Can some instance under the schema's access patterns give ``query``
    an answer?"""
    return answerable_domains(schema, _typed_candidates(query, schema))


# useful nodes ------------------------------------------------------------------


def useful_domains(schema: Schema, cands: Candidates) -> frozenset[str]:
    kw_domains = set().union(*cands)
    visible = visible_with_seeds(schema, kw_domains)
    rels = [r for r in schema if r.name in visible]
    useful = {r.name for r in rels if r.domains & kw_domains}
    if len(cands) > 1:
        # Any visible relation in a join component holding a keyword relation
        # may be needed to connect keyword tuples.
        jg = schema_join_graph(schema.restrict(visible))
        for comp in jg.components():
            if comp & useful:
                useful |= comp
    changed = True
    while changed:
        changed = False
        needed = {d for r in rels if r.name in useful for d in r.input_domains}
        for r in rels:
            if r.name not in useful and r.output_domains & needed:
                useful.add(r.name)
                changed = True
    return frozenset(useful)


def useful_nodes(query: KeywordQuery, schema: Schema) -> frozenset[str]:
    return useful_domains(schema, _typed_candidates(query, schema))


# witnesses ---------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    path: tuple[str, ...]
    anchors: dict = field(compare=False, hash=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.path)

    def __str__(self) -> str:
        return "-".join(self.path)


def witness_cost(path: Sequence[str], accessed: frozenset[str] | set[str] = frozenset()) -> int:
    """Estimated accesses needed to traverse ``path``.

    Every position costs one access, except that the first occurrence of a
    relation already accessed can replay that access.
    """
    return len(path) - len(set(path) & set(accessed))


class WitnessSpace:
    """Witness machinery for a schema and fixed keyword candidate domains."""

    def __init__(self, schema: Schema, cands: Candidates, keywords: Optional[Sequence] = None):
        self.schema = schema
        self.cands = cands
        self.keywords = tuple(keywords) if keywords is not None else tuple(range(len(cands)))
        self.kw_domains = frozenset().union(*cands)
        self.graph: SchemaJoinGraph = schema_join_graph(schema)
        self._valid: dict[frozenset[str], bool] = {}

    @cached_property
    def useful(self) -> frozenset[str]:
        return useful_domains(self.schema, self.cands)

    def _covers(self, names) -> bool:
        doms = {d for n in names for d in self.schema.relation(n).domains}
        return all(c & doms for c in self.cands)

    def _components(self, names) -> list[frozenset[str]]:
        uf = UnionFind(names)
        for x, y in self.graph.edges:
            if x in names and y in names:
                uf.union(x, y)
        return sorted((frozenset(g) for g in uf.groups()), key=sorted)

    @cached_property
    def pools(self) -> tuple[frozenset[str], ...]:
        """Maximal relation sets that witnesses can range over."""
        out = []
        work = self._components(self.useful)
        while work:
            k = work.pop()
            if not self._covers(k):
                continue
            inner = useful_domains(self.schema.restrict(k), self.cands)
            if inner == k:
                out.append(k)
            else:
                work.extend(self._components(inner))
        return tuple(sorted(out, key=sorted))

    @cached_property
    def pool_of(self) -> dict[str, frozenset[str]]:
        return {n: k for k in self.pools for n in k}

    @cached_property
    def adjacency(self) -> dict[str, list[str]]:
        adj = self.graph.adjacency()
        return {n: [m for m in adj[n] if m in self.pool_of.get(n, ())] for n in self.pool_of}

    @cached_property
    def infinite(self) -> bool:
        return any(len(k) > 1 or self.schema.relation(next(iter(k))).has_self_join for k in self.pools)

    def is_anchor(self, name: str) -> bool:
        return bool(self.schema.relation(name).domains & self.kw_domains)

    def valid_set(self, names: frozenset[str]) -> bool:
        hit = self._valid.get(names)
        if hit is None:
            hit = self._covers(names) and useful_domains(self.schema.restrict(names), self.cands) == names
            self._valid[names] = hit
        return hit

    def is_witness(self, path: Sequence[str]) -> bool:
        if not path or any(n not in self.pool_of for n in path):
            return False
        for a, b in zip(path, path[1:]):
            if not self.graph.adjacent(a, b):
                return False
        if not self.is_anchor(path[-1]):
            return False
        return self.valid_set(frozenset(path))

    def anchors(self, path: Sequence[str]) -> dict:
        out = {}
        for kw, cand in zip(self.keywords, self.cands):
            for i in range(len(path) - 1, -1, -1):
                if self.schema.relation(path[i]).domains & cand:
                    out[kw] = i
                    break
        return out

    def witness(self, path: Sequence[str]) -> Witness:
        return Witness(tuple(path), self.anchors(path))

    def walks(self, length: int, prefix_state=None) -> Iterator[tuple[str, ...]]:
        """Witness paths of exactly ``length`` nodes in lexicographic order.

        ``prefix_state(state, name)`` may be given to prune: it maps the
        state of a prefix and the next node to a new state, or None to cut
        the branch. The initial state is None.
        """
        path: list[str] = []

        def rec(state):
            if len(path) == length:
                if self.is_witness(path):
                    yield tuple(path), state
                return
            options = sorted(self.pool_of) if not path else self.adjacency[path[-1]]
            for n in options:
                if prefix_state is not None:
                    nxt = prefix_state(state, n)
                    if nxt is None:
                        continue
                else:
                    nxt = state
                path.append(n)
                yield from rec(nxt)
                path.pop()

        return rec(None)


def enumerate_witnesses(
    query: KeywordQuery,
    schema: Schema,
    accessed: frozenset[str] | set[str] = frozenset(),
) -> Iterator[Witness]:
    """Witnesses in nondecreasing :func:`witness_cost` order.

    ``accessed`` is the set of relations already accessed by the executor
    (``AccessExecutor`` may be passed instead). Ties break on the sequence
    of relation names, then on length. The stream is infinite whenever a
    witness can repeat nodes; callers truncate it.
    """
    if hasattr(accessed, "log"):
        accessed = {rec.relation for rec in accessed.log}
    cands = keyword_candidates(query, schema)
    space = WitnessSpace(schema, cands, tuple(query))
    if not space.pools:
        return
    accessed = frozenset(accessed) & frozenset(space.pool_of)
    if not space.infinite:
        paths = [p for p, _ in space.walks(1)]
        for p in sorted(paths, key=lambda p: (witness_cost(p, accessed), p)):
            yield space.witness(p)
        return
    by_length: dict[int, list[tuple[str, ...]]] = {}

    def of_length(n):
        if n not in by_length:
            by_length[n] = [p for p, _ in space.walks(n)]
        return by_length[n]

    for cost in itertools.count(0):
        level = []
        for n in range(max(cost, 1), cost + len(accessed) + 1):
            level.extend(p for p in of_length(n) if witness_cost(p, accessed) == cost)
        for p in sorted(level, key=lambda p: (p, len(p))):
            yield space.witness(p)


# summary -----------------------------------------------------------------------


@dataclass(frozen=True)
class Analysis:
    compatible: bool
    answerable: bool
    visible: tuple[str, ...]
    useful: tuple[str, ...]

    def format(self) -> str:
        return (
            f"compatible={str(self.compatible).lower()} "
            f"answerable={str(self.answerable).lower()} "
            f"visible={','.join(self.visible)} useful={','.join(self.useful)}"
        )


def analyze(query: KeywordQuery, schema: Schema) -> Analysis:
    return Analysis(
        compatible=compatible(query, schema),
        answerable=answerable(query, schema),
        visible=tuple(sorted(visible_relations(d_graph(schema, query)))),
        useful=tuple(sorted(useful_nodes(query, schema))),
    )
