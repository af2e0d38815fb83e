"""Graph constructions over tuples and schemas.

* tuple join graph and the connected-and-covering test used by peel;
* schema join graph (relations sharing a domain, self-loops included);
* expanded schema and dependency graph (output -> input arcs);
* visibility of relations under access patterns.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .core import (
    RESERVED_PREFIX,
    Attribute,
    KeywordQuery,
    Mode,
    Relation,
    Schema,
    Tuple,
    UnknownDomainError,
    Value,
)
from .formats import format_tuple


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, items: Iterable = ()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        self.add(x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]

    def groups(self) -> list[set]:
        out = defaultdict(set)
        for x in self.parent:
            out[self.find(x)].add(x)
        return list(out.values())


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


# tuple join graph ------------------------------------------------------------


@dataclass(frozen=True)
class JoinGraph:
    nodes: tuple[Tuple, ...]
    edges: frozenset[frozenset[Tuple]]

    def neighbors(self, t: Tuple) -> set[Tuple]:
        return {u for e in self.edges if t in e for u in e if u != t}

    def is_connected(self) -> bool:
        uf = UnionFind(self.nodes)
        for e in self.edges:
            a, b = tuple(e)
            uf.union(a, b)
        return len({uf.find(n) for n in self.nodes}) <= 1

    def to_dot(self, name: str = "join_graph") -> str:
        lines = [f"graph {name} {{"]
        for t in self.nodes:
            lines.append(f"  {_dot_id(format_tuple(t))};")
        for a, b in sorted(tuple(sorted(e)) for e in self.edges):
            lines.append(f"  {_dot_id(format_tuple(a))} -- {_dot_id(format_tuple(b))};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _value_index(tuples: Iterable[Tuple]) -> dict[Value, list[Tuple]]:
    index: dict[Value, list[Tuple]] = defaultdict(list)
    for t in tuples:
        for v in set(t.values):
            index[v].append(t)
    return index


def join_graph(tuples: Iterable[Tuple]) -> JoinGraph:
    nodes = tuple(sorted(set(tuples)))
    edges = set()
    for group in _value_index(nodes).values():
        for a, b in combinations(group, 2):
            edges.add(frozenset((a, b)))
    return JoinGraph(nodes, frozenset(edges))


def components(tuples: Iterable[Tuple]) -> list[frozenset[Tuple]]:
    """Connected components of the join graph, without building its edges."""
    ts = set(tuples)
    uf = UnionFind(ts)
    for group in _value_index(ts).values():
        for t in group[1:]:
            uf.union(group[0], t)
    return [frozenset(g) for g in uf.groups()]


def covers(tuples: Iterable[Tuple], query: KeywordQuery) -> bool:
    ts = list(tuples)
    return all(any(k.matches(v) for t in ts for v in t.values) for k in query)


def is_connected_covering(tuples: Iterable[Tuple], query: KeywordQuery) -> bool:
    ts = set(tuples)
    if not ts or not covers(ts, query):
        return False
    return len(components(ts)) == 1


# schema join graph -----------------------------------------------------------


@dataclass(frozen=True)
class SchemaJoinGraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]  # (a, b) with a <= b; (a, a) is a self-loop

    def adjacent(self, a: str, b: str) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, a: str) -> list[str]:
        out = set()
        for x, y in self.edges:
            if x == a:
                out.add(y)
            if y == a:
                out.add(x)
        return sorted(out)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, set[str]] = {n: set() for n in self.nodes}
        for x, y in self.edges:
            adj[x].add(y)
            adj[y].add(x)
        return {n: sorted(v) for n, v in adj.items()}

    def components(self) -> list[frozenset[str]]:
        uf = UnionFind(self.nodes)
        for x, y in self.edges:
            uf.union(x, y)
        return sorted((frozenset(g) for g in uf.groups()), key=sorted)

    def to_dot(self, name: str = "schema_join_graph") -> str:
        lines = [f"graph {name} {{"]
        for n in self.nodes:
            lines.append(f"  {_dot_id(n)};")
        for x, y in sorted(self.edges):
            lines.append(f"  {_dot_id(x)} -- {_dot_id(y)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def schema_join_graph(schema: Schema, exclude_unary: bool = False) -> SchemaJoinGraph:
    rels = [r for r in schema if not (exclude_unary and r.arity == 1)]
    by_domain: dict[str, list[str]] = defaultdict(list)
    for r in rels:
        for d in r.domains:
            by_domain[d].append(r.name)
    edges = set()
    for names in by_domain.values():
        for a, b in combinations(sorted(set(names)), 2):
            edges.add((a, b))
    for r in rels:
        if r.has_self_join:
            edges.add((r.name, r.name))
    return SchemaJoinGraph(tuple(sorted(r.name for r in rels)), frozenset(edges))


# expansion, d-graph, visibility ----------------------------------------------


def keyword_relation_name(index: int, domain: Optional[str] = None) -> str:
    return f"{RESERVED_PREFIX}{index}" if domain is None else f"{RESERVED_PREFIX}{index}_{domain}"


def expand_with_domains(schema: Schema, seeds: Iterable[tuple[str, str]]) -> Schema:
    """Add one output-only unary relation per ``(name, domain)`` seed."""
    extra = [Relation(name, (Attribute("value", dom, Mode.OUTPUT),)) for name, dom in seeds]
    return schema.with_relations(extra)


def expanded_schema(schema: Schema, query: KeywordQuery) -> Schema:
    seeds = []
    for i, k in enumerate(query):
        if not k.typed:
            raise UnknownDomainError(f"keyword {k.literal!r} has no domain")
        seeds.append((keyword_relation_name(i), k.domain))
    return expand_with_domains(schema, seeds)


@dataclass(frozen=True, order=True)
class AttrNode:
    relation: str
    position: int
    domain: str
    mode: Mode

    @property
    def label(self) -> str:
        return f"{self.relation}.{self.position}:{self.domain}^{self.mode.value}"


@dataclass(frozen=True)
class DGraph:
    nodes: tuple[AttrNode, ...]
    arcs: frozenset[tuple[AttrNode, AttrNode]]

    @property
    def relations(self) -> tuple[str, ...]:
        return tuple(sorted({n.relation for n in self.nodes}))

    def to_dot(self, name: str = "d_graph") -> str:
        lines = [f"digraph {name} {{"]
        for n in self.nodes:
            lines.append(f"  {_dot_id(n.label)};")
        for u, v in sorted(self.arcs):
            lines.append(f"  {_dot_id(u.label)} -> {_dot_id(v.label)};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def d_graph_of(expanded: Schema) -> DGraph:
    nodes = []
    for r in sorted(expanded, key=lambda r: r.name):
        for i, a in enumerate(r.attributes):
            nodes.append(AttrNode(r.name, i, a.domain, a.mode))
    outs: dict[str, list[AttrNode]] = defaultdict(list)
    for n in nodes:
        if n.mode is Mode.OUTPUT:
            outs[n.domain].append(n)
    arcs = {(u, v) for v in nodes if v.mode is Mode.INPUT for u in outs[v.domain]}
    return DGraph(tuple(nodes), frozenset(arcs))


def d_graph(schema: Schema, query: KeywordQuery) -> DGraph:
    return d_graph_of(expanded_schema(schema, query))


def visible_relations(dgraph: DGraph) -> frozenset[str]:
    """Relations all of whose input nodes can be fed, reached as a fixpoint
    from the relations without inputs. Keyword relations are left out of
    the result (they are always visible)."""
    inputs: dict[str, list[AttrNode]] = {r: [] for r in dgraph.relations}
    feeders: dict[AttrNode, set[str]] = defaultdict(set)
    for n in dgraph.nodes:
        if n.mode is Mode.INPUT:
            inputs[n.relation].append(n)
    for u, v in dgraph.arcs:
        feeders[v].add(u.relation)
    usable = {r for r, ins in inputs.items() if not ins}
    changed = True
    while changed:
        changed = False
        for r, ins in inputs.items():
            if r not in usable and all(feeders[v] & usable for v in ins):
                usable.add(r)
                changed = True
    return frozenset(r for r in usable if not r.startswith(RESERVED_PREFIX))


def visible_with_seeds(schema: Schema, seed_domains: Iterable[str]) -> frozenset[str]:
    """Same fixpoint as :func:`visible_relations`, computed on domains.

    ``seed_domains`` stand for the keyword relations of the expanded schema.
    """
    available = set(seed_domains)
    pending = list(schema.relations)
    usable: set[str] = set()
    changed = True
    while changed:
        changed = False
        rest = []
        for r in pending:
            if r.input_domains <= available:
                usable.add(r.name)
                available |= r.output_domains
                changed = True
            else:
                rest.append(r)
        pending = rest
    return frozenset(usable)
