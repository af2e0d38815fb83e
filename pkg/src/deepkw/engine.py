"""Answer extraction under access limitations.

:func:`extract` walks witnesses in order of estimated accesses and follows
each one depth first, accessing only bindings it has not tried before and
peeling the known tuples after every access. :func:`reachable_portion`
is the exhaustive baseline and :func:`optimal_answer` a brute-force oracle
for minimum-size answers on small instances.
"""

from __future__ import annotations

import itertools
import json
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .analysis import (
    Witness,
    WitnessSpace,
    answerable_domains,
    keyword_candidates,
    witness_cost,
)
from .core import (
    Binding,
    KeywordQuery,
    Relation,
    Schema,
    Tuple,
    Value,
    check_query,
    ensure_valid,
)
from .formats import format_tuple
from .graphs import components, covers, is_connected_covering
from .source import AccessExecutor


@dataclass(frozen=True)
class Answer:
    tuples: frozenset[Tuple]

    def __iter__(self) -> Iterator[Tuple]:
        return iter(sorted(self.tuples))

    def __len__(self) -> int:
        return len(self.tuples)

    def __contains__(self, t: object) -> bool:
        return t in self.tuples

    def lines(self) -> list[str]:
        return [format_tuple(t) for t in self]


def _keywords_linked(tuples: set[Tuple], query: KeywordQuery) -> bool:
    return any(covers(comp, query) for comp in components(tuples))


def peel(tuples: Iterable[Tuple], query: KeywordQuery) -> Optional[Answer]:
    """Drop tuples while some connected part of the rest covers ``query``.

    Tuples are tried in canonical order, so stray tuples outside the
    covering component go too. Returns None when no connected subset of the
    input covers the keywords.
    """
    current = set(tuples)
    if not _keywords_linked(current, query):
        return None
    previous: set[Tuple] = set()
    while previous != current:
        previous = set(current)
        for t in sorted(previous):
            if _keywords_linked(current - {t}, query):
                current.discard(t)
    return Answer(frozenset(current))


def check_answer(
    candidate: Iterable[Tuple], query: KeywordQuery, reachable: Iterable[Tuple]
) -> bool:
    cand = frozenset(candidate)
    if not cand <= frozenset(reachable):
        return False
    if not is_connected_covering(cand, query):
        return False
    items = sorted(cand)
    for size in range(1, len(items)):
        for sub in itertools.combinations(items, size):
            if is_connected_covering(sub, query):
                return False
    return True


# formable bindings -------------------------------------------------------------


def formable(relation: Relation, values: dict[str, set[Value]]) -> list[Binding]:
    """Bindings buildable from ``values``, in lexicographic literal order."""
    pools = [sorted(values.get(a.domain, ()), key=lambda v: v.literal) for a in relation.inputs]
    return [Binding(relation.name, combo) for combo in itertools.product(*pools)]


def keyword_constants(query: KeywordQuery, schema: Schema) -> frozenset[Value]:
    """Typed keywords as values; untyped ones in every domain of the schema."""
    out = set()
    for k in query:
        if k.typed:
            out.add(k.value())
        else:
            out.update(Value(d, k.literal) for d in schema.domains)
    return frozenset(out)


def reachable_portion(
    schema: Schema, executor: AccessExecutor, constants: Iterable[Value]
) -> frozenset[Tuple]:
    """All tuples extractable from ``constants`` by any sequence of accesses."""
    values: dict[str, set[Value]] = defaultdict(set)
    for c in constants:
        values[c.domain].add(c)
    known: set[Tuple] = set()
    done: set[tuple[str, Binding]] = set()
    changed = True
    while changed:
        changed = False
        for rel in sorted(schema, key=lambda r: r.name):
            for b in formable(rel, values):
                if (rel.name, b) in done:
                    continue
                done.add((rel.name, b))
                changed = True
                for t in executor.access(rel, b):
                    known.add(t)
                    for v in t.values:
                        values[v.domain].add(v)
    return frozenset(known)


def optimal_answer(
    query: KeywordQuery, schema: Schema, executor: AccessExecutor
) -> Optional[Answer]:
    """A minimum-size answer among the tuples reachable from the keywords.

    Subsets are searched by increasing size in canonical order; the first
    connected covering subset is returned.
    """
    reach = reachable_portion(schema, executor, keyword_constants(query, schema))
    # Only components covering every keyword can host an answer; dropping the
    # others keeps the canonical order of the remaining candidates.
    pool = sorted(t for comp in components(reach) if covers(comp, query) for t in comp)
    if not pool:
        return None
    keywords = list(query)
    hits = [frozenset(i for i, k in enumerate(keywords) if any(k.matches(v) for v in t.values)) for t in pool]
    suffix = [frozenset()] * (len(pool) + 1)
    for i in range(len(pool) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | hits[i]
    everything = frozenset(range(len(keywords)))

    def search(size: int, start: int, chosen: list[int], covered: frozenset) -> Optional[list[int]]:
        if len(chosen) == size:
            if covered == everything and is_connected_covering([pool[i] for i in chosen], query):
                return list(chosen)
            return None
        for i in range(start, len(pool) - (size - len(chosen)) + 1):
            if not (everything - covered) <= (covered | suffix[i]):
                break
            chosen.append(i)
            found = search(size, i + 1, chosen, covered | hits[i])
            chosen.pop()
            if found is not None:
                return found
        return None

    for size in range(1, len(pool) + 1):
        found = search(size, 0, [], frozenset())
        if found is not None:
            return Answer(frozenset(pool[i] for i in found))
    return None


# extraction --------------------------------------------------------------------


@dataclass
class ExtractionResult:
    answer: Optional[Answer]
    accesses: int
    per_relation: dict[str, int]
    witnesses: list[Witness] = field(default_factory=list)
    elapsed: float = 0.0
    extracted: frozenset[Tuple] = frozenset()

    @property
    def found(self) -> bool:
        return self.answer is not None

    def report(self, timing: bool = False) -> dict:
        out = {
            "verdict": "answer" if self.found else "no-answer",
            "tuples": self.answer.lines() if self.found else [],
            "total_accesses": self.accesses,
            "accesses": self.per_relation,
            "witnesses_attempted": [str(w) for w in self.witnesses],
        }
        if timing:
            out["elapsed_seconds"] = round(self.elapsed, 6)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.report(timing), indent=2, sort_keys=True)


class _Found(Exception):
    def __init__(self, answer: Answer):
        self.answer = answer


class _Hopeless(Exception):
    pass


class _Extraction:
    def __init__(self, query: KeywordQuery, schema: Schema, executor: AccessExecutor, precheck: bool):
        ensure_valid(schema)
        check_query(schema, query)
        self.query = query
        self.keywords = list(query)
        self.schema = schema
        self.ex = executor
        self.precheck = precheck
        self.cands = list(keyword_candidates(query, schema))
        self.values: dict[str, set[Value]] = {d: set() for d in schema.domains}
        for k, cand in zip(self.keywords, self.cands):
            for d in cand & schema.domains:
                self.values[d].add(Value(d, k.literal))
        self.tuples: dict[str, set[Tuple]] = {r.name: set() for r in schema}
        self.known: set[Tuple] = set()
        self.accessed: set[str] = set()
        self.tried: set[tuple[str, Binding]] = set()
        self.version = 0
        self.explored: set[tuple[str, ...]] = set()
        self.attempted: list[Witness] = []
        self._spaces: dict[tuple, WitnessSpace] = {}
        self._fresh: tuple[int, dict[str, bool]] = (-1, {})
        self._settled: dict[int, int] = {}

    # knowledge ---------------------------------------------------------------

    def space(self) -> WitnessSpace:
        key = tuple(self.cands)
        if key not in self._spaces:
            self._spaces[key] = WitnessSpace(self.schema, key, self.keywords)
        return self._spaces[key]

    def has_formable(self, rel: Relation) -> bool:
        return all(self.values.get(d) for d in rel.input_domains)

    def has_new(self, name: str) -> bool:
        version, memo = self._fresh
        if version != self.version:
            memo = {}
            self._fresh = (self.version, memo)
        if name not in memo:
            rel = self.schema.relation(name)
            memo[name] = any((name, b) not in self.tried for b in formable(rel, self.values))
        return memo[name]

    def absorb(self, rel: Relation, out: tuple[Tuple, ...]) -> bool:
        self.version += 1
        self.accessed.add(rel.name)
        fresh = [t for t in out if t not in self.tuples[rel.name]]
        self.tuples[rel.name].update(fresh)
        self.known.update(fresh)
        for t in out:
            for v in t.values:
                self.values.setdefault(v.domain, set()).add(v)
        for i, k in enumerate(self.keywords):
            if len(self.cands[i]) == 1:
                continue
            hit = next((v for t in fresh for v in t.values if v.literal == k.literal), None)
            if hit is not None:
                self.cands[i] = frozenset({hit.domain})
                for d, vals in self.values.items():
                    if d != hit.domain:
                        vals.discard(Value(d, k.literal))
        return bool(fresh)

    # checks ------------------------------------------------------------------

    def check_answer(self) -> None:
        if self.precheck and not covers(self.known, self.query):
            return
        ans = peel(self.known, self.query)
        if ans is not None:
            raise _Found(ans)

    def unexplored_relations(self, space: WitnessSpace) -> set[str]:
        out: set[str] = set()
        for k in space.pools:
            if len(k) == 1:
                (only,) = k
                if not self.schema.relation(only).has_self_join and (only,) in self.explored:
                    continue
            out |= k
        return out

    def check_hopeless(self, path: tuple[str, ...], i: int, rel: Relation) -> None:
        if self.has_new(rel.name):
            return
        space = self.space()
        later = {d for n in path[i + 1 :] for d in self.schema.relation(n).domains}
        others = {d for n in self.unexplored_relations(space) for d in self.schema.relation(n).domains}
        for k, cand in zip(self.keywords, self.cands):
            if any(k.matches(v) for t in self.known for v in t.values):
                continue
            if cand & rel.domains and not cand & later and not cand & others:
                raise _Hopeless()

    # traversal ---------------------------------------------------------------

    def follow(self, path: tuple[str, ...], i: int = 0) -> None:
        if i == len(path):
            return
        rel = self.schema.relation(path[i])
        queue = formable(rel, self.values)
        seen = set(queue)
        pos = 0
        while pos < len(queue):
            b = queue[pos]
            pos += 1
            if (rel.name, b) not in self.tried:
                self.tried.add((rel.name, b))
                out = self.ex.access(rel, b)
                if self.absorb(rel, out):
                    self.check_answer()
                self.check_hopeless(path, i, rel)
            # Re-entering the rest of the path with unchanged knowledge would
            # only revisit tried bindings.
            if self._settled.get(i) != self.version:
                self.follow(path, i + 1)
                self._settled[i] = self.version
            for nb in formable(rel, self.values):
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)

    def _prefix_state(self, state, name):
        if state == "new":
            return "new"
        if self.has_new(name):
            return "new"
        if self.has_formable(self.schema.relation(name)):
            return "ok"
        return None

    def select(self, space: WitnessSpace, horizon: int) -> Optional[tuple[str, ...]]:
        best = None
        for n in range(1, horizon + 1):
            for path, state in space.walks(n, self._prefix_state):
                if state != "new":
                    continue
                key = (witness_cost(path, self.accessed), path, len(path))
                if best is None or key < best:
                    best = key
        return None if best is None else best[1]

    def run(self) -> Optional[Answer]:
        if not answerable_domains(self.schema, tuple(self.cands)):
            return None
        horizon = 1
        try:
            while True:
                space = self.space()
                if not any(self.has_new(n) for n in space.pool_of):
                    return None
                path = self.select(space, horizon)
                if path is None:
                    horizon += 1
                    if horizon > 3 * len(space.pool_of) + 1:
                        raise AssertionError("no witness found within the length bound")
                    continue
                self.explored.add(path)
                self.attempted.append(space.witness(path))
                self._settled = {}
                self.follow(path)
        except _Found as hit:
            return hit.answer
        except _Hopeless:
            return None


def extract(
    query: KeywordQuery,
    schema: Schema,
    executor: AccessExecutor,
    *,
    precheck: bool = True,
) -> ExtractionResult:
    """Find one answer to ``query`` while avoiding unnecessary accesses.

    Keywords without a domain are seeded into every domain container and
    pinned to their domain once a tuple containing them is extracted.
    ``precheck=False`` runs peel after every access that adds tuples, even
    when some keyword has not been seen yet.
    """
    start = time.perf_counter()
    before = executor.total
    run = _Extraction(query, schema, executor, precheck)
    answer = run.run()
    stats = executor.stats()
    return ExtractionResult(
        answer=answer,
        accesses=executor.total - before,
        per_relation=stats.per_relation,
        witnesses=run.attempted,
        elapsed=time.perf_counter() - start,
        extracted=frozenset(run.known),
    )


def extract_unknown_domains(
    query: KeywordQuery, schema: Schema, executor: AccessExecutor, *, precheck: bool = True
) -> ExtractionResult:
    if query.fully_typed:
        raise ValueError("extract_unknown_domains needs at least one untyped keyword")
    return extract(query, schema, executor, precheck=precheck)
