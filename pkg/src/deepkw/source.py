"""Access-limited gateway to the data.

Tuples can only be obtained by calling :meth:`AccessExecutor.access` with a
binding for the relation's input attributes. Every access is logged and, by
default, cached so a repeated binding costs nothing.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Protocol

from .core import Binding, Instance, Relation, Schema, SchemaError, Tuple


class Backend(Protocol):
    """Deterministic, side-effect free selection by binding."""

    def select(self, relation: Relation, binding: Binding) -> Iterable[Tuple]: ...


class InstanceBackend:
    """In-memory backend over an :class:`Instance`, indexed by input values."""

    def __init__(self, schema: Schema, instance: Instance):
        self._index: dict[str, dict[tuple, list[Tuple]]] = {}
        for rel in schema:
            idx: dict[tuple, list[Tuple]] = defaultdict(list)
            for t in instance.relation(rel.name):
                idx[Binding.from_tuple(rel, t).values].append(t)
            self._index[rel.name] = idx

    def select(self, relation: Relation, binding: Binding) -> list[Tuple]:
        return list(self._index.get(relation.name, {}).get(binding.values, ()))


@dataclass(frozen=True)
class AccessRecord:
    seq: int
    relation: str
    binding: Binding
    output_size: int

    def format(self) -> str:
        lits = ",".join(v.literal for v in self.binding.values)
        return f"{self.seq}\t{self.relation}\t{lits}\t{self.output_size}"


@dataclass(frozen=True)
class AccessStats:
    per_relation: dict[str, int]
    total: int


class AccessExecutor:
    """Executes accesses against a backend, logging each one.

    With ``cache=False`` every call goes to the backend and is logged, so a
    repeated binding counts again; :meth:`has_accessed` still answers from
    the log.
    """

    def __init__(
        self,
        schema: Schema,
        backend: Backend | Instance,
        *,
        cache: bool = True,
    ):
        if isinstance(backend, Instance):
            backend = InstanceBackend(schema, backend)
        self.schema = schema
        self.backend = backend
        self.cache_enabled = cache
        self.log: list[AccessRecord] = []
        self._cache: dict[tuple[str, Binding], tuple[Tuple, ...]] = {}
        self._seen: set[tuple[str, Binding]] = set()
        self._by_relation: dict[str, list[Binding]] = defaultdict(list)

    def _relation(self, relation: Relation | str) -> Relation:
        name = relation if isinstance(relation, str) else relation.name
        try:
            return self.schema.relation(name)
        except KeyError:
            raise SchemaError(f"unknown relation {name!r}") from None

    def access(self, relation: Relation | str, binding: Binding) -> tuple[Tuple, ...]:
        rel = self._relation(relation)
        problem = binding.check(rel)
        if problem:
            raise SchemaError(problem)
        key = (rel.name, binding)
        if self.cache_enabled and key in self._cache:
            return self._cache[key]
        out = tuple(sorted(t for t in self.backend.select(rel, binding) if binding.matches(rel, t)))
        self.log.append(AccessRecord(len(self.log) + 1, rel.name, binding, len(out)))
        if key not in self._seen:
            self._seen.add(key)
            self._by_relation[rel.name].append(binding)
        if self.cache_enabled:
            self._cache[key] = out
        return out

    def has_accessed(self, relation: Relation | str, binding: Binding) -> bool:
        name = relation if isinstance(relation, str) else relation.name
        return (name, binding) in self._seen

    def accessed_bindings(self, relation: str) -> list[Binding]:
        return list(self._by_relation.get(relation, ()))

    def stats(self) -> AccessStats:
        counts = Counter(rec.relation for rec in self.log)
        per = {name: counts.get(name, 0) for name in sorted(self.schema.names)}
        return AccessStats(per, len(self.log))

    @property
    def total(self) -> int:
        return len(self.log)

    def export_log(self) -> str:
        return "".join(rec.format() + "\n" for rec in self.log)

    def extracted(self) -> frozenset[Tuple]:
        """Union of all access outputs so far (requires caching)."""
        return frozenset(t for out in self._cache.values() for t in out)


def access_stats(executor: AccessExecutor) -> AccessStats:
    return executor.stats()


def fresh_executor(schema: Schema, instance: Instance, *, cache: bool = True) -> AccessExecutor:
    return AccessExecutor(schema, InstanceBackend(schema, instance), cache=cache)
