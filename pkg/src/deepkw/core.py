"""Domain model: abstract domains, relation schemas with access patterns,
instances, bindings and keyword queries.

All types are frozen dataclasses. Construction never raises on semantic
problems (duplicate names, domain clashes); those are reported by
:func:`validate_schema` and :func:`validate_instance` so that a caller can
show every violation at once. :func:`ensure_valid` turns a report into an
exception for code paths that need a sound schema.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

#: Prefix reserved for the unary relations added by schema expansion.
RESERVED_PREFIX = "__kw_"


class SchemaError(ValueError):
    """Raised when a schema, instance or query fails validation."""


class UnknownDomainError(SchemaError):
    """A keyword names a domain that is not in the schema's catalog."""


class Mode(enum.Enum):
    INPUT = "i"
    OUTPUT = "o"


@dataclass(frozen=True, order=True)
class Value:
    """A literal tagged with its abstract domain."""

    domain: str
    literal: str

    def __str__(self) -> str:
        return f"{self.literal}:{self.domain}"


@dataclass(frozen=True)
class Attribute:
    name: str
    domain: str
    mode: Mode = Mode.OUTPUT

    @property
    def is_input(self) -> bool:
        return self.mode is Mode.INPUT


@dataclass(frozen=True)
class Relation:
    """A relation schema together with its (single) access pattern."""

    name: str
    attributes: tuple[Attribute, ...]

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))

    @property
    def arity(self) -> int:
        return len(self.attributes)

    @property
    def input_positions(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.attributes) if a.is_input)

    @property
    def inputs(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if a.is_input)

    @property
    def outputs(self) -> tuple[Attribute, ...]:
        return tuple(a for a in self.attributes if not a.is_input)

    @property
    def domains(self) -> frozenset[str]:
        return frozenset(a.domain for a in self.attributes)

    @property
    def input_domains(self) -> frozenset[str]:
        return frozenset(a.domain for a in self.inputs)

    @property
    def output_domains(self) -> frozenset[str]:
        return frozenset(a.domain for a in self.outputs)

    @property
    def has_self_join(self) -> bool:
        """True when two attributes share a domain (a self-loop in the
        schema join graph)."""
        return len(self.domains) < self.arity


@dataclass(frozen=True)
class Schema:
    """A database schema under access patterns.

    ``catalog`` is the set of abstract domains known to the schema. It
    defaults to the domains used by the attributes; sub-schemas produced by
    :meth:`restrict` keep the parent's catalog, so a domain can be known
    without any attribute carrying it.
    """

    relations: tuple[Relation, ...]
    catalog: frozenset[str] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.catalog is None:
            doms = frozenset(a.domain for r in self.relations for a in r.attributes)
            object.__setattr__(self, "catalog", doms)
        else:
            object.__setattr__(self, "catalog", frozenset(self.catalog))

    def __iter__(self) -> Iterator[Relation]:
        return iter(self.relations)

    def __len__(self) -> int:
        return len(self.relations)

    def __contains__(self, name: object) -> bool:
        return any(r.name == name for r in self.relations)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.relations)

    def relation(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise KeyError(f"unknown relation {name!r}")

    @property
    def domains(self) -> frozenset[str]:
        """Domains carried by at least one attribute."""
        return frozenset(a.domain for r in self.relations for a in r.attributes)

    def restrict(self, names: Iterable[str]) -> "Schema":
        keep = set(names)
        return Schema(tuple(r for r in self.relations if r.name in keep), self.catalog)

    def with_relations(self, extra: Iterable[Relation]) -> "Schema":
        rels = self.relations + tuple(extra)
        return Schema(rels, self.catalog | {a.domain for r in rels for a in r.attributes})


@dataclass(frozen=True)
class Tuple:
    """A tuple over a named relation. Values follow attribute order."""

    relation: str
    values: tuple[Value, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def sort_key(self) -> tuple:
        return (self.relation, tuple(v.literal for v in self.values))

    def __lt__(self, other: "Tuple") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        from .formats import format_tuple

        return format_tuple(self)


def make_tuple(relation: Relation, literals: Iterable[str]) -> Tuple:
    """Build a tuple from bare literals, typing each by its attribute."""
    lits = list(literals)
    if len(lits) != relation.arity:
        raise SchemaError(
            f"{relation.name} has arity {relation.arity}, got {len(lits)} values"
        )
    return Tuple(
        relation.name,
        tuple(Value(a.domain, lit) for a, lit in zip(relation.attributes, lits)),
    )


def check_tuple(relation: Relation, t: Tuple) -> Optional[str]:
    """Return a violation message, or None when ``t`` fits ``relation``."""
    if t.relation != relation.name:
        return f"tuple of {t.relation} checked against {relation.name}"
    if len(t.values) != relation.arity:
        return f"{relation.name}: arity {relation.arity}, tuple has {len(t.values)} values"
    for i, (a, v) in enumerate(zip(relation.attributes, t.values)):
        if a.domain != v.domain:
            return (
                f"{relation.name}.{a.name}: value {v.literal!r} has domain "
                f"{v.domain}, expected {a.domain} (position {i})"
            )
    return None


@dataclass(frozen=True)
class Binding:
    """One value per input attribute of ``relation``, in attribute order."""

    relation: str
    values: tuple[Value, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def sort_key(self) -> tuple:
        return tuple(v.literal for v in self.values)

    @classmethod
    def from_tuple(cls, relation: Relation, t: Tuple) -> "Binding":
        return cls(relation.name, tuple(t.values[i] for i in relation.input_positions))

    def check(self, relation: Relation) -> Optional[str]:
        if self.relation != relation.name:
            return f"binding for {self.relation} used with {relation.name}"
        inputs = relation.inputs
        if len(self.values) != len(inputs):
            return (
                f"{relation.name} has {len(inputs)} input attributes, "
                f"binding has {len(self.values)} values"
            )
        for a, v in zip(inputs, self.values):
            if a.domain != v.domain:
                return f"{relation.name}.{a.name} expects {a.domain}, got {v.domain}"
        return None

    def matches(self, relation: Relation, t: Tuple) -> bool:
        return all(t.values[i] == v for i, v in zip(relation.input_positions, self.values))


@dataclass(frozen=True)
class Instance:
    """Per-relation tuple sets. Duplicates collapse since tuples are hashable."""

    tuples: Mapping[str, frozenset[Tuple]] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {name: frozenset(ts) for name, ts in dict(self.tuples).items()}
        object.__setattr__(self, "tuples", frozen)

    @classmethod
    def of(cls, tuples: Iterable[Tuple]) -> "Instance":
        grouped: dict[str, set[Tuple]] = defaultdict(set)
        for t in tuples:
            grouped[t.relation].add(t)
        return cls(grouped)

    def __iter__(self) -> Iterator[Tuple]:
        for name in sorted(self.tuples):
            yield from sorted(self.tuples[name])

    def __len__(self) -> int:
        return sum(len(ts) for ts in self.tuples.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return frozenset(self) == frozenset(other)

    def __hash__(self) -> int:
        return hash(frozenset(self))

    def relation(self, name: str) -> frozenset[Tuple]:
        return self.tuples.get(name, frozenset())


@dataclass(frozen=True, order=True)
class Keyword:
    """A keyword literal; ``domain`` is None when the domain is unknown."""

    literal: str
    domain: Optional[str] = None

    @property
    def typed(self) -> bool:
        return self.domain is not None

    def value(self) -> Value:
        if self.domain is None:
            raise UnknownDomainError(f"keyword {self.literal!r} has no domain")
        return Value(self.domain, self.literal)

    def matches(self, v: Value) -> bool:
        if self.domain is None:
            return v.literal == self.literal
        return v.domain == self.domain and v.literal == self.literal

    def __str__(self) -> str:
        return self.literal if self.domain is None else f"{self.literal}:{self.domain}"


class KeywordQuery:
    """A nonempty set of keywords, iterated in canonical order."""

    __slots__ = ("keywords",)

    def __init__(self, keywords: Iterable[Keyword | Value | str]):
        kws = set()
        for k in keywords:
            if isinstance(k, Value):
                k = Keyword(k.literal, k.domain)
            elif isinstance(k, str):
                k = Keyword(k)
            kws.add(k)
        if not kws:
            raise SchemaError("a keyword query needs at least one keyword")
        # Domains are disjoint, so an untyped literal that also occurs typed
        # names the same value.
        typed = {k.literal for k in kws if k.typed}
        kws = {k for k in kws if k.typed or k.literal not in typed}
        self.keywords: tuple[Keyword, ...] = tuple(
            sorted(kws, key=lambda k: (k.literal, k.domain or ""))
        )

    @classmethod
    def typed(cls, *pairs: tuple[str, str]) -> "KeywordQuery":
        return cls(Keyword(lit, dom) for lit, dom in pairs)

    def __iter__(self) -> Iterator[Keyword]:
        return iter(self.keywords)

    def __len__(self) -> int:
        return len(self.keywords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KeywordQuery) and self.keywords == other.keywords

    def __hash__(self) -> int:
        return hash(self.keywords)

    def __repr__(self) -> str:
        return f"KeywordQuery({', '.join(map(str, self.keywords))})"

    @property
    def fully_typed(self) -> bool:
        return all(k.typed for k in self.keywords)

    def values(self) -> frozenset[Value]:
        """Typed keyword values; raises for untyped keywords."""
        return frozenset(k.value() for k in self.keywords)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


def validate_schema(schema: Schema) -> ValidationReport:
    report = ValidationReport()
    seen: set[str] = set()
    for r in schema.relations:
        if r.name in seen:
            report.violations.append(f"duplicate relation name {r.name!r}")
        seen.add(r.name)
        if r.arity < 1:
            report.violations.append(f"relation {r.name!r} has no attributes")
        attr_names: set[str] = set()
        for a in r.attributes:
            if a.name in attr_names:
                report.violations.append(f"{r.name}: duplicate attribute name {a.name!r}")
            attr_names.add(a.name)
            if a.domain not in schema.catalog:
                report.violations.append(
                    f"{r.name}.{a.name}: domain {a.domain!r} not in catalog"
                )
            if not isinstance(a.mode, Mode):
                report.violations.append(f"{r.name}.{a.name}: bad access mode {a.mode!r}")
    return report


def validate_instance(
    schema: Schema, instance: Instance, query: Optional[KeywordQuery] = None
) -> ValidationReport:
    """Type-check every tuple and enforce domain disjointness.

    Typed keywords of ``query`` take part in the disjointness check.
    """
    report = ValidationReport()
    owner: dict[str, str] = {}

    def register(v: Value, where: str) -> None:
        prev = owner.setdefault(v.literal, v.domain)
        if prev != v.domain:
            report.violations.append(
                f"domain disjointness: literal {v.literal!r} under both "
                f"{prev} and {v.domain} ({where})"
            )

    for name in sorted(instance.tuples):
        if name not in schema:
            report.violations.append(f"tuples for unknown relation {name!r}")
            continue
        rel = schema.relation(name)
        for t in sorted(instance.tuples[name]):
            problem = check_tuple(rel, t)
            if problem:
                report.violations.append(problem)
                continue
            for v in t.values:
                register(v, name)
    if query is not None:
        for k in query:
            if k.typed:
                register(k.value(), "query")
    return report


def ensure_valid(schema: Schema, instance: Optional[Instance] = None) -> None:
    report = validate_schema(schema)
    if not report.ok:
        raise SchemaError(str(report))
    if instance is not None:
        report = validate_instance(schema, instance)
        if not report.ok:
            raise SchemaError(str(report))


def check_query(schema: Schema, query: KeywordQuery) -> None:
    """Raise UnknownDomainError for a typed keyword outside the catalog."""
    for k in query:
        if k.typed and k.domain not in schema.catalog:
            raise UnknownDomainError(
                f"keyword {k.literal!r}: domain {k.domain!r} is not in the catalog"
            )
