"""Keyword search over relational sources with access limitations."""

from .analysis import (
    Witness,
    analyze,
    answerable,
    compatible,
    enumerate_witnesses,
    useful_nodes,
    witness_cost,
)
from .core import (
    Attribute,
    Binding,
    Instance,
    Keyword,
    KeywordQuery,
    Mode,
    Relation,
    Schema,
    SchemaError,
    Tuple,
    UnknownDomainError,
    Value,
    validate_instance,
    validate_schema,
)
from .engine import (
    Answer,
    ExtractionResult,
    check_answer,
    extract,
    extract_unknown_domains,
    optimal_answer,
    peel,
    reachable_portion,
)
from .formats import (
    ParseError,
    format_instance,
    format_query,
    format_schema,
    parse_instance,
    parse_query,
    parse_schema,
)
from .graphs import (
    d_graph,
    expanded_schema,
    is_connected_covering,
    join_graph,
    schema_join_graph,
    visible_relations,
)
from .source import AccessExecutor, AccessRecord, access_stats, fresh_executor

__version__ = "0.1.0"

__all__ = [
    "AccessExecutor",
    "AccessRecord",
    "access_stats",
    "fresh_executor",
    "Witness",
    "analyze",
    "answerable",
    "compatible",
    "enumerate_witnesses",
    "useful_nodes",
    "witness_cost",
    "Attribute",
    "Binding",
    "Instance",
    "Keyword",
    "KeywordQuery",
    "Mode",
    "Relation",
    "Schema",
    "SchemaError",
    "Tuple",
    "UnknownDomainError",
    "Value",
    "validate_instance",
    "validate_schema",
    "Answer",
    "ExtractionResult",
    "check_answer",
    "extract",
    "extract_unknown_domains",
    "optimal_answer",
    "peel",
    "reachable_portion",
    "ParseError",
    "format_instance",
    "format_query",
    "format_schema",
    "parse_instance",
    "parse_query",
    "parse_schema",
    "d_graph",
    "expanded_schema",
    "is_connected_covering",
    "join_graph",
    "schema_join_graph",
    "visible_relations",
]
