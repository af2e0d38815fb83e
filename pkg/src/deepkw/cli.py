"""Command-line front end.

    deepkw analyze --schema S --query Q
    deepkw query   --schema S --instance I --query Q [--log F] [--dot DIR]
    deepkw reach   --schema S --instance I --constants C
    deepkw optimal --schema S --instance I --query Q
    deepkw stats   --schema S --instance I --query Q

Exit status: 0 when an answer was found (or the query is answerable for
``analyze``), 1 when not, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .analysis import analyze
from .core import (
    Instance,
    KeywordQuery,
    Schema,
    SchemaError,
    validate_instance,
    validate_schema,
)
from .engine import extract, keyword_constants, optimal_answer, reachable_portion
from .formats import (
    ParseError,
    format_tuples,
    parse_constants,
    parse_instance,
    parse_query,
    parse_schema,
)
from .graphs import d_graph, join_graph, schema_join_graph
from .source import fresh_executor

MODES = ("analyze", "query", "reach", "optimal", "stats")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str
    schema: Path
    instance: Optional[Path] = None
    query: Optional[str] = None
    constants: Optional[str] = None
    dot: Optional[Path] = None
    log: Optional[Path] = None
    seedless: bool = False
    timing: bool = False


def _read(path: Path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {what} file {path}: {exc.strerror}") from None


def _load(config: RunConfig) -> tuple[Schema, Optional[Instance], Optional[KeywordQuery]]:
    try:
        schema = parse_schema(_read(config.schema, "schema"))
    except ParseError as exc:
        raise InputError(f"{config.schema}: {exc}") from None
    report = validate_schema(schema)
    if not report.ok:
        raise InputError(f"{config.schema}: {report}")
    instance = None
    if config.instance is not None:
        try:
            instance = parse_instance(_read(config.instance, "instance"), schema)
        except ParseError as exc:
            raise InputError(f"{config.instance}: {exc}") from None
    query = None
    if config.query is not None:
        try:
            query = parse_query(config.query)
        except ParseError as exc:
            raise InputError(f"--query: {exc}") from None
        except SchemaError as exc:
            raise InputError(f"--query: {exc}") from None
    if instance is not None:
        report = validate_instance(schema, instance, query)
        # Values are typed, so a literal shared by two domains is still
        # processed correctly; report it without refusing the input.
        for v in report.violations:
            if v.startswith("domain disjointness"):
                print(f"deepkw: warning: {config.instance}: {v}", file=sys.stderr)
            else:
                raise InputError(f"{config.instance}: {v}")
    if config.mode != "reach" and query is None:
        raise InputError(f"{config.mode} needs --query")
    if config.mode != "analyze" and instance is None:
        raise InputError(f"{config.mode} needs --instance")
    return schema, instance, query


def _write_dot(directory: Path, name: str, text: str) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / f"{name}.dot").write_text(text, encoding="utf-8")


def _schema_dots(config: RunConfig, schema: Schema, query: Optional[KeywordQuery]) -> None:
    if config.dot is None:
        return
    _write_dot(config.dot, "schema_join_graph", schema_join_graph(schema).to_dot())
    if query is not None and query.fully_typed:
        _write_dot(config.dot, "d_graph", d_graph(schema, query).to_dot())


def run(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    schema, instance, query = _load(config)
    _schema_dots(config, schema, query)

    if config.mode == "analyze":
        if not query.fully_typed:
            raise InputError("analyze needs every keyword typed (literal:Domain)")
        try:
            result = analyze(query, schema)
        except SchemaError as exc:
            raise InputError(str(exc)) from None
        print(result.format(), file=out)
        return 0 if result.answerable else 1

    if config.mode == "reach":
        if config.constants is None:
            raise InputError("reach needs --constants")
        try:
            constants = parse_constants(config.constants)
        except ParseError as exc:
            raise InputError(f"--constants: {exc}") from None
        executor = fresh_executor(schema, instance)
        tuples = reachable_portion(schema, executor, constants)
        out.write(format_tuples(tuples))
        print(f"# tuples={len(tuples)} accesses={executor.total}", file=out)
        _finish(config, executor, tuples)
        return 0

    if config.mode == "optimal":
        executor = fresh_executor(schema, instance)
        answer = optimal_answer(query, schema, executor)
        report = {
            "verdict": "answer" if answer else "no-answer",
            "tuples": answer.lines() if answer else [],
            "total_accesses": executor.total,
            "accesses": executor.stats().per_relation,
        }
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
        _finish(config, executor, answer.tuples if answer else None)
        return 0 if answer else 1

    executor = fresh_executor(schema, instance)
    try:
        result = extract(query, schema, executor, precheck=not config.seedless)
    except SchemaError as exc:
        raise InputError(str(exc)) from None

    if config.mode == "query":
        print(result.to_json(config.timing), file=out)
    else:
        base = fresh_executor(schema, instance)
        reachable_portion(schema, base, keyword_constants(query, schema))
        report = {
            "extract": result.report(config.timing),
            "baseline": {
                "total_accesses": base.total,
                "accesses": base.stats().per_relation,
            },
            "extract_le_baseline": result.accesses <= base.total,
        }
        print(json.dumps(report, indent=2, sort_keys=True), file=out)
    _finish(config, executor, result.answer.tuples if result.found else None)
    return 0 if result.found else 1


def _finish(config: RunConfig, executor, tuples) -> None:
    if config.log is not None:
        Path(config.log).write_text(executor.export_log(), encoding="utf-8")
    if config.dot is not None and tuples is not None:
        _write_dot(config.dot, "join_graph", join_graph(tuples).to_dot())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepkw", description="Keyword search over access-limited relational sources."
    )
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--schema", required=True, type=Path)
    parser.add_argument("--instance", type=Path)
    parser.add_argument("--query", help='keywords, e.g. "IT:Dept, DBA:Role" or "IT, DBA"')
    parser.add_argument("--constants", help='typed constants for reach, e.g. "c0:A1"')
    parser.add_argument("--dot", type=Path, help="directory for DOT exports")
    parser.add_argument("--log", type=Path, help="write the access log here")
    parser.add_argument(
        "--seedless",
        action="store_true",
        help="peel after every access without the keyword-coverage pre-check",
    )
    parser.add_argument("--timing", action="store_true", help="include elapsed time in reports")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(
        mode=args.mode,
        schema=args.schema,
        instance=args.instance,
        query=args.query,
        constants=args.constants,
        dot=args.dot,
        log=args.log,
        seedless=args.seedless,
        timing=args.timing,
    )
    try:
        return run(config)
    except InputError as exc:
        print(f"deepkw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
