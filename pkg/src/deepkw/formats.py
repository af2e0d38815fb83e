"""Text formats for schemas, instances and keyword queries.

Schema file, one relation per line::

    # comment
    r1(Dept:Dept^i, Emp:Emp)

``^i`` marks an input attribute; everything else is output.

Instance file, one tuple per line::

    r1(IT, John)
    r3(P1, "Ann, Jr.", Analyst)

Query string: comma-separated keywords, ``literal:Domain`` or bare
``literal`` when the domain is unknown.
"""

from __future__ import annotations

import re
from typing import Iterable

from .core import (
    Attribute,
    Instance,
    Keyword,
    KeywordQuery,
    Mode,
    Relation,
    Schema,
    SchemaError,
    Tuple,
    Value,
    make_tuple,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_SPECIAL = set(',()"\\:#')
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


class ParseError(SchemaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Cursor:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.lineno, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of line"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def ident(self, what: str) -> str:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def at_end(self) -> bool:
        return self.peek() == ""

    def literal(self, stop: str) -> str:
        """Read a quoted or bare literal; bare ones end before ``stop`` chars."""
        self.skip_ws()
        if self.peek() == '"':
            start = self.pos
            self.pos += 1
            out = []
            while True:
                if self.pos >= len(self.text):
                    self.pos = start
                    raise self.error("unterminated quoted literal")
                ch = self.text[self.pos]
                if ch == "\\":
                    nxt = self.text[self.pos + 1 : self.pos + 2]
                    if nxt not in _ESCAPES:
                        raise self.error(f"bad escape \\{nxt}")
                    out.append(_ESCAPES[nxt])
                    self.pos += 2
                elif ch == '"':
                    self.pos += 1
                    return "".join(out)
                else:
                    out.append(ch)
                    self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stop:
            if self.text[self.pos] in '"\\':
                raise self.error("quote or backslash inside a bare literal")
            self.pos += 1
        lit = self.text[start : self.pos].strip()
        if not lit:
            self.pos = start
            raise self.error("empty literal")
        return lit


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() and not raw.lstrip().startswith("#"):
            yield lineno, raw


def quote_literal(lit: str) -> str:
    if lit and lit == lit.strip() and not (set(lit) & _SPECIAL):
        return lit
    body = lit.replace("\\", "\\\\").replace('"', '\\"')
    body = body.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{body}"'


# schema ----------------------------------------------------------------------


def parse_schema(text: str) -> Schema:
    relations = []
    for lineno, line in _lines(text):
        cur = _Cursor(line, lineno)
        name = cur.ident("relation name")
        cur.expect("(")
        attrs = []
        while True:
            attr = cur.ident("attribute name")
            cur.expect(":")
            dom = cur.ident("domain name")
            mode = Mode.OUTPUT
            if cur.peek() == "^":
                cur.pos += 1
                at = cur.pos
                flag = cur.ident("access mode")
                if flag != "i":
                    cur.pos = at
                    raise cur.error(f"unknown access mode ^{flag}")
                mode = Mode.INPUT
            attrs.append(Attribute(attr, dom, mode))
            if cur.peek() == ",":
                cur.pos += 1
                continue
            cur.expect(")")
            break
        if not cur.at_end():
            raise cur.error("trailing characters after relation")
        relations.append(Relation(name, tuple(attrs)))
    return Schema(tuple(relations))


def format_relation(r: Relation) -> str:
    parts = [f"{a.name}:{a.domain}{'^i' if a.is_input else ''}" for a in r.attributes]
    return f"{r.name}({', '.join(parts)})"


def format_schema(schema: Schema) -> str:
    return "".join(format_relation(r) + "\n" for r in schema.relations)


# instance --------------------------------------------------------------------


def parse_tuples(text: str, schema: Schema) -> list[Tuple]:
    out = []
    for lineno, line in _lines(text):
        cur = _Cursor(line, lineno)
        name = cur.ident("relation name")
        if name not in schema:
            cur.pos = 0
            raise cur.error(f"unknown relation {name!r}")
        rel = schema.relation(name)
        cur.expect("(")
        lits = []
        while True:
            lits.append(cur.literal(",)"))
            if cur.peek() == ",":
                cur.pos += 1
                continue
            cur.expect(")")
            break
        if not cur.at_end():
            raise cur.error("trailing characters after tuple")
        if len(lits) != rel.arity:
            cur.pos = 0
            raise cur.error(f"{name} expects {rel.arity} values, got {len(lits)}")
        out.append(make_tuple(rel, lits))
    return out


def parse_instance(text: str, schema: Schema) -> Instance:
    return Instance.of(parse_tuples(text, schema))


def format_tuple(t: Tuple) -> str:
    return f"{t.relation}({', '.join(quote_literal(v.literal) for v in t.values)})"


def format_tuples(tuples: Iterable[Tuple]) -> str:
    return "".join(format_tuple(t) + "\n" for t in sorted(tuples))


def format_instance(instance: Instance) -> str:
    return format_tuples(instance)


# query -----------------------------------------------------------------------


def parse_keywords(text: str) -> list[Keyword]:
    cur = _Cursor(text, 1)
    kws = []
    if cur.at_end():
        raise cur.error("empty keyword list")
    while True:
        lit = cur.literal(",:")
        dom = None
        if cur.peek() == ":":
            cur.pos += 1
            dom = cur.ident("domain name")
        kws.append(Keyword(lit, dom))
        if cur.at_end():
            return kws
        cur.expect(",")


def parse_query(text: str) -> KeywordQuery:
    return KeywordQuery(parse_keywords(text))


def parse_constants(text: str) -> frozenset[Value]:
    """Constants are typed keywords (``c0:A1, c1:A2``)."""
    out = set()
    for k in parse_keywords(text):
        if k.domain is None:
            raise ParseError(f"constant {k.literal!r} needs a domain", 1, 1)
        out.add(k.value())
    return frozenset(out)


def format_keyword(k: Keyword) -> str:
    lit = quote_literal(k.literal)
    return lit if k.domain is None else f"{lit}:{k.domain}"


def format_query(query: KeywordQuery) -> str:
    return ", ".join(format_keyword(k) for k in query)
