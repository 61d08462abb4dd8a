"""The metadata query DSL: a closed, validated replacement for code emission.

Grammar (whitespace-insensitive, keywords case-insensitive, trailing text
rejected):

    query  := COUNT [WHERE preds]
            | SELECT field (',' field)* [WHERE preds] [LIMIT int]
    preds  := pred (AND pred)*
    pred   := field OP value
    OP     := EQ | NEQ | LT | LTE | GT | GTE | CONTAINS | ICONTAINS
    value  := integer | single-quoted string ('' escapes a quote)

Type rules: LT/LTE/GT/GTE apply only to ``year`` (integer values);
CONTAINS/ICONTAINS apply only to string fields; EQ/NEQ apply to both but
the value's type must match the field's. See docs/dsl.md for the public
contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from acewgs.corpus import ArticleMeta, MANIFEST_FIELDS
from acewgs.errors import DslSyntaxError, DslTypeError, UnknownField

NUMERIC_FIELDS = frozenset({"year"})
STRING_FIELDS = frozenset(f for f in MANIFEST_FIELDS if f not in NUMERIC_FIELDS)

ORDER_OPS = frozenset({"LT", "LTE", "GT", "GTE"})
TEXT_OPS = frozenset({"CONTAINS", "ICONTAINS"})
EQUALITY_OPS = frozenset({"EQ", "NEQ"})
ALL_OPS = ORDER_OPS | TEXT_OPS | EQUALITY_OPS

_KEYWORDS = frozenset({"SELECT", "COUNT", "WHERE", "AND", "LIMIT"}) | ALL_OPS


@dataclass(frozen=True)
class Predicate:
    field: str
    op: str
    value: str | int


@dataclass(frozen=True)
class QueryPlan:
    verb: str                       # "SELECT" | "COUNT"
    fields: tuple[str, ...] = ()    # ignored for COUNT
    predicates: tuple[Predicate, ...] = ()
    limit: int | None = None


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[str | int]] = dc_field(default_factory=list)

    def to_lines(self) -> list[str]:
        return [" \\ ".join(str(c) for c in row) for row in self.rows]

    def single_column(self) -> list[str | int]:
        return [row[0] for row in self.rows]


# --- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<comma>,)|(?P<int>-?\d+)|(?P<word>[A-Za-z_][A-Za-z_0-9]*)|(?P<quote>'))"
)


def _tokenize(text: str) -> list[tuple[str, str | int, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise DslSyntaxError(pos, f"unexpected character {text[pos:].lstrip()[0]!r}")
        if m.group("comma"):
            tokens.append(("comma", ",", m.start("comma")))
        elif m.group("int") is not None:
            tokens.append(("int", int(m.group("int")), m.start("int")))
        elif m.group("word"):
            tokens.append(("word", m.group("word"), m.start("word")))
        else:
            start = m.start("quote")
            value, pos_after = _read_string(text, start)
            tokens.append(("str", value, start))
            pos = pos_after
            continue
        pos = m.end()
    return tokens


def _read_string(text: str, start: int) -> tuple[str, int]:
    """Read a single-quoted string starting at ``start``; '' escapes a quote."""
    out = []
    i = start + 1
    while i < len(text):
        ch = text[i]
        if ch == "'":
            if i + 1 < len(text) and text[i + 1] == "'":
                out.append("'")
                i += 2
                continue
            return "".join(out), i + 1

        out.append(ch)
        i += 1
    raise DslSyntaxError(start, "unterminated string literal")


# --- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        if tok is None:
            raise DslSyntaxError(len(self.text), "unexpected end of query")
        self.i += 1
        return tok

    def _keyword(self, tok) -> str | None:
        if tok is not None and tok[0] == "word" and tok[1].upper() in _KEYWORDS:
            return tok[1].upper()
        return None

    def parse(self) -> QueryPlan:
        tok = self._next()
        kw = self._keyword(tok)
        if kw == "COUNT":
            predicates = self._maybe_where()
            self._expect_end()
            return QueryPlan(verb="COUNT", predicates=predicates)
        if kw == "SELECT":
            fields = [self._field()]
            while self._peek() is not None and self._peek()[0] == "comma":
                self._next()
                fields.append(self._field())
            predicates = self._maybe_where()
            limit = self._maybe_limit()
            self._expect_end()
            return QueryPlan(verb="SELECT", fields=tuple(fields),
                             predicates=predicates, limit=limit)
        raise DslSyntaxError(tok[2], "query must start with SELECT or COUNT")

    def _field(self) -> str:
        tok = self._next()
        if tok[0] != "word":
            raise DslSyntaxError(tok[2], f"expected a field name, got {tok[1]!r}")
        name = tok[1].lower()
        if name not in MANIFEST_FIELDS:
            raise UnknownField(f"{tok[1]!r} is not one of the seven manifest fields")
        return name

    def _maybe_where(self) -> tuple[Predicate, ...]:
        tok = self._peek()
        if self._keyword(tok) != "WHERE":
            return ()
        self._next()
        preds = [self._predicate()]
        while self._keyword(self._peek()) == "AND":
            self._next()
            preds.append(self._predicate())
        return tuple(preds)

    def _predicate(self) -> Predicate:
        fld = self._field()
        tok = self._next()
        op = tok[1].upper() if tok[0] == "word" else None
        if op not in ALL_OPS:
            raise DslSyntaxError(tok[2], f"expected an operator, got {tok[1]!r}")
        vtok = self._next()
        if vtok[0] == "int":
            value: str | int = vtok[1]
        elif vtok[0] == "str":
            value = vtok[1]
        else:
            raise DslSyntaxError(vtok[2], "expected an integer or a quoted string")
        _check_types(fld, op, value)
        return Predicate(field=fld, op=op, value=value)

    def _maybe_limit(self) -> int | None:
        tok = self._peek()
        if self._keyword(tok) != "LIMIT":
            return None
        self._next()
        vtok = self._next()
        if vtok[0] != "int" or vtok[1] <= 0:
            raise DslSyntaxError(vtok[2], "LIMIT takes a positive integer")
        return vtok[1]

    def _expect_end(self):
        tok = self._peek()
        if tok is not None:
            raise DslSyntaxError(tok[2], f"trailing input {tok[1]!r}")


def _check_types(fld: str, op: str, value: str | int):
    if op in ORDER_OPS and fld not in NUMERIC_FIELDS:
        raise DslTypeError(f"{op} applies only to numeric fields, not {fld!r}")
    if op in TEXT_OPS and fld not in STRING_FIELDS:
        raise DslTypeError(f"{op} applies only to string fields, not {fld!r}")
    if fld in NUMERIC_FIELDS and not isinstance(value, int):
        raise DslTypeError(f"{fld!r} takes an integer value")
    if fld in STRING_FIELDS and not isinstance(value, str):
        raise DslTypeError(f"{fld!r} takes a quoted string value")


def parse_dsl(text: str) -> QueryPlan:
    """Parse DSL text into a validated QueryPlan."""
    return _Parser(text).parse()


# --- canonical renderer ------------------------------------------------------

def _render_value(value: str | int) -> str:
    if isinstance(value, int):
        return str(value)
    return "'" + value.replace("'", "''") + "'"


def render_plan(plan: QueryPlan) -> str:
    """Canonical DSL text; parse_dsl(render_plan(p)) == p for valid plans."""
    parts = []
    if plan.verb == "COUNT":
        parts.append("COUNT")
    else:
        parts.append("SELECT " + ", ".join(plan.fields))
    if plan.predicates:
        preds = " AND ".join(f"{p.field} {p.op} {_render_value(p.value)}"
                             for p in plan.predicates)
        parts.append("WHERE " + preds)
    if plan.verb == "SELECT" and plan.limit is not None:
        parts.append(f"LIMIT {plan.limit}")
    return " ".join(parts)


# --- executor ----------------------------------------------------------------

def _cell(article: ArticleMeta, fld: str) -> str | int:
    if fld == "authors":
        return article.authors_cell
    return getattr(article, fld)


def _matches(article: ArticleMeta, pred: Predicate) -> bool:
    cell = _cell(article, pred.field)
    op, value = pred.op, pred.value
    if op == "EQ":
        return cell == value
    if op == "NEQ":
        return cell != value
    if op == "LT":
        return cell < value
    if op == "LTE":
        return cell <= value
    if op == "GT":
        return cell > value
    if op == "GTE":
        return cell >= value
    if op == "CONTAINS":
        return value in cell
    if op == "ICONTAINS":
        return value.lower() in cell.lower()
    raise AssertionError(f"unhandled operator {op}")


def execute(plan: QueryPlan, manifest: list[ArticleMeta]) -> ResultTable:
    """Run a validated plan against the manifest (pure, deterministic).

    Predicates are ANDed; rows come back in manifest order; COUNT yields a
    single integer cell.
    """
    selected = [a for a in manifest
                if all(_matches(a, p) for p in plan.predicates)]
    if plan.verb == "COUNT":
        return ResultTable(columns=["count"], rows=[[len(selected)]])
    if plan.limit is not None:
        selected = selected[:plan.limit]
    rows = [[_cell(a, f) for f in plan.fields] for a in selected]
    return ResultTable(columns=list(plan.fields), rows=rows)
