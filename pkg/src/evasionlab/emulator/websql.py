"""A tiny SQL engine for the WebSQL statements staged pages use.

Supported: ``CREATE TABLE [IF NOT EXISTS] t (cols)``,
``INSERT INTO t (cols) VALUES (...)`` with ``?`` placeholders or literals,
and ``SELECT`` over ``*``, plain columns and ``GROUP_CONCAT(col[, sep])``
with optional ``AS`` aliases.  Aggregates fold over rows in rowid order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import ArityMismatch, SqlSyntaxError, UnknownTable
from .taint import merge, tag
from .values import UNDEFINED, to_string

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<str>'(?:[^']|'')*'|"(?:[^"]|"")*")
      | (?P<num>\d+(?:\.\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<punct>[(),*?;])
    )""",
    re.VERBOSE,
)


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[tuple[int, dict]] = field(default_factory=list)
    next_rowid: int = 1


@dataclass
class DbState:
    tables: dict[str, Table] = field(default_factory=dict)

    def table(self, name: str) -> Table:
        t = self.tables.get(name.lower())
        if t is None:
            raise UnknownTable(name)
        return t


@dataclass
class ResultSet:
    columns: list[str] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    rows_affected: int = 0
    insert_id: Optional[int] = None


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str


def _lex(sql: str) -> list[_Tok]:
    out: list[_Tok] = []
    pos = 0
    sql = sql.rstrip()
    while pos < len(sql):
        m = _TOKEN_RE.match(sql, pos)
        if m is None or m.end() == pos:
            raise SqlSyntaxError(f"unexpected input at {pos}: {sql[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append(_Tok(kind, m.group(kind)))
        pos = m.end()
    while out and out[-1].text == ";":
        out.pop()
    return out


class _Cursor:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.i = 0

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        t = self.peek()
        if t is None:
            raise SqlSyntaxError("unexpected end of statement")
        self.i += 1
        return t

    def kw(self, word: str) -> bool:
        t = self.peek()
        if t is not None and t.kind == "ident" and t.text.upper() == word:
            self.i += 1
            return True
        return False

    def expect_kw(self, word: str) -> None:
        if not self.kw(word):
            raise SqlSyntaxError(f"expected {word}, found {self._found()}")

    def punct(self, p: str) -> bool:
        t = self.peek()
        if t is not None and t.kind == "punct" and t.text == p:
            self.i += 1
            return True
        return False

    def expect_punct(self, p: str) -> None:
        if not self.punct(p):
            raise SqlSyntaxError(f"expected {p!r}, found {self._found()}")

    def ident(self) -> str:
        t = self.next()
        if t.kind == "ident":
            return t.text
        if t.kind == "str" and t.text[0] == '"':
            return _unquote(t.text)
        raise SqlSyntaxError(f"expected identifier, found {t.text!r}")

    def done(self) -> None:
        if self.peek() is not None:
            raise SqlSyntaxError(f"unexpected {self._found()}")

    def _found(self) -> str:
        t = self.peek()
        return "end of statement" if t is None else repr(t.text)


def _unquote(text: str) -> str:
    q = text[0]
    return text[1:-1].replace(q + q, q)


def _ident_list(cur: _Cursor) -> list[str]:
    cur.expect_punct("(")
    names = []
    while True:
        names.append(cur.ident())
        # skip type names and constraints up to the next comma
        while cur.peek() is not None and cur.peek().text not in (",", ")"):
            cur.next()
        if cur.punct(")"):
            return names
        cur.expect_punct(",")


def websql_exec(db: DbState, statement: str, params: list | tuple = ()) -> ResultSet:
    """Execute one statement against ``db``."""
    cur = _Cursor(_lex(statement))
    if cur.kw("CREATE"):
        return _create(db, cur)
    if cur.kw("INSERT"):
        return _insert(db, cur, list(params))
    if cur.kw("SELECT"):
        return _select(db, cur)
    raise SqlSyntaxError(f"unsupported statement {statement[:20]!r}")


def _create(db: DbState, cur: _Cursor) -> ResultSet:
    cur.expect_kw("TABLE")
    if_not_exists = False
    if cur.kw("IF"):
        cur.expect_kw("NOT")
        cur.expect_kw("EXISTS")
        if_not_exists = True
    name = cur.ident()
    cols = _ident_list(cur)
    cur.done()
    key = name.lower()
    if key in db.tables:
        if if_not_exists:
            return ResultSet()
        raise SqlSyntaxError(f"table {name} already exists")
    if len({c.lower() for c in cols}) != len(cols):
        raise SqlSyntaxError("duplicate column name")
    db.tables[key] = Table(name, cols)
    return ResultSet()


def _insert(db: DbState, cur: _Cursor, params: list) -> ResultSet:
    cur.expect_kw("INTO")
    table = db.table(cur.ident())
    cols = _ident_list(cur)
    lowered = {c.lower(): c for c in table.columns}
    for c in cols:
        if c.lower() not in lowered:
            raise SqlSyntaxError(f"table {table.name} has no column {c}")
    cur.expect_kw("VALUES")
    cur.expect_punct("(")
    values: list[Any] = []
    placeholders = 0
    while True:
        t = cur.next()
        if t.text == "?":
            values.append(("param", placeholders))
            placeholders += 1
        elif t.kind == "str" and t.text[0] == "'":
            values.append(("lit", _unquote(t.text)))
        elif t.kind == "num":
            values.append(("lit", float(t.text)))
        elif t.kind == "ident" and t.text.upper() == "NULL":
            values.append(("lit", None))
        else:
            raise SqlSyntaxError(f"unexpected {t.text!r} in VALUES")
        if cur.punct(")"):
            break
        cur.expect_punct(",")
    cur.done()
    if len(values) != len(cols):
        raise SqlSyntaxError(f"{len(cols)} columns but {len(values)} values")
    if placeholders != len(params):
        raise ArityMismatch(f"{placeholders} placeholders but {len(params)} parameters")
    row = {c: None for c in table.columns}
    for col, (kind, v) in zip(cols, values):
        value = params[v] if kind == "param" else v
        row[lowered[col.lower()]] = None if value is UNDEFINED else value
    rowid = table.next_rowid
    table.rows.append((rowid, row))
    table.next_rowid += 1
    return ResultSet(rows_affected=1, insert_id=rowid)


@dataclass(frozen=True)
class _Item:
    kind: str  # star | column | group_concat
    column: str = ""
    sep: str = ","
    alias: str = ""


def _select_items(cur: _Cursor) -> list[_Item]:
    items = []
    while True:
        if cur.punct("*"):
            items.append(_Item("star"))
        else:
            name = cur.ident()
            if name.upper() == "GROUP_CONCAT" and cur.punct("("):
                col = cur.ident()
                sep = ","
                if cur.punct(","):
                    t = cur.next()
                    if t.kind != "str":
                        raise SqlSyntaxError("separator must be a string")
                    # a double-quoted separator falls back to a string literal, as in SQLite
                    sep = _unquote(t.text)
                cur.expect_punct(")")
                item = _Item("group_concat", col, sep, f"GROUP_CONCAT({col})")
            else:
                item = _Item("column", name, alias=name)
            if cur.kw("AS"):
                item = _Item(item.kind, item.column, item.sep, cur.ident())
            items.append(item)
        if not cur.punct(","):
            return items


def _concat(values: list, sep: str) -> Optional[str]:
    parts = [to_string(v) for v in values if v is not None]
    if not parts:
        return None
    return tag(sep.join(parts), merge(parts + [sep]))


def _select(db: DbState, cur: _Cursor) -> ResultSet:
    items = _select_items(cur)
    cur.expect_kw("FROM")
    table = db.table(cur.ident())
    cur.done()

    def column(name: str) -> str:
        for c in table.columns:
            if c.lower() == name.lower():
                return c
        raise SqlSyntaxError(f"no such column: {name}")

    names: list[str] = []
    for it in items:
        if it.kind == "star":
            names.extend(table.columns)
        else:
            names.append(it.alias)
    rows = [r for _, r in sorted(table.rows, key=lambda p: p[0])]
    aggregate = any(it.kind == "group_concat" for it in items)
    if not aggregate:
        out_rows = []
        for r in rows:
            out: dict = {}
            for it in items:
                if it.kind == "star":
                    out.update(r)
                else:
                    out[it.alias] = r[column(it.column)]
            out_rows.append(out)
        return ResultSet(names, out_rows)
    # one output row; bare columns take the last row's values
    last = rows[-1] if rows else {c: None for c in table.columns}
    out = {}
    for it in items:
        if it.kind == "star":
            out.update(last)
        elif it.kind == "column":
            out[it.alias] = last[column(it.column)]
        else:
            col = column(it.column)
            out[it.alias] = _concat([r[col] for r in rows], it.sep)
    return ResultSet(names, [out])
