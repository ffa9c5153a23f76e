"""Plain-text multiplication tables.

A file holds one or more tables separated by blank lines.  Each table is an
optional ``@name`` line, a line with ``n``, then ``n`` rows of ``n`` indices.
Lines starting with ``#`` are comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .braided import BraidedSet
from .tables import MulTable, TableError


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True)
class NamedTable:
    name: Optional[str]
    table: MulTable


def parse_tables(text: str) -> list[NamedTable]:
    out: list[NamedTable] = []
    name: Optional[str] = None
    n: Optional[int] = None
    rows: list[list[int]] = []
    start = 0

    def finish(lineno):
        nonlocal name, n, rows
        if n is None:
            if name is not None:
                raise ParseError(lineno, f"header @{name} without a table")
            return
        if len(rows) != n:
            raise ParseError(lineno, f"expected {n} rows, got {len(rows)}")
        try:
            out.append(NamedTable(name, MulTable(rows)))
        except TableError as exc:
            raise ParseError(start, str(exc)) from None
        name, n, rows = None, None, []

    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            finish(lineno)
            continue
        if line.startswith("@"):
            if n is not None:
                finish(lineno)
            if name is not None:
                raise ParseError(lineno, "two headers in a row")
            name = line[1:].strip()
            if not name:
                raise ParseError(lineno, "empty table name")
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise ParseError(lineno, f"expected table size, got {line!r}") from None
            if n < 1:
                raise ParseError(lineno, "table size must be positive")
            start = lineno
            continue
        if len(rows) == n:
            raise ParseError(lineno, f"table has more than {n} rows")
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise ParseError(lineno, f"non-integer entry in {line!r}") from None
        if len(row) != n:
            raise ParseError(lineno, f"row has {len(row)} entries, expected {n}")
        bad = [v for v in row if not 0 <= v < n]
        if bad:
            raise ParseError(lineno, f"entry {bad[0]} out of range 0..{n - 1}")
        rows.append(row)
    finish(lineno + 1)
    return out


def format_table(table: MulTable, name: Optional[str] = None) -> str:
    head = f"@{name}\n" if name else ""
    body = "\n".join(" ".join(str(v) for v in row) for row in table.tolist())
    return f"{head}{table.n}\n{body}\n"


def format_tables(tables: Iterable) -> str:
    parts = []
    for item in tables:
        if isinstance(item, NamedTable):
            parts.append(format_table(item.table, item.name))
        elif isinstance(item, tuple):
            name, table = item
            parts.append(format_table(MulTable(table), name))
        else:
            parts.append(format_table(MulTable(item)))
    return "\n".join(parts)


def read_tables(path) -> list[NamedTable]:
    return parse_tables(Path(path).read_text())


def write_tables(path, tables: Iterable) -> None:
    Path(path).write_text(format_tables(tables))


def braided_to_text(b: BraidedSet) -> str:
    return format_tables([("circ", b.circ), ("bullet", b.bullet)])


def braided_from_tables(tables: list[NamedTable]) -> Optional[BraidedSet]:
    """The braided set in a list of tables if it has ``@circ`` and ``@bullet``."""
    by_name = {t.name: t.table for t in tables}
    if "circ" in by_name and "bullet" in by_name:
        return BraidedSet(by_name["circ"], by_name["bullet"])
    return None
