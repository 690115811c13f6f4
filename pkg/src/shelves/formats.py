"""Text formats: bracket lines, JSON record lines and the per-order CSV summary."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

from .core import ClassificationRecord, ShelfPolynomial, ShelfTable, as_table, classify
from .errors import InputError

__all__ = [
    "FORMATS",
    "RECORD_KEYS",
    "SUMMARY_FIELDS",
    "parse_bracket",
    "parse_bracket_lines",
    "to_bracket",
    "to_record",
    "parse_record",
    "emit",
]

FORMATS = ("bracket", "records", "csv-summary")
RECORD_KEYS = ("order", "table", "flags", "polynomial", "group", "canonical")
SUMMARY_FIELDS = ("order", "tables", "connected", "connected_racks", "connected_quandles", "unital")


class _Scanner:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def fail(self, msg: str, pos: int | None = None):
        col = (self.pos if pos is None else pos) + 1
        raise InputError(f"line {self.line_no}, column {col}: {msg}")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            self.fail(f"expected {ch!r}, found {got!r}" if got else f"expected {ch!r}, found end of line")
        self.pos += 1

    def integer(self) -> tuple[int, int]:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.pos == start:
            got = self.peek()
            self.fail(f"expected a digit, found {got!r}" if got else "expected a digit, found end of line")
        digits = self.text[start:self.pos]
        if len(digits) > 1 and digits[0] == "0":
            self.fail("leading zeros are not allowed", start)
        return int(digits), start


def parse_bracket(line: str, line_no: int = 1) -> ShelfTable:
    """Parse ``[[0,1],[0,1]]`` into a table without checking the shelf axiom.

    The format is strict: no whitespace, square shape, entries in ``0..n-1``.
    Errors report the 1-based line and column.
    """
    text = line.rstrip("\r\n")
    sc = _Scanner(text, line_no)
    rows: list[list[int]] = []
    starts: list[list[int]] = []
    row_starts: list[int] = []
    sc.expect("[")
    while True:
        row_starts.append(sc.pos)
        sc.expect("[")
        row, pos = [], []
        while True:
            v, p = sc.integer()
            row.append(v)
            pos.append(p)
            if sc.peek() == ",":
                sc.pos += 1
                continue
            sc.expect("]")
            break
        rows.append(row)
        starts.append(pos)
        if sc.peek() == ",":
            sc.pos += 1
            continue
        sc.expect("]")
        break
    if sc.pos != len(text):
        sc.fail("unexpected trailing characters")
    n = len(rows)
    for i, row in enumerate(rows):
        if len(row) != n:
            sc.fail(f"row {i} has {len(row)} entries, expected {n} (ragged or non-square table)", row_starts[i])
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v >= n:
                sc.fail(f"value {v} at cell ({i},{j}) is out of range for order {n}", starts[i][j])
    return ShelfTable(rows)


def parse_bracket_lines(text: str) -> list[ShelfTable]:
    """Parse one table per non-blank line."""
    out = []
    for k, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            out.append(parse_bracket(line, k))
    return out


def to_bracket(t) -> str:
    t = as_table(t)
    return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in t.rows) + "]"


def to_record(t, record: ClassificationRecord | None = None, group: str | None = None,
              canonical: bool | None = None) -> str:
    """One JSON object with keys in :data:`RECORD_KEYS` order."""
    from .iso import canonical_form

    t = as_table(t)
    record = record or classify(t)
    if canonical is None:
        canonical = canonical_form(t) == t
    obj = {
        "order": t.order,
        "table": t.to_lists(),
        "flags": record.flags(),
        "polynomial": record.polynomial.as_triples(),
        "group": group,
        "canonical": bool(canonical),
    }
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def parse_record(line: str) -> dict:
    """Strict inverse of :func:`to_record`; unknown or missing keys are errors."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise InputError("record must be a JSON object")
    keys = tuple(obj)
    if set(keys) - set(RECORD_KEYS):
        raise InputError(f"unknown record keys {sorted(set(keys) - set(RECORD_KEYS))}")
    if keys != RECORD_KEYS:
        raise InputError(f"record keys must be exactly {list(RECORD_KEYS)} in order, got {list(keys)}")
    table = ShelfTable(obj["table"])
    if table.order != obj["order"]:
        raise InputError(f"order {obj['order']} does not match a table of order {table.order}")
    flags = obj["flags"]
    if not isinstance(flags, dict) or tuple(flags) != ClassificationRecord.FLAG_NAMES:
        raise InputError(f"flags must have keys {list(ClassificationRecord.FLAG_NAMES)}")
    return {
        "order": table.order,
        "table": table,
        "flags": {k: bool(v) for k, v in flags.items()},
        "polynomial": ShelfPolynomial.from_triples(obj["polynomial"]),
        "group": obj["group"],
        "canonical": bool(obj["canonical"]),
    }


def _latin_group(t: ShelfTable, record: ClassificationRecord) -> str | None:
    if not record.is_latin:
        return None
    from .groups import group_closure, row_permutations

    return group_closure(row_permutations(t)).identified_name


def summary_rows(ts: Iterable) -> list[dict]:
    """Per-order counts over the given tables (no isomorphism reduction)."""
    agg: dict[int, dict] = {}
    for t in ts:
        rec = classify(t)
        row = agg.setdefault(as_table(t).order, dict.fromkeys(SUMMARY_FIELDS, 0))
        row["tables"] += 1
        if rec.is_connected:
            row["connected"] += 1
            row["connected_racks"] += rec.is_rack
            row["connected_quandles"] += rec.is_quandle
        row["unital"] += rec.is_unital
    out = []
    for n in sorted(agg):
        agg[n]["order"] = n
        out.append(agg[n])
    return out


def write_summary_csv(rows: Sequence[dict], fields: Sequence[str] = SUMMARY_FIELDS) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def emit(ts: Sequence, format: str = "bracket") -> str:
    """Render tables as text, one line per table (or one row per order for CSV)."""
    if format not in FORMATS:
        raise InputError(f"unknown format {format!r}; choose one of {', '.join(FORMATS)}")
    ts = [as_table(t) for t in ts]
    if format == "csv-summary":
        return write_summary_csv(summary_rows(ts))
    lines = []
    for t in ts:
        if format == "bracket":
            lines.append(to_bracket(t))
        else:
            rec = classify(t)
            lines.append(to_record(t, rec, _latin_group(t, rec)))
    return "".join(line + "\n" for line in lines)
