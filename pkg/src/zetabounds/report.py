"""Rendering of result records as csv, markdown or json lines.

Every value is rendered as a string so numbers survive a round trip at the
precision they were printed with.  Column order is fixed by the caller.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import mp

from .numerics import CertifiedReal, to_mpf

FORMATS = ("csv", "markdown", "json-lines")
DIGITS = 20

# column order per report kind
COLUMNS = {
    "eval": ("quantity", "mid", "rad", "lower", "upper"),
    "bound": ("item", "value", "margin", "satisfied", "detail"),
    "table": ("table", "row", "published", "recomputed", "rel_diff", "tolerance", "within", "conditions_ok",
              "optimized", "improvement", "notes"),
    "verify": ("suite", "check", "passed", "achieved", "required", "detail"),
    "optimize": ("item", "value", "margin", "satisfied", "detail"),
}


def fmt_number(x, digits: int = DIGITS) -> str:
    with mp.workdps(digits + 10):
        return _fmt(x, digits)


def _fmt(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else mp.nstr(to_mpf(x), digits)
    if isinstance(x, CertifiedReal):
        return mp.nstr(x.mid, digits)
    return mp.nstr(to_mpf(x), digits)


def _cells(records: Iterable[dict], columns: Sequence[str]) -> list[list[str]]:
    return [[fmt_number(r.get(c)) for c in columns] for r in records]


def render(records: Iterable[dict], columns: Sequence[str], fmt: str = "csv") -> str:
    rows = _cells(records, columns)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "markdown":
        esc = lambda s: s.replace("|", "\\|")  # noqa: E731
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        lines += ["| " + " | ".join(esc(c) for c in row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json-lines":
        return "".join(json.dumps(dict(zip(columns, row))) + "\n" for row in rows)
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def parse_json_lines(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def parse_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
