"""Published-table fixtures and their reproduction.

Fixture lines look like::

    Q; W=10; d=1/W0 beta=0.777942 epsilon1=0.016334 sigma1=1.624690 eta=4.127955 t0=H; 71.220

with an optional fifth field giving a tighter relative tolerance for the row.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

from mpmath import iv, mp

from .bounds import (
    ConditionedBound,
    HParams,
    LadderTable,
    ReciprocalParams,
    RhParams,
    c0_strip,
    q_h,
    q_one,
    q_rh,
    y0,
    yprime0,
)
from .errors import FixtureError
from .numerics import CONSTANTS, DEFAULT_CONTEXT, CertifiedReal, PrecisionContext, to_mpf

TABLE_IDS = ("Q", "QRH", "Y", "Yprime", "B1", "SIGMA1")
DEFAULT_TOLERANCE = 1e-2
FIXTURE_RESOURCE = "published_tables.txt"

_POW = re.compile(r"^([0-9.]+)\*10\^(-?\d+)$")


def parse_value(token: str, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Fixture token -> exact Fraction, or a CertifiedReal for transcendental symbols."""
    tok = token.strip()
    symbols = {
        "H": CONSTANTS.H,
        "H0": CONSTANTS.H0,
        "W0": CONSTANTS.W0,
        "1/W0": 1 / CONSTANTS.W0,
    }
    if tok in symbols:
        return symbols[tok]
    if tok in ("e^e", "2exp(e^2)"):
        with ctx.working():
            x = iv.exp(iv.e) if tok == "e^e" else 2 * iv.exp(iv.e**2)
            return CertifiedReal.from_interval(x, ctx)
    m = _POW.match(tok)
    if m:
        return Fraction(m.group(1)) * Fraction(10) ** int(m.group(2))
    if tok.startswith("10^"):
        return Fraction(10) ** int(tok[3:])
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FixtureError(f"cannot parse fixture value {token!r}") from None


@dataclass(frozen=True)
class TableRow:
    table_id: str
    key: str
    params: dict
    published: str
    tolerance: Optional[float] = None

    def value(self, name: str, ctx: PrecisionContext = DEFAULT_CONTEXT):
        if name not in self.params:
            if self.key.startswith(name + "="):
                return parse_value(self.key.split("=", 1)[1], ctx)
            raise FixtureError(f"row {self.table_id} {self.key} lacks parameter {name}")
        return parse_value(self.params[name], ctx)

    @property
    def published_value(self) -> Fraction:
        return parse_value(self.published)

    @property
    def key_value(self) -> Fraction:
        """Numeric part of ``W=10`` style keys."""
        return parse_value(self.key.split("=", 1)[1])


def parse_fixture(text: str) -> list[TableRow]:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) not in (4, 5):
            raise FixtureError(f"line {lineno}: expected 4 or 5 ';'-separated fields")
        tid, key, params, published = parts[:4]
        if tid not in TABLE_IDS:
            raise FixtureError(f"line {lineno}: unknown table {tid!r}")
        kv = {}
        for item in params.split():
            if "=" not in item:
                raise FixtureError(f"line {lineno}: bad parameter {item!r}")
            name, val = item.split("=", 1)
            kv[name] = val
        tol = float(parts[4]) if len(parts) == 5 else None
        rows.append(TableRow(tid, key, kv, published, tol))
    return rows


@lru_cache(maxsize=None)
def _packaged_fixture() -> str:
    return resources.files("zetabounds.data").joinpath(FIXTURE_RESOURCE).read_text()


def load_fixture(path: str | Path | None = None) -> list[TableRow]:
    if path is None:
        return parse_fixture(_packaged_fixture())
    p = Path(path)
    if not p.is_file():
        raise FixtureError(f"fixture file not found: {p}")
    return parse_fixture(p.read_text())


def table_rows(table_id: str, rows: list[TableRow] | None = None) -> list[TableRow]:
    if table_id not in TABLE_IDS:
        raise FixtureError(f"unknown table {table_id!r}; expected one of {', '.join(TABLE_IDS)}")
    rows = load_fixture() if rows is None else rows
    return [r for r in rows if r.table_id == table_id]


def q_ladder(rows: list[TableRow] | None = None) -> LadderTable:
    """All published (W, Q) pairs, in increasing W."""
    entries = sorted((r.key_value, r.published_value) for r in table_rows("Q", rows))
    return LadderTable(tuple(entries))


def find_row(table_id: str, key: str, rows: list[TableRow] | None = None) -> TableRow:
    for r in table_rows(table_id, rows):
        if r.key == key or (("=" in r.key) and _same_key(r.key, key)):
            return r
    raise FixtureError(f"no row {key!r} in table {table_id}")


def _same_key(a: str, b: str) -> bool:
    try:
        na, va = a.split("=", 1)
        nb, vb = b.split("=", 1)
        return na == nb and Fraction(va) == Fraction(vb)
    except ValueError:
        return False


def row_bound(row: TableRow, ctx: PrecisionContext | None = None, rows: list[TableRow] | None = None):
    """Evaluate the bound a row describes at its published parameters.

    Returns a ConditionedBound, or None when the row has no published parameters
    (those rows are reproduced by optimization only).
    """
    c = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    v = lambda name: row.value(name, c)  # noqa: E731
    tid = row.table_id
    if tid == "Q":
        _, b = q_h(HParams(v("d"), v("beta"), v("epsilon1"), v("sigma1"), v("eta"), v("t0")), c)
        return b
    if tid == "QRH":
        p = RhParams.from_sigma0(row.key_value, v("epsilon"), v("sigma1"), v("eta"), v("t0"))
        return q_rh(p, c)
    if tid == "Y":
        ladder = q_ladder(rows).restrict(row.key_value)
        return y0(ReciprocalParams(v("d1"), v("sigma1"), v("eta"), v("t0"), ladder), c)
    if tid == "Yprime":
        ladder = q_ladder(rows).restrict(row.key_value)
        return yprime0(ReciprocalParams(v("d1"), t0=v("t0"), ladder=ladder, asymptotic=True), c)
    if tid == "B1":
        return c0_strip(v("W"), v("sigma1"), v("t0"), v("eta"), c).const
    kind = row.key.split()[0]
    if kind == "y0":
        return y0(ReciprocalParams(v("d1"), v("sigma1"), v("eta"), v("t0")), c)
    if kind == "yprime0":
        return yprime0(ReciprocalParams(v("d1"), t0=v("t0"), asymptotic=True), c)
    if kind == "q_one":
        if "epsilon1" not in row.params:
            return None
        return q_one(v("d"), v("epsilon1"), v("sigma1"), v("eta"), v("t0"), c)
    raise FixtureError(f"row {row.key!r} of {tid} names no known bound")


@dataclass
class RowResult:
    table_id: str
    key: str
    published: Fraction
    tolerance: float
    recomputed: Optional[CertifiedReal] = None
    rel_diff: Optional[float] = None
    conditions_ok: Optional[bool] = None
    failed_conditions: tuple = ()
    optimized: Optional[CertifiedReal] = None
    optimized_params: Optional[dict] = None
    notes: dict = field(default_factory=dict)

    @property
    def within(self) -> bool:
        """Recomputed (or, lacking parameters, optimized) value agrees with the published one."""
        val = self.recomputed if self.recomputed is not None else self.optimized
        if val is None:
            return False
        return _rel(val, self.published) <= self.tolerance

    @property
    def improvement(self) -> Optional[float]:
        """Relative gain of the optimizer over the published value (positive means better)."""
        if self.optimized is None:
            return None
        pub = to_mpf(self.published)
        return float((pub - self.optimized.mid) / pub)

    @property
    def passed(self) -> bool:
        return self.within and self.conditions_ok is not False


def _rel(val: CertifiedReal, published) -> float:
    pub = to_mpf(published)
    # worst point of the enclosure
    return float(max(abs(val.lower - pub), abs(val.upper - pub)) / abs(pub))


@dataclass
class TableReport:
    table_id: str
    rows: list[RowResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[RowResult]:
        return [r for r in self.rows if not r.passed]


def row_tolerance(row: TableRow, tolerance: float = DEFAULT_TOLERANCE) -> float:
    return min(tolerance, row.tolerance) if row.tolerance is not None else tolerance


def reproduce_row(row: TableRow, ctx: PrecisionContext | None = None, *, tolerance: float = DEFAULT_TOLERANCE,
                  optimize: bool = False, rows: list[TableRow] | None = None, seed: int = 0,
                  starts: int | None = None) -> RowResult:
    res = RowResult(row.table_id, row.key, row.published_value, row_tolerance(row, tolerance))
    bound = row_bound(row, ctx, rows)
    if isinstance(bound, ConditionedBound):
        res.recomputed = bound.value
        res.conditions_ok = bound.ok
        res.failed_conditions = tuple(cnd.id for cnd in bound.conditions.failed())
        if row.table_id == "Q":
            res.notes["W"] = mp.nstr(to_mpf(bound.region.a), 8)
    elif isinstance(bound, CertifiedReal):
        res.recomputed = bound
    if bound is not None:
        res.rel_diff = _rel(res.recomputed, res.published)
    if optimize or bound is None:
        from .optimizer import optimize as run, problem_for_row

        kw = {} if starts is None else {"starts": starts}
        out = run(problem_for_row(row, seed=seed, rows=rows, **kw), ctx)
        res.optimized = out.value
        res.optimized_params = out.best
        if bound is None:
            res.conditions_ok = out.report.all_satisfied
            res.rel_diff = _rel(out.value, res.published)
    return res


def reproduce_table(table_id: str, ctx: PrecisionContext | None = None, *, tolerance: float = DEFAULT_TOLERANCE,
                    optimize: bool = False, fixture: str | Path | None = None, seed: int = 0,
                    starts: int | None = None) -> TableReport:
    rows = load_fixture(fixture)
    out = [
        reproduce_row(r, ctx, tolerance=tolerance, optimize=optimize, rows=rows, seed=seed, starts=starts)
        for r in table_rows(table_id, rows)
    ]
    return TableReport(table_id, out)
