"""Verification suites: published tables, small-t certificates, phi, invariants."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import iv, mp

from . import bounds as B
from .numerics import CONSTANTS, DEFAULT_CONTEXT, PrecisionContext, lavrik_bound, stieltjes_table, to_mpf
from .tables import DEFAULT_TOLERANCE, TABLE_IDS, load_fixture, q_ladder, reproduce_row, table_rows
from .zeta_eval import em_zeta, grid_check, sup_modulus_on_segment

SUITES = ("tables", "small-t", "phi", "invariants")
RECIP_GRID_STEP = Fraction(1, 20)
EQUALITY_OK = frozenset({"d_hi", "t0_lo"})


@dataclass(frozen=True)
class Check:
    """One verified statement; ``achieved`` and ``required`` are printable numbers."""

    suite: str
    id: str
    passed: bool
    achieved: str
    required: str
    detail: str = ""


def _n(x, digits: int = 10) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return mp.nstr(to_mpf(x), digits)


# -- tables -------------------------------------------------------------------


def suite_tables(ctx: PrecisionContext | None = None, tolerance: float = DEFAULT_TOLERANCE, fixture=None) -> list[Check]:
    rows = load_fixture(fixture)
    out = []
    for tid in TABLE_IDS:
        for row in table_rows(tid, rows):
            if row.table_id == "SIGMA1" and row.key == "q_one":
                # no published parameters; covered by the optimizer
                continue
            r = reproduce_row(row, ctx, tolerance=tolerance, rows=rows)
            detail = "recomputed " + _n(r.recomputed.mid, 12)
            if r.failed_conditions:
                detail += "; failed conditions: " + ",".join(r.failed_conditions)
            out.append(Check("tables", f"{tid}:{row.key}", r.passed, f"{r.rel_diff:.3e}", f"<= {r.tolerance:g}", detail))
    return out


# -- small t ------------------------------------------------------------------


def suite_small_t(ctx: PrecisionContext | None = None, tolerance: float | None = None) -> list[Check]:
    c = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    out = []
    claim = CONSTANTS.small_t_half_line
    # |zeta(1/2 - it)| = |zeta(1/2 + it)|, so t in [0, 3] covers |t| <= 3
    sup = sup_modulus_on_segment(Fraction(1, 2), 0, 3, True, c, claim=claim)
    out.append(Check("small-t", "half_line_sup_le_1.461", bool(sup.claim_holds), _n(sup.upper), f"<= {_n(claim)}",
                     f"bisection pieces {sup.nodes}"))
    with c.working():
        val = B.aleks_bound(1, 500, c).to_interval() / iv.log(500)
        up = mp.make_mpf(val._mpi_[1])
    out.append(Check("small-t", "aleks_8_over_log500_le_1.288", bool(up <= mp.mpf("1.288")), _n(up), "<= 1.288"))
    tmax = B.regimes.aleks_t_max(c)
    re = B.reexpress_log_power(8, 0, Fraction(11, 12), 500, tmax.upper, c)
    out.append(Check("small-t", "aleks_as_log_11_12_le_1.5", bool(re.upper <= mp.mpf("1.5")), _n(re.upper), "<= 1.5"))
    g = grid_check(1, 2, 500, RECIP_GRID_STEP, CONSTANTS.chirre_recip, c, reciprocal=True, log_power=1)
    out.append(Check("small-t", "recip_one_line_le_2.079_log_t", g.holds, _n(g.max_upper), f"<= {_n(CONSTANTS.chirre_recip)}",
                     f"{g.nodes} nodes, step {float(RECIP_GRID_STEP)}, worst at t = {_n(g.argmax, 8)}"))
    return out


# -- phi ----------------------------------------------------------------------


def suite_phi(ctx: PrecisionContext | None = None, tolerance: float | None = None) -> list[Check]:
    out = []
    for chk in B.run_phi_checks(ctx=ctx):
        out.append(Check("phi", chk.name, chk.holds, _n(chk.worst), "", f"{chk.nodes} grid points, extreme at {_n(chk.at)}"))
    return out


# -- invariants ---------------------------------------------------------------


def _lavrik(ctx) -> Check:
    tab = stieltjes_table()
    worst = None
    ok = True
    for n in range(1, tab.n_max + 1):
        enc = tab.enclosure(n)
        bound = lavrik_bound(n)
        if not (-bound <= enc.lower and enc.upper <= bound):
            ok = False
            worst = n
    return Check("invariants", "lavrik_contains_stieltjes", ok, "all" if ok else f"n={worst}", f"n=1..{tab.n_max}")


def _nesting(ctx) -> Check:
    c = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    d = c.doubled()
    rows = load_fixture()
    fails = []
    for tid in ("Q", "QRH", "Y"):
        row = table_rows(tid, rows)[-1]
        from .tables import row_bound

        a, b = row_bound(row, c, rows).value, row_bound(row, d, rows).value
        if not a.contains(b):
            fails.append(f"{tid}:{row.key}")
    z1, z2 = em_zeta((Fraction(1, 2), 14), c), em_zeta((Fraction(1, 2), 14), d)
    for part in ("re", "im"):
        if not getattr(z1, part).contains(getattr(z2, part)):
            fails.append(f"zeta {part}")
    return Check("invariants", "enclosures_nest_under_doubling", not fails, ",".join(fails) or "nested", "nested")


def _c3_monotone(ctx) -> Check:
    ts = [3, 5, 13, 100, 10**4, 10**8]
    vals = [B.c3(t, ctx) for t in ts]
    ok = all(a.lower > b.upper for a, b in zip(vals, vals[1:]))
    return Check("invariants", "c3_decreasing_in_t0", ok, _n(vals[0].mid, 6) + " > ... > " + _n(vals[-1].mid, 6), "strict")


def _plp_monotone(ctx) -> Check:
    c = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    ok, checked = True, 0
    for t in (10**3, 10**6, 10**10):
        kp = B.half_line_kparams(Fraction(1, 10), t, c)
        sig = [Fraction(1, 2) + Fraction(i, 20) for i in range(13)]
        vals = [B.plp_strip_bound(kp, s, t, 13, c) for s in sig]
        for a, b in zip(vals, vals[1:]):
            if a.conditions.margin("tcond0") > 0:
                checked += 1
                ok = ok and a.value.lower > b.value.upper
    return Check("invariants", "plp3_decreasing_in_sigma", ok and checked > 0, f"{checked} pairs", "strict decrease")


def _ladder_telescoping(ctx) -> Check:
    # the published ladder is rational, so the sum is checked exactly
    lad = q_ladder()
    ok = True
    for w in sorted({e[0] for e in lad.entries}):
        ent = lad.restrict(w).entries
        s = sum(q * (1 / a - 1 / b) for (a, q), (b, _) in zip(ent, ent[1:])) + ent[-1][1] / ent[-1][0]
        ok = ok and s >= min(q for _, q in ent) / ent[0][0]
    return Check("invariants", "ladder_sum_at_least_qmin_over_w1", ok, f"{len(lad.entries)} ladders", ">=")


def _trig(ctx, samples: int = 100, seed: int = 0) -> Check:
    c = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    rng = random.Random(seed)
    worst = mp.inf
    for _ in range(samples):
        s = Fraction(rng.randint(1001, 2000), 1000)
        t = Fraction(rng.randint(3000, 500000), 1000)
        z0 = em_zeta((s, 0), c).re
        z1 = em_zeta((s, t), c).modulus()
        z2 = em_zeta((s, 2 * t), c).modulus()
        with c.working():
            prod = iv.mpf(z0.lower) ** 3 * iv.mpf(z1[0]) ** 4 * iv.mpf(z2[0])
            worst = min(worst, mp.make_mpf(prod._mpi_[0]))
    return Check("invariants", "trig_product_at_least_one", bool(worst >= 1), _n(worst), ">= 1", f"{samples} samples")


def _branch_and_margins(ctx) -> list[Check]:
    from .tables import row_bound

    rows = load_fixture()
    dom_fail, margin_fail = [], []
    for tid in ("Q", "QRH", "Y", "Yprime"):
        for row in table_rows(tid, rows):
            b = row_bound(row, ctx, rows)
            sel = b.branches[b.selected]
            if any(not (o.upper < sel.lower) for i, o in enumerate(b.branches) if i != b.selected):
                dom_fail.append(f"{tid}:{row.key}")
            for cnd in b.conditions.items:
                # d = 1/W0 and t0 = H (or 13) sit exactly on their limits
                if cnd.id in EQUALITY_OK and cnd.margin == 0:
                    continue
                if not cnd.margin > 0:
                    margin_fail.append(f"{tid}:{row.key}:{cnd.id}")
    return [
        Check("invariants", "selected_branch_strictly_dominates", not dom_fail, ",".join(dom_fail) or "all rows", "strict"),
        Check("invariants", "row_conditions_positive_margin", not margin_fail, ",".join(margin_fail) or "all rows",
              "> 0 (equality allowed for d_hi, t0_lo)"),
    ]


def suite_invariants(ctx: PrecisionContext | None = None, tolerance: float | None = None) -> list[Check]:
    out = [_lavrik(ctx), _nesting(ctx), _c3_monotone(ctx), _plp_monotone(ctx), _ladder_telescoping(ctx), _trig(ctx)]
    out += _branch_and_margins(ctx)
    return out


_RUNNERS: dict[str, Callable[..., list[Check]]] = {
    "tables": suite_tables,
    "small-t": suite_small_t,
    "phi": suite_phi,
    "invariants": suite_invariants,
}


def run_suite(name: str, ctx: PrecisionContext | None = None, tolerance: float = DEFAULT_TOLERANCE, fixture=None) -> list[Check]:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    if name == "tables":
        checks = suite_tables(ctx, tolerance, fixture)
    else:
        checks = _RUNNERS[name](ctx)
    return sorted(checks, key=lambda ch: ch.id)
