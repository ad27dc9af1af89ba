"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import time
from fractions import Fraction

from fd_oracle import fd_check, sample_points
from mpmath import mp, mpf

from zetabounds import bounds as B
from zetabounds.numerics import CONSTANTS, PrecisionContext
from zetabounds.optimizer import optimize, problem_for_row
from zetabounds.tables import load_fixture, parse_value, reproduce_row, reproduce_table, table_rows
from zetabounds.verify import run_suite

CTX = PrecisionContext(60)

# tolerances and time limits
REL_TABLE = 1e-2
REL_TIGHT = 1e-3
T_Q, T_QRH, T_Y = 10.0, 5.0, 5.0
T_SMALL = 300.0
RESCALE_TOL = mpf("0.01")
REGRESSION = mpf("1.01")


def _timed(fn, *a, **kw):
    t = time.perf_counter()
    out = fn(*a, **kw)
    return out, time.perf_counter() - t


def _worst(rep):
    return max(r.rel_diff for r in rep.rows)


def test_criterion_1_table_q(acceptance):
    rep, dt = _timed(reproduce_table, "Q", CTX, tolerance=REL_TABLE)
    ok = len(rep.rows) == 38 and rep.passed and all(r.rel_diff <= REL_TABLE for r in rep.rows) and dt < T_Q
    assert acceptance(1, ok, f"table Q: {len(rep.rows)} rows, worst rel {_worst(rep):.2e} <= {REL_TABLE:g}, "
                             f"{dt:.1f} s < {T_Q:g} s")


def test_criterion_2_table_qrh(acceptance):
    rep, dt = _timed(reproduce_table, "QRH", CTX, tolerance=REL_TABLE)
    fixture = load_fixture()
    margins = [B.q_rh(B.RhParams.from_sigma0(r.key_value, *(r.value(n) for n in ("epsilon", "sigma1", "eta", "t0"))),
                      CTX).conditions.margin("tcond_rh1") for r in table_rows("QRH", fixture)]
    ok = len(rep.rows) == 11 and rep.passed and all(m > 0 for m in margins) and dt < T_QRH
    assert acceptance(2, ok, f"table QRH: worst rel {_worst(rep):.2e}, min tcond_rh1 margin "
                             f"{mp.nstr(min(margins), 4)} > 0, {dt:.2f} s < {T_QRH:g} s")


def test_criterion_3_reciprocal(acceptance):
    t = time.perf_counter()
    reps = {tid: reproduce_table(tid, CTX, tolerance=REL_TABLE) for tid in ("Y", "Yprime")}
    dt = time.perf_counter() - t
    w13 = [next(r for r in reps[tid].rows if r.key == "W=13") for tid in ("Y", "Yprime")]
    rows = load_fixture()
    sig = {}
    t = time.perf_counter()
    for r in table_rows("SIGMA1", rows):
        if r.key in ("y0", "yprime0", "q_one"):
            sig[r.key] = reproduce_row(r, CTX, tolerance=REL_TIGHT, rows=rows)
    dt_sig = time.perf_counter() - t
    ok = (all(rep.passed for rep in reps.values())
          and all(r.rel_diff <= REL_TIGHT for r in w13)
          and all(r.rel_diff <= REL_TIGHT and r.passed for r in sig.values())
          and dt < T_Y)
    vals = ", ".join(f"{k} {r.rel_diff:.1e}" for k, r in sig.items())
    assert acceptance(3, ok, f"W=13: Y {mp.nstr(w13[0].recomputed.mid, 7)} ({w13[0].rel_diff:.1e}), "
                             f"Y' {mp.nstr(w13[1].recomputed.mid, 7)} ({w13[1].rel_diff:.1e}) <= {REL_TIGHT:g}; "
                             f"other rows <= {REL_TABLE:g}; sigma>=1 {vals}; Y/Y' {dt:.2f} s < {T_Y:g} s, "
                             f"sigma>=1 {dt_sig:.1f} s")


def test_criterion_4_b1(acceptance):
    got = []
    for t0, eta, pub in ((3, Fraction(2, 3), "2.1173"), (10**3, Fraction(41, 100), "0.2254")):
        v = B.c0_strip(CONSTANTS.W0, 1, t0, eta, CTX).const
        with mp.workdps(30):
            got.append((t0, float(abs(v.mid / mpf(pub) - 1))))
    ok = all(r <= REL_TIGHT for _, r in got)
    assert acceptance(4, ok, "B1: " + ", ".join(f"t0={t} rel {r:.1e}" for t, r in got) + f" <= {REL_TIGHT:g}")


def test_criterion_5_rescale(acceptance):
    v = B.rescale_loglog(Fraction("7.686"), parse_value("e^e", CTX), 10**6, CTX)
    with mp.workdps(30):
        ok = v.lower >= mpf("40.44") - RESCALE_TOL and v.upper <= mpf("40.44") + RESCALE_TOL
    assert acceptance(5, ok, f"rescale_loglog(7.686, e^e, 10^6) = {mp.nstr(v.mid, 8)}, 40.44 +- {RESCALE_TOL}")


def test_criterion_6_small_t(acceptance):
    checks, dt = _timed(run_suite, "small-t", CTX)
    ok = len(checks) == 4 and all(c.passed for c in checks) and dt < T_SMALL
    assert acceptance(6, ok, "small-t: " + "; ".join(f"{c.id} {c.achieved}" for c in checks)
                      + f"; {dt:.0f} s < {T_SMALL:g} s")


def test_criterion_7_phi(acceptance):
    checks = B.run_phi_checks(ctx=CTX)
    names = [c.name for c in checks]
    ok = all(c.holds for c in checks) and len(checks) == 6
    assert acceptance(7, ok, f"phi suite: {sum(c.holds for c in checks)}/{len(checks)} hold ({'; '.join(names)})")


def test_criterion_8_optimizer(acceptance):
    rows = load_fixture()
    bad, changed, n = [], [], 0
    t = time.perf_counter()
    for tid in ("Q", "QRH", "Y", "Yprime", "B1", "SIGMA1"):
        for r in table_rows(tid, rows):
            n += 1
            a = optimize(problem_for_row(r, seed=0, rows=rows), CTX)
            b = optimize(problem_for_row(r, seed=0, rows=rows), CTX)
            if not (a.report.all_satisfied and a.value.upper <= r.published_value * REGRESSION):
                bad.append(f"{tid}:{r.key}")
            if a.best != b.best or a.value.mid != b.value.mid:
                changed.append(f"{tid}:{r.key}")
    dt = time.perf_counter() - t
    ok = not bad and not changed
    assert acceptance(8, ok, f"optimizer on {n} rows: regressions {bad or 'none'}, nondeterministic "
                             f"{changed or 'none'} ({dt:.0f} s)")


def test_criterion_9_properties(acceptance):
    inv = {c.id: c for c in run_suite("invariants", CTX)}
    want = ("enclosures_nest_under_doubling", "plp3_decreasing_in_sigma", "trig_product_at_least_one",
            "lavrik_contains_stieltjes")
    octx = CTX.with_rounding("outward")
    fd = [fd_check(s, t, octx) for s, t in sample_points(20, seed=0)]
    fd_ok = all(gap <= allow for gap, allow in fd)
    worst = max(float(gap / allow) for gap, allow in fd)
    ok = all(inv[w].passed for w in want) and fd_ok and len(fd) == 20
    assert acceptance(9, ok, "; ".join(f"{w} {'ok' if inv[w].passed else 'FAIL'}" for w in want)
                      + f"; finite differences at 20 points, h=1e-10, worst gap/allowance {worst:.3g}")
