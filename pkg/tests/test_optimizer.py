import itertools
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zetabounds import bounds as B
from zetabounds.errors import DomainError, InfeasibleBoxError
from zetabounds.numerics import PrecisionContext
from zetabounds.optimizer import OptimizationProblem, _parse_ladder, load_problem, optimize, problem_for_row
from zetabounds.tables import find_row, q_ladder

CTX = PrecisionContext(40)


def test_validation():
    with pytest.raises(DomainError, match="unknown objective"):
        OptimizationProblem("nope")
    with pytest.raises(DomainError, match="needs a fixed value for W"):
        OptimizationProblem("q_h")
    with pytest.raises(DomainError, match="not a free parameter"):
        OptimizationProblem("q_h", {"W": 10}, {"beta": (0.5, 0.9)})
    with pytest.raises(DomainError, match="both fixed and free"):
        OptimizationProblem("y0", {"eta": 3}, {"eta": (1, 2)})
    with pytest.raises(DomainError, match="empty range"):
        OptimizationProblem("y0", box={"eta": (3, 2)})
    with pytest.raises(DomainError, match="starts"):
        OptimizationProblem("y0", starts=0)


def test_infeasible_box():
    # eta must exceed 2/t0 = 2/3, so this box has no admissible point
    p = OptimizationProblem("c0_strip", {"t0": 3}, {"eta": (0.1, 0.2)}, starts=2)
    with pytest.raises(InfeasibleBoxError):
        optimize(p, CTX)


def test_deterministic():
    p = OptimizationProblem("q_h", {"W": 10}, seed=7, starts=4)
    a, b = optimize(p, CTX), optimize(p, CTX)
    assert a.best == b.best
    assert a.value.mid == b.value.mid and a.value.rad == b.value.rad
    assert a.evaluations == b.evaluations


def test_q_h_w10():
    r = optimize(OptimizationProblem("q_h", {"W": 10}, starts=8), CTX)
    assert r.report.all_satisfied
    assert r.value.upper <= mpf("71.220") * mpf("1.01")
    assert 0 < r.best["beta"] < 1
    assert r.doubled_rel_change < 1e-6


def test_y0_w13():
    r = optimize(problem_for_row(find_row("Y", "W=13"), starts=8), CTX)
    assert r.report.all_satisfied
    assert r.value.upper <= 1719 * mpf("1.001")
    assert abs(r.best["d1"] - 0.0306) < 2e-3


def test_result_recertifies():
    r = optimize(OptimizationProblem("q_rh", {"sigma0": Fraction(4, 5), "t0": 14}, starts=8), CTX)
    p = B.RhParams.from_sigma0(Fraction(4, 5), r.best["epsilon"], r.best["sigma1"], r.best["eta"], 14)
    again = B.q_rh(p, PrecisionContext(80))
    assert again.ok
    with mp.workdps(60):
        assert abs(again.value.mid / r.value.mid - 1) < 1e-20


def test_beats_coarse_grid():
    # independent oracle: certified bound on a 6x6x6 grid of the box; keep the best admissible point
    s0, t0 = Fraction(4, 5), 14
    eps = [0.021 + 0.004 * i for i in range(6)]
    sig = [1.05 + 0.18 * i for i in range(6)]
    eta = [1.0 + 0.9 * i for i in range(6)]
    box = {"epsilon": (eps[0], eps[-1]), "sigma1": (sig[0], sig[-1]), "eta": (eta[0], eta[-1])}
    ctx = PrecisionContext(30)
    grid_best = mp.inf
    for e, s, h in itertools.product(eps, sig, eta):
        b = B.q_rh(B.RhParams.from_sigma0(s0, e, s, h, t0), ctx)
        if b.ok:
            grid_best = min(grid_best, b.value.upper)
    assert grid_best < mp.inf
    r = optimize(OptimizationProblem("q_rh", {"sigma0": s0, "t0": t0}, box, starts=8), ctx)
    assert r.value.lower <= grid_best


def test_constraints_subset():
    # only eta_hi is enforced, so eta may run past its usual upper limit
    box = {"eta": (0.5, 40.0)}
    full = optimize(OptimizationProblem("y0", box=box, starts=4), CTX)
    part = optimize(OptimizationProblem("y0", box=box, constraints=("sigma1_lo",), starts=4), CTX)
    assert full.report.all_satisfied
    assert part.report.margin("sigma1_lo") > 0
    assert part.value.upper <= full.value.upper


def test_parse_ladder():
    lad = _parse_ladder("13:52.306, 12:56.653")
    assert lad.entries == ((12, Fraction("56.653")), (13, Fraction("52.306")))


def test_load_problem(tmp_path):
    cfg = tmp_path / "p.ini"
    cfg.write_text(
        "[problem]\nobjective = y0\nstarts = 3\n\n[fixed]\nW = 13\nt0 = 13\nladder = fixture\n\n"
        "[box]\nd1 = 0.02 0.05\nsigma1 = 1.05 1.4\neta = 2 4\n"
    )
    p = load_problem(cfg, seed=5)
    assert p.objective_id == "y0" and p.seed == 5 and p.starts == 3
    assert p.fixed["ladder"] == q_ladder().restrict(13)
    assert p.box["d1"] == (0.02, 0.05)
    r = optimize(p, CTX)
    assert r.value.upper <= 1719 * mpf("1.001")


@pytest.mark.parametrize("text,msg", [
    ("[fixed]\nW = 1\n", "problem"),
    ("[problem]\nstarts = 2\n", "objective"),
    ("[problem]\nobjective = y0\n[box]\nd1 = 0.1\n", "lo hi"),
])
def test_load_problem_errors(tmp_path, text, msg):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(text)
    with pytest.raises(DomainError, match=msg):
        load_problem(cfg)


def test_problem_for_row_unknown():
    from zetabounds.tables import TableRow

    with pytest.raises(DomainError):
        problem_for_row(TableRow("SIGMA1", "other", {}, "1"))
