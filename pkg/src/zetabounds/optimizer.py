"""Deterministic multi-start minimization of the bound constants.

Search runs on doubles through the shared formula kernels.  Seeds come from a
Latin hypercube, each promising seed is refined by bounded Nelder-Mead on the
log of the objective, and the winner is re-evaluated with interval
arithmetic so the reported value and side conditions are certified.

Problems can be given as INI files::

    [problem]
    objective = q_h
    seed = 0
    starts = 32

    [fixed]
    W = 10
    d = 1/W0
    t0 = H

    [box]
    epsilon1 = 0.005 0.5
    eta = 0.5 6
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .bounds import (
    ConditionedBound,
    ConditionReport,
    HParams,
    LadderTable,
    ReciprocalParams,
    RhParams,
    q_h,
    q_one,
    q_rh,
    y0,
    yprime0,
)
from .bounds import kernels as k
from .bounds.logderiv import beta_for_w
from .bounds.types import Region
from .bounds._common import backend_for, build, exact_rational
from .errors import DomainError, InfeasibleBoxError, ZetaBoundsError
from .numerics import CONSTANTS, DEFAULT_CONTEXT, FLOAT, CertifiedReal, PrecisionContext, to_mpf

DEFAULT_STARTS = 32
SEEDS_PER_START = 8
FLOAT_MARGIN = 1e-10
TIE_RESOLUTION = 1e-9


@dataclass(frozen=True)
class Objective:
    """A minimizable bound.

    ``evaluate`` maps a full parameter dict of floats to (value, margins);
    ``certify`` rebuilds the bound with interval arithmetic.  ``pinned`` lists
    conditions that depend on fixed parameters only; the float search skips
    them and the certified report still checks them.
    """

    name: str
    free: tuple[str, ...]
    evaluate: Callable[[dict], tuple[float, dict]]
    certify: Callable[[dict, PrecisionContext], ConditionedBound]
    default_box: Callable[[dict], dict]
    pinned: frozenset = frozenset()
    derived: Callable[[dict], dict] = lambda p: {}


def _f(x) -> float:
    return float(to_mpf(x))


# -- q_h with W pinned --------------------------------------------------------


def _qh_beta(p: dict) -> float:
    return k.beta_for_w(FLOAT, _f(p["W"]), _f(p["d"]), p["epsilon1"], _f(p["t0"]))


def _qh_eval(p):
    beta = _qh_beta(p)
    if not 0 < beta < 1:
        raise DomainError("beta outside (0, 1)")
    b, m, _ = k.q_h_terms(FLOAT, _f(p["d"]), beta, p["epsilon1"], p["sigma1"], p["eta"], _f(p["t0"]))
    return max(b), m


def _qh_cert(p, ctx):
    beta = beta_for_w(p["W"], p["d"], p["epsilon1"], p["t0"], ctx)
    _, b = q_h(HParams(p["d"], beta, p["epsilon1"], p["sigma1"], p["eta"], p["t0"]), ctx)
    return b


def _h_box(p):
    d, L = _f(p.get("d", 1 / CONSTANTS.W0)), math.log(_f(p.get("t0", CONSTANTS.H)))
    return {"epsilon1": (2 * d / L, 0.5), "sigma1": (1 + d / L, 2.0), "eta": (0.5, 6.0)}


_H_PINNED = frozenset({"d_hi", "d_lt_log_t0_over_6", "t0_lo", "tcond_not_rh1"})


# -- q_one --------------------------------------------------------------------


def _qone_eval(p):
    b, m, _ = k.q_one_terms(FLOAT, _f(p["d"]), p["epsilon1"], p["sigma1"], p["eta"], _f(p["t0"]))
    return max(b), m


def _qone_cert(p, ctx):
    return q_one(p["d"], p["epsilon1"], p["sigma1"], p["eta"], p["t0"], ctx)


# -- q_rh ---------------------------------------------------------------------


def _alpha0(p) -> float:
    return 2 * (1 + p["epsilon"] - _f(p["sigma0"]))


def _qrh_eval(p):
    a0 = _alpha0(p)
    if not 0 < a0 < 1:
        raise DomainError("alpha0 outside (0, 1)")
    b, m, _ = k.q_rh_terms(FLOAT, p["epsilon"], a0, p["sigma1"], p["eta"], _f(p["t0"]))
    return max(b), m


def _qrh_cert(p, ctx):
    return q_rh(RhParams.from_sigma0(p["sigma0"], p["epsilon"], p["sigma1"], p["eta"], p["t0"]), ctx)


def _rh_box(p):
    s0 = _f(p["sigma0"])
    lo = max(1e-6, s0 - 1 + 1e-9)
    hi = min(0.5, s0 - 0.5 - 1e-9)
    return {"epsilon": (lo, hi), "sigma1": (1.0, 2.0), "eta": (0.5, 8.0)}


# -- reciprocal ---------------------------------------------------------------


def _ladder(p) -> LadderTable:
    lad = p.get("ladder")
    if lad is None:
        return LadderTable()
    return lad


def _y0_eval(p):
    S = k.ladder_sum(FLOAT, _ladder(p).entries)
    b, m, _ = k.y0_terms(FLOAT, p["d1"], p["sigma1"], p["eta"], _f(p["t0"]), S)
    return max(b), m


def _y0_cert(p, ctx):
    return y0(ReciprocalParams(p["d1"], p["sigma1"], p["eta"], p["t0"], _ladder(p)), ctx)


def _yp_eval(p):
    S = k.ladder_sum(FLOAT, _ladder(p).entries)
    b, m, _ = k.yprime0_terms(FLOAT, p["d1"], _f(p["t0"]), S)
    return max(b), m


def _yp_cert(p, ctx):
    return yprime0(ReciprocalParams(p["d1"], t0=p["t0"], ladder=_ladder(p), asymptotic=True), ctx)


# -- c0_strip constant --------------------------------------------------------


def _c0_eval(p):
    b, m, _ = k.c0_terms(FLOAT, _f(p["W"]), _f(p["sigma1"]), _f(p["t0"]), p["eta"])
    return b[0], m


def _c0_cert(p, ctx):
    c, m = backend_for(ctx)
    eta, t0 = exact_rational(p["eta"]), exact_rational(p["t0"])
    exact = {} if eta is None or t0 is None else {"eta_lo": eta - 2 / t0, "eta_hi": 1 - 1 / t0 - eta}
    with c.working():
        b, margins, extras = k.c0_terms(m, m.num(p["W"]), m.num(p["sigma1"]), m.num(p["t0"]), m.num(p["eta"]))
        region = Region("zero_free", p["W"], t_lo=p["t0"])
        return build(m, c, b, margins, region, form="1", extras=extras, exact=exact)


def _c0_box(p):
    t0 = exact_rational(p["t0"])
    if t0 is None:
        t0 = _f(p["t0"])
    return {"eta": (2 / t0, 1 - 1 / t0)}


OBJECTIVES: dict[str, Objective] = {
    "q_h": Objective("q_h", ("epsilon1", "sigma1", "eta"), _qh_eval, _qh_cert, _h_box, _H_PINNED,
                     lambda p: {"beta": _qh_beta(p)}),
    "q_one": Objective("q_one", ("epsilon1", "sigma1", "eta"), _qone_eval, _qone_cert, _h_box,
                       _H_PINNED | {"beta_floor"}),
    "q_rh": Objective("q_rh", ("epsilon", "sigma1", "eta"), _qrh_eval, _qrh_cert, _rh_box, frozenset({"t0_lo"}),
                      lambda p: {"alpha0": _alpha0(p)}),
    "y0": Objective("y0", ("d1", "sigma1", "eta"), _y0_eval, _y0_cert,
                    lambda p: {"d1": (0.005, 0.2), "sigma1": (1.0, 2.0), "eta": (0.5, 8.0)}, frozenset({"t0_lo"})),
    "yprime0": Objective("yprime0", ("d1",), _yp_eval, _yp_cert, lambda p: {"d1": (0.005, 0.2)},
                         frozenset({"t0_lo"})),
    "c0_strip": Objective("c0_strip", ("eta",), _c0_eval, _c0_cert, _c0_box, frozenset({"t0_lo", "eta_lo", "eta_hi"})),
}

DEFAULT_FIXED = {
    "q_h": {"d": 1 / CONSTANTS.W0, "t0": CONSTANTS.H},
    "q_one": {"d": 1 / CONSTANTS.W0, "t0": CONSTANTS.H},
    "q_rh": {},
    "y0": {"t0": 13},
    "yprime0": {"t0": 13},
    "c0_strip": {"W": CONSTANTS.W0, "sigma1": 1},
}
REQUIRED_FIXED = {"q_h": ("W",), "q_rh": ("sigma0", "t0"), "c0_strip": ("t0",)}


@dataclass(frozen=True)
class OptimizationProblem:
    objective_id: str
    fixed: dict = field(default_factory=dict)
    box: dict = field(default_factory=dict)
    constraints: Optional[tuple[str, ...]] = None
    seed: int = 0
    starts: int = DEFAULT_STARTS

    def __post_init__(self) -> None:
        if self.objective_id not in OBJECTIVES:
            raise DomainError(f"unknown objective {self.objective_id!r}; expected one of {', '.join(OBJECTIVES)}")
        obj = OBJECTIVES[self.objective_id]
        fixed = {**DEFAULT_FIXED.get(self.objective_id, {}), **self.fixed}
        for name in REQUIRED_FIXED.get(self.objective_id, ()):
            if name not in fixed:
                raise DomainError(f"{self.objective_id} needs a fixed value for {name}")
        object.__setattr__(self, "fixed", fixed)
        box = {**obj.default_box(fixed), **self.box}
        for name in box:
            if name not in obj.free:
                raise DomainError(f"{name} is not a free parameter of {self.objective_id}")
            if name in fixed:
                raise DomainError(f"{name} is both fixed and free")
        for name in obj.free:
            if name not in box and name not in fixed:
                raise DomainError(f"no range for free parameter {name}")
        for name, (lo, hi) in box.items():
            if not to_mpf(lo) <= to_mpf(hi):
                raise DomainError(f"empty range for {name}: [{lo}, {hi}]")
        ordered = {n: (box[n][0], box[n][1]) for n in obj.free if n in box}
        object.__setattr__(self, "box", ordered)
        if self.starts < 1:
            raise DomainError("starts must be positive")

    @property
    def objective(self) -> Objective:
        return OBJECTIVES[self.objective_id]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.box)


@dataclass
class OptResult:
    best: dict
    value: CertifiedReal
    report: ConditionReport
    evaluations: int
    bound: ConditionedBound
    doubled_rel_change: float
    trace: list = field(default_factory=list)


class _Scorer:
    def __init__(self, problem: OptimizationProblem):
        self.p = problem
        self.obj = problem.objective
        self.ends = list(problem.box.values())
        self.lo = np.array([_f(b[0]) for b in self.ends])
        self.hi = np.array([_f(b[1]) for b in self.ends])
        self.count = 0
        self.wanted = None if problem.constraints is None else set(problem.constraints)

    def params(self, u) -> dict:
        """Box coordinates to parameters; the box ends keep their exact values."""
        u = np.clip(u, 0.0, 1.0)
        x = self.lo + u * (self.hi - self.lo)
        out = dict(self.p.fixed)
        for i, n in enumerate(self.p.names):
            lo, hi = self.ends[i]
            out[n] = lo if u[i] == 0.0 or self.lo[i] == self.hi[i] else hi if u[i] == 1.0 else float(x[i])
        return out

    def feasible(self, margins: dict) -> bool:
        for cid, m in margins.items():
            if cid in self.obj.pinned:
                continue
            if self.wanted is not None and cid not in self.wanted:
                continue
            if not m > FLOAT_MARGIN:
                return False
        return True

    def __call__(self, u) -> float:
        self.count += 1
        try:
            p = self.params(u)
            val, margins = self.obj.evaluate({**p, **{n: _f(p[n]) for n in self.p.names}})
        except (ZetaBoundsError, ValueError, ZeroDivisionError, OverflowError):
            return math.inf
        if not (val > 0 and math.isfinite(val)) or not self.feasible(margins):
            return math.inf
        return math.log(val)


def _tie_key(score: float, x: tuple) -> tuple:
    return (round(score / TIE_RESOLUTION) if math.isfinite(score) else math.inf, x)


def _search(problem: OptimizationProblem) -> tuple[list[tuple[float, tuple]], int, list]:
    """Float multi-start search; returns candidates sorted best first."""
    score = _Scorer(problem)
    dim = len(problem.names)
    if dim == 0:
        s = score(np.zeros(0))
        return [(s, ())], score.count, []
    sampler = qmc.LatinHypercube(d=dim, rng=problem.seed)
    seeds = sampler.random(SEEDS_PER_START * problem.starts)
    scored = sorted(((score(u), tuple(u)) for u in seeds), key=lambda t: _tie_key(*t))
    starts = [s for s in scored if math.isfinite(s[0])][: problem.starts]
    if not starts:
        raise InfeasibleBoxError(f"no feasible seed point for {problem.objective_id} in box {problem.box}")
    trace, finals = [], []
    for s0, u0 in starts:
        res = minimize(
            score,
            np.array(u0),
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * dim,
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400 * dim, "adaptive": dim > 2},
        )
        u = tuple(float(v) for v in np.clip(res.x, 0.0, 1.0))
        f = float(res.fun)
        if not f <= s0:
            f, u = s0, u0
        finals.append((f, u))
        trace.append((s0, f))
    finals.sort(key=lambda t: _tie_key(*t))
    return finals, score.count, trace


def _best_params(problem: OptimizationProblem, u) -> dict:
    sc = _Scorer(problem)
    p = sc.params(np.array(u))
    return p


def optimize(problem: OptimizationProblem, ctx: PrecisionContext | None = None) -> OptResult:
    ctx = (ctx or DEFAULT_CONTEXT).with_rounding("outward")
    finals, count, trace = _search(problem)
    last_err = None
    for f, u in finals:
        if not math.isfinite(f):
            break
        p = _best_params(problem, u)
        try:
            bound = problem.objective.certify(p, ctx)
        except ZetaBoundsError as exc:
            last_err = exc
            continue
        if not _wanted_ok(bound.conditions, problem.constraints):
            continue
        again = problem.objective.certify(p, ctx.doubled()).value
        change = float(abs(again.mid - bound.value.mid) / abs(bound.value.mid))
        best = {n: p[n] for n in problem.names}
        best.update({n: v for n, v in problem.objective.derived(p).items()})
        return OptResult(best, bound.value, bound.conditions, count, bound, change, trace)
    raise InfeasibleBoxError(
        f"no candidate for {problem.objective_id} passed certified condition checks"
        + (f" ({last_err})" if last_err else "")
    )


def _wanted_ok(report: ConditionReport, constraints) -> bool:
    if constraints is None:
        return report.all_satisfied
    return all(c.satisfied for c in report.items if c.id in constraints)


# -- problems for fixture rows ------------------------------------------------


def problem_for_row(row, seed: int = 0, starts: int = DEFAULT_STARTS, rows=None) -> OptimizationProblem:
    """The optimization a published row came from, with the row's fixed choices."""
    from .tables import q_ladder

    c = DEFAULT_CONTEXT
    v = lambda name: row.value(name, c)  # noqa: E731
    tid = row.table_id
    if tid == "Q":
        fixed = {"W": row.key_value, "d": v("d"), "t0": v("t0")}
        return OptimizationProblem("q_h", fixed, seed=seed, starts=starts)
    if tid == "QRH":
        return OptimizationProblem("q_rh", {"sigma0": row.key_value, "t0": v("t0")}, seed=seed, starts=starts)
    if tid in ("Y", "Yprime"):
        ladder = q_ladder(rows).restrict(row.key_value)
        obj = "y0" if tid == "Y" else "yprime0"
        return OptimizationProblem(obj, {"t0": v("t0"), "ladder": ladder}, seed=seed, starts=starts)
    if tid == "B1":
        return OptimizationProblem("c0_strip", {"W": v("W"), "sigma1": v("sigma1"), "t0": v("t0")},
                                   seed=seed, starts=starts)
    kind = row.key.split()[0]
    if kind in ("y0", "yprime0"):
        return OptimizationProblem(kind, {"t0": v("t0")}, seed=seed, starts=starts)
    if kind == "q_one":
        return OptimizationProblem("q_one", {"d": v("d"), "t0": v("t0")}, seed=seed, starts=starts)
    raise DomainError(f"no optimization problem for row {row.key!r}")


# -- config files -------------------------------------------------------------


def _parse_number(text: str):
    from .tables import parse_value

    return parse_value(text)


def _parse_ladder(text: str) -> LadderTable:
    """``13:52.306, 12:56.653`` or ``fixture`` with W taken from the problem."""
    entries = []
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        w, _, qv = item.partition(":")
        entries.append((_parse_number(w), _parse_number(qv)))
    return LadderTable(tuple(sorted(entries)))


def load_problem(path: str | Path, seed: int | None = None) -> OptimizationProblem:
    cp = configparser.ConfigParser()
    cp.optionxform = str
    with open(path) as fh:
        cp.read_file(fh)
    if "problem" not in cp:
        raise DomainError("config needs a [problem] section")
    sec = cp["problem"]
    if "objective" not in sec:
        raise DomainError("[problem] needs an objective")
    fixed = {}
    if "fixed" in cp:
        for name, text in cp["fixed"].items():
            fixed[name] = _parse_number(text) if name != "ladder" else None
            if name == "ladder":
                if text.strip() == "fixture":
                    from .tables import q_ladder

                    w = fixed.get("W") or _parse_number(cp["fixed"]["W"])
                    fixed["ladder"] = q_ladder().restrict(w)
                else:
                    fixed["ladder"] = _parse_ladder(text)
    box = {}
    if "box" in cp:
        for name, text in cp["box"].items():
            parts = text.split()
            if len(parts) != 2:
                raise DomainError(f"box entry {name} needs 'lo hi'")
            box[name] = (float(_parse_number(parts[0])), float(_parse_number(parts[1])))
    constraints = sec.get("constraints")
    cons = tuple(c.strip() for c in constraints.split(",") if c.strip()) if constraints else None
    return OptimizationProblem(
        sec["objective"],
        fixed,
        box,
        cons,
        seed=sec.getint("seed", 0) if seed is None else seed,
        starts=sec.getint("starts", DEFAULT_STARTS),
    )


def describe_params(p: dict) -> dict:
    """Printable view of a parameter dict."""
    out = {}
    for name, val in p.items():
        if isinstance(val, LadderTable):
            out[name] = ",".join(f"{_fmt(w)}:{_fmt(q)}" for w, q in val.entries)
        else:
            out[name] = _fmt(val)
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(float(to_mpf(x))) if not isinstance(x, str) else x
