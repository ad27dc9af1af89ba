"""The real-axis functions phi0, phi1, phi2 built from Stieltjes constants.

phi0 is the truncated Laurent tail with a geometric bound on the omitted
terms, so zeta(sigma) >= 1/(sigma-1) + gamma + phi0.  phi1 turns that into a
bound for -zeta'/zeta on the real axis, and phi2 caps phi1 near 1.5.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv, mp

from ..errors import DomainError, IndexOutOfRangeError
from ..numerics import CONSTANTS, CertifiedReal, PrecisionContext, stieltjes_constant, stieltjes_table, to_mpf
from ._common import backend_for

PHI2_K = 10
ADMISSIBLE_PAIRS = ((Fraction(145, 100), 1), (Fraction(2), 3), (Fraction(251, 100), 10))


def _check(sigma, k: int) -> None:
    s = to_mpf(sigma)
    if not 1 < s < 3:
        raise DomainError("sigma must lie strictly between 1 and 3")
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    if k > stieltjes_table().n_max:
        raise IndexOutOfRangeError(f"k = {k} exceeds the stored Stieltjes table (n <= {stieltjes_table().n_max})")


def _gammas(k: int, ctx: PrecisionContext) -> list:
    return [stieltjes_constant(n, ctx).to_interval() for n in range(k + 1)]


def _phi_iv(s, k: int, gammas):
    """(phi0, phi1) as iv intervals for an iv sigma."""
    x = s - 1
    total = iv.mpf(0)
    term = iv.mpf(1)
    for n in range(1, k + 1):
        term = term * (-x) / n
        total += term * gammas[n]
    phi0 = total + (x / 2) ** (k + 1) / (s - 3)
    d = (s - 3) ** 2
    phi1 = (d + x * x) / (d * (1 + x * (phi0 + gammas[0])))
    return phi0, phi1


def phi_family(sigma, k: int, ctx: PrecisionContext | None = None) -> tuple[CertifiedReal, CertifiedReal]:
    _check(sigma, k)
    c, m = backend_for(ctx)
    with c.working():
        p0, p1 = _phi_iv(m.num(sigma), k, _gammas(k, c))
        return CertifiedReal.from_interval(p0, c), CertifiedReal.from_interval(p1, c)


def phi2(sigma0, ctx: PrecisionContext | None = None) -> CertifiedReal:
    """max(phi1(sigma0, 10), 0.852)."""
    s = to_mpf(sigma0)
    if not 1 < s <= 1.5:
        raise DomainError("sigma0 must lie in (1, 1.5]")
    c, m = backend_for(ctx)
    _, p1 = phi_family(sigma0, PHI2_K, c)
    floor = CertifiedReal.from_value(CONSTANTS.phi2_floor, c)
    return p1 if p1.upper > floor.upper else floor


@dataclass(frozen=True)
class PhiCheck:
    """Outcome of a grid check: ``worst`` is the extreme certified value seen."""

    name: str
    holds: bool
    worst: object
    at: object
    nodes: int


def _grid(lo, hi, step):
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    n = int((hi - lo) / step)
    pts = [lo + i * step for i in range(1, n + 1)]
    if not pts or pts[-1] != hi:
        pts.append(hi)
    return pts


def _g(x) -> str:
    return mp.nstr(to_mpf(x), 8)


def _iv_sigma(x: Fraction):
    return iv.mpf(x.numerator) / x.denominator


def check_phi0_nonnegative(sigma_k, k: int, step=Fraction(1, 1000), ctx: PrecisionContext | None = None) -> PhiCheck:
    """phi0(sigma, k) >= 0 at every grid point of (1, sigma_k]."""
    _check(sigma_k, k)
    c, _ = backend_for(ctx)
    with c.working():
        gam = _gammas(k, c)
        worst, at = mp.inf, None
        pts = _grid(1, sigma_k, step)
        for s in pts:
            lo = mp.make_mpf(_phi_iv(_iv_sigma(s), k, gam)[0]._mpi_[0])
            if lo < worst:
                worst, at = lo, s
    return PhiCheck(f"phi0(sigma,{k}) >= 0 on (1, {_g(sigma_k)}]", worst >= 0, worst, at, len(pts))


def check_phi1_below(k: int, sigma_max, bound, sigma_min=1, step=Fraction(1, 1000), ctx: PrecisionContext | None = None,
                     strict: bool = True) -> PhiCheck:
    """phi1(sigma, k) < bound (or <= when not strict) on the grid of (sigma_min, sigma_max]."""
    _check(sigma_max, k)
    c, _ = backend_for(ctx)
    b = to_mpf(bound)
    with c.working():
        gam = _gammas(k, c)
        worst, at = -mp.inf, None
        pts = _grid(sigma_min, sigma_max, step)
        if Fraction(sigma_min) > 1:
            pts.insert(0, Fraction(sigma_min))
        for s in pts:
            hi = mp.make_mpf(_phi_iv(_iv_sigma(s), k, gam)[1]._mpi_[1])
            if hi > worst:
                worst, at = hi, s
    holds = worst < b if strict else worst <= b
    rel = "<" if strict else "<="
    return PhiCheck(f"phi1(sigma,{k}) {rel} {_g(bound)} on ({_g(sigma_min)}, {_g(sigma_max)}]", holds, worst, at, len(pts))


def check_phi1_decreasing(k: int, sigma_max, step=Fraction(1, 1000), ctx: PrecisionContext | None = None) -> PhiCheck:
    """phi1(., k) strictly decreasing along the grid of (1, sigma_max]; worst is the smallest certified drop."""
    _check(sigma_max, k)
    c, _ = backend_for(ctx)
    with c.working():
        gam = _gammas(k, c)
        pts = _grid(1, sigma_max, step)
        vals = [_phi_iv(_iv_sigma(s), k, gam)[1]._mpi_ for s in pts]
        worst, at = mp.inf, None
        for i in range(len(pts) - 1):
            drop = mp.make_mpf(vals[i][0]) - mp.make_mpf(vals[i + 1][1])
            if drop < worst:
                worst, at = drop, pts[i]
    return PhiCheck(f"phi1(sigma,{k}) decreasing on (1, {_g(sigma_max)}]", worst > 0, worst, at, len(pts))


def run_phi_checks(step=Fraction(1, 1000), ctx: PrecisionContext | None = None) -> list[PhiCheck]:
    checks = [check_phi0_nonnegative(s, k, step, ctx) for s, k in ADMISSIBLE_PAIRS]
    checks.append(check_phi1_below(3, Fraction(183, 100), 1, step=step, ctx=ctx))
    checks.append(check_phi1_decreasing(PHI2_K, Fraction(148, 100), step, ctx))
    checks.append(check_phi1_below(PHI2_K, Fraction(3, 2), CONSTANTS.phi2_floor, sigma_min=Fraction(148, 100),
                                   step=step, ctx=ctx, strict=False))
    return checks
