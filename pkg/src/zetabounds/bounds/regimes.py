"""Trivial bounds, re-expressing constants in other forms, and stitching t ranges."""
from __future__ import annotations

from mpmath import iv, mp

from ..errors import DomainError, IncompatibleRegionError
from ..numerics import CertifiedReal, PrecisionContext, to_mpf
from ._common import backend_for, certify
from .types import Condition, ConditionedBound, ConditionReport, Region


def trivial_bounds(sigma, ctx: PrecisionContext | None = None) -> tuple[CertifiedReal, CertifiedReal, CertifiedReal]:
    """(|zeta| bound, |zeta'/zeta| bound, |1/zeta| bound) valid for Re s = sigma > 1."""
    if not to_mpf(sigma) > 1:
        raise DomainError("trivial bounds need sigma > 1")
    c, m = backend_for(ctx)
    with c.working():
        s = m.num(sigma)
        ratio = s / (s - 1)
        bastien = m.exp(m.euler * (s - 1)) / (s - 1)
        zeta_up = m.num(min(m.upper(ratio), m.upper(bastien)))
        return certify(m, zeta_up, c), certify(m, 1 / (s - 1), c), certify(m, ratio, c)


def aleks_bound(sigma, t, ctx: PrecisionContext | None = None) -> CertifiedReal:
    """4/(sigma - 1/2), the imported bound for |1/zeta| on a box near the 1-line."""
    s, tt = to_mpf(sigma), to_mpf(t)
    if not (0.5 < s <= 1.5):
        raise DomainError("sigma must lie in (1/2, 3/2]")
    if not (0 <= tt <= 2 * mp.exp(mp.e**2)):
        raise DomainError("t must lie in [0, 2 exp(e^2)]")
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, 4 / (m.num(sigma) - m.num("0.5")), c)


def aleks_t_max(ctx: PrecisionContext | None = None) -> CertifiedReal:
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, 2 * m.exp(m.e**2), c)


def reexpress_log_power(coeff, from_power, to_power, t_lo, t_hi, ctx: PrecisionContext | None = None) -> CertifiedReal:
    """Smallest c' with coeff (log t)^a <= c' (log t)^b on [t_lo, t_hi]."""
    if not 1 < to_mpf(t_lo) < to_mpf(t_hi):
        raise DomainError("requires 1 < t_lo < t_hi")
    c, m = backend_for(ctx)
    with c.working():
        a, b = m.num(from_power), m.num(to_power)
        diff = a - b
        end = t_hi if m.lower(diff) >= 0 else t_lo
        if m.lower(diff) < 0 < m.upper(diff):
            raise DomainError("power difference must have a definite sign")
        if m.upper(diff) == 0:
            return certify(m, m.num(coeff), c)
        return certify(m, m.num(coeff) * m.exp(diff * m.log(m.log(m.num(end)))), c)


def rescale_loglog(Q, t_lo, t_hi, ctx: PrecisionContext | None = None) -> CertifiedReal:
    """Q log t <= Q log(t_hi)/log log(t_hi) * log log t on [t_lo, t_hi]."""
    lo, hi = to_mpf(t_lo), to_mpf(t_hi)
    if not lo >= mp.exp(mp.e) * (1 - mp.mpf(10) ** (5 - mp.dps)):
        raise DomainError("t_lo must be at least e^e")
    if not lo < hi:
        raise DomainError("requires t_lo < t_hi")
    c, m = backend_for(ctx)
    with c.working():
        L = m.log(m.num(t_hi))
        return certify(m, m.num(Q) * L / m.log(L), c)


def _floor(r: Region, u):
    """sigma floor of a region at u = 1/log t (linear in u)."""
    if r.kind == "half_plane":
        return iv.mpf(to_mpf(r.a))
    if r.kind == "zero_free":
        W = to_mpf(r.a)
        return iv.mpf(1) if W == mp.inf else 1 - u / iv.mpf(W)
    raise IncompatibleRegionError(f"cannot compare a {r.kind} region")


def _sigma_margin(low: Region, high: Region, t_lo, t_hi):
    """Lower bound of floor(high) - floor(low) over t in [t_lo, t_hi].

    Both floors are affine in 1/log t, so the endpoints suffice.
    """
    ends = [1 / iv.log(iv.mpf(to_mpf(t_lo)))]
    ends.append(iv.mpf(0) if t_hi == mp.inf else 1 / iv.log(iv.mpf(t_hi)))
    return min(mp.make_mpf((_floor(high, u) - _floor(low, u))._mpi_[0]) for u in ends)


def combine_regimes(low: ConditionedBound, high: ConditionedBound, t_split, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """One constant valid from low's t0 upward, on the sigma region of ``high``."""
    split = to_mpf(t_split)
    lo_hi = to_mpf(low.region.t_hi)
    if not (to_mpf(low.region.t_lo) <= split and lo_hi >= split and to_mpf(high.region.t_lo) <= split):
        raise IncompatibleRegionError("t ranges do not meet at the split point")
    if low.form != high.form:
        raise IncompatibleRegionError(f"bounds have different shapes: {low.form} vs {high.form}")
    c, _ = backend_for(ctx)
    with c.working():
        margin = _sigma_margin(low.region, high.region, low.region.t_lo, lo_hi)
        if margin < 0:
            raise IncompatibleRegionError(
                f"sigma region of the later regime is not covered by the earlier one (margin {mp.nstr(margin, 6)})"
            )
        selected = 0 if low.value.upper >= high.value.upper else 1
        value = (low.value, high.value)[selected]
        compat = Condition("region_compat", True, margin, "sigma constraint of the later regime implies that of the earlier one")
        items = tuple(Condition(f"low:{x.id}", x.satisfied, x.margin, x.detail) for x in low.conditions.items)
        items += tuple(Condition(f"high:{x.id}", x.satisfied, x.margin, x.detail) for x in high.conditions.items)
        region = Region(high.region.kind, high.region.a, high.region.b, low.region.t_lo, high.region.t_hi)
        return ConditionedBound(
            value,
            region,
            ConditionReport((compat,) + items),
            high.form,
            (low.value, high.value),
            selected,
            {"t_split": t_split},
        )
