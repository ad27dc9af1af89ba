from __future__ import annotations

from fractions import Fraction

from ..errors import DomainError
from ..numerics import DEFAULT_CONTEXT, CertifiedReal, IvBackend, PrecisionContext, to_mpf
from .types import ConditionedBound, ConditionReport, Region

DETAILS = {
    "tcond0": "t above the threshold that makes the strip bound decreasing in sigma",
    "tcond": "t^(1/6) log t >= zeta(1+delta_r) / (0.618 (1+a1)^(1/6))",
    "tcond_rh1": "t0^(1/6) log t0 >= zeta(3/2+eps) / (0.618 (1+a1)^(1/6))",
    "tcond_not_rh1": "t0^(1/6) log t0 >= zeta(3/2+2d/log t0) / (0.618 (1+a1)^(1/6))",
    "beta_floor": "beta >= (1 + 1/a_eps1(t0))^-1",
    "w_gt_w0": "W > W0 (1/W < 1/W0)",
    "eps1_lo": "epsilon1 >= 2d/log t0",
    "eps1_hi": "epsilon1 <= 1/2",
    "sigma1_lo": "sigma1 at least its lower limit",
    "sigma1_hi": "sigma1 <= 2",
    "eta_lo": "eta >= 2/t0",
    "eta_hi": "eta below its upper limit",
    "d_hi": "d <= 1/W0",
    "d_lt_log_t0_over_6": "d < log(t0)/6",
    "t0_lo": "t0 at least its lower limit",
    "t_ge_t0": "t >= t0",
    "region_compat": "sigma constraint of the later regime implies that of the earlier one",
}


def interval_ctx(ctx: PrecisionContext | None) -> PrecisionContext:
    return (ctx or DEFAULT_CONTEXT).with_rounding("outward")


def positive(name: str, x) -> None:
    if not to_mpf(x) > 0:
        raise DomainError(f"{name} must be positive")


def certify(m, x, ctx) -> CertifiedReal:
    return CertifiedReal.from_interval(x, ctx)


def exact_rational(x):
    """x as a Fraction when it is given exactly (int, Fraction, decimal string or float), else None."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return None
    return None


def build(m, ctx, branches, margins, region: Region, form="log t", extras=None, exact=None) -> ConditionedBound:
    """``exact`` maps condition ids to rational margins that replace the interval ones (equality cases)."""
    margins = dict(margins)
    for cid, val in (exact or {}).items():
        margins[cid] = m.num(val)
    vals = tuple(certify(m, b, ctx) for b in branches)
    best = m.max(*branches)
    selected = max(range(len(vals)), key=lambda i: vals[i].mid)
    report = ConditionReport.from_margins(margins, m.lower, DETAILS)
    ex = {k: (certify(m, v, ctx) if not isinstance(v, (int, float, str)) else v) for k, v in (extras or {}).items()}
    return ConditionedBound(certify(m, best, ctx), region, report, form, vals, selected, ex)


def backend_for(ctx) -> tuple[PrecisionContext, IvBackend]:
    c = interval_ctx(ctx)
    return c, IvBackend(c)
