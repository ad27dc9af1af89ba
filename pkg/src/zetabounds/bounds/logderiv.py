"""Bounds for zeta in strips and for zeta'/zeta, as certified constants."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from ..errors import DomainError
from ..numerics import CONSTANTS, CertifiedReal, PrecisionContext, to_mpf
from ..numerics import zeta_real as _zeta_real
from . import kernels as k
from ._common import backend_for, build, certify, exact_rational, positive
from .types import ConditionedBound, HParams, KParams, Region, RhParams


def a_terms(sigma, Q0, t, ctx: PrecisionContext | None = None) -> tuple[CertifiedReal, CertifiedReal]:
    if not to_mpf(t) > 1:
        raise DomainError("a_terms requires t > 1")
    c, m = backend_for(ctx)
    with c.working():
        s, q0, tt = m.num(sigma), m.num(Q0), m.num(t)
        return certify(m, k.a0(m, s, q0, tt), c), certify(m, k.a1(m, s, q0, tt), c)


def half_line_kparams(delta_r, t, ctx: PrecisionContext | None = None) -> KParams:
    """(k1, k2, k3, k4, Q0) = (0.618, 1/6, 1, zeta(1+delta_r)/log t, 1.31)."""
    c, _ = backend_for(ctx)
    with c.working():
        k4 = _zeta_real(1 + to_mpf(delta_r), c).upper / mp.log(to_mpf(t))
    return KParams(CONSTANTS.hpy_half_line, Fraction(1, 6), 1, k4, CONSTANTS.q0_half_line, delta_r)


def plp_strip_bound(kp: KParams, sigma, t, t0, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """Phragmen-Lindelof interpolation between sigma = 1/2 and sigma = 1 + delta_r."""
    s, d = to_mpf(sigma), to_mpf(kp.delta_r)
    if not 0.5 <= s <= 1 + d:
        raise DomainError("sigma must lie in [1/2, 1 + delta_r]")
    if not to_mpf(t0) >= mp.e or not to_mpf(t) >= to_mpf(t0):
        raise DomainError("requires t >= t0 >= e")
    for name in ("k1", "k2", "k4"):
        positive(name, getattr(kp, name))
    c, m = backend_for(ctx)
    with c.working():
        args = [m.num(v) for v in (kp.k1, kp.k2, kp.k3, kp.k4, kp.Q0, kp.delta_r)]
        val, margins = k.plp3(m, *args, m.num(sigma), m.num(t), m.num(t0))
        region = Region("line", sigma, t_lo=t, t_hi=t)
        return build(m, c, (val,), margins, region, form="1")


def plp_cor_bound(delta_r, t0, t, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """Coefficient of t^(1/6) log t for |zeta| on 1/2 <= sigma <= 1 + delta_r."""
    positive("delta_r", delta_r)
    if not to_mpf(t0) >= mp.e or not to_mpf(t) >= to_mpf(t0):
        raise DomainError("requires t >= t0 >= e")
    c, m = backend_for(ctx)
    with c.working():
        coeff, margins = k.plp_cor(m, m.num(delta_r), m.num(t0), m.num(t))
        region = Region("strip", "1/2", 1 + to_mpf(delta_r), t_lo=t0)
        return build(m, c, (coeff,), margins, region, form="t^(1/6) log t")


def c3(t0, ctx: PrecisionContext | None = None) -> CertifiedReal:
    if not to_mpf(t0) >= 3:
        raise DomainError("c3 requires t0 >= 3")
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.c3(m, m.num(t0)), c)


def _check_eta_k(eta, t0, kk) -> None:
    e, t, kv = to_mpf(eta), to_mpf(t0), to_mpf(kk)
    if not e > 0:
        raise DomainError("eta must be positive")
    if not kv >= 1:
        raise DomainError("k must be at least 1")
    if not t >= 3:
        raise DomainError("t0 must be at least 3")
    if not e / kv < t:
        raise DomainError("requires eta/k < t0")


def c_backlund(sigma1, t0, kk, eta, ctx: PrecisionContext | None = None) -> CertifiedReal:
    _check_eta_k(eta, t0, kk)
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.c_backlund(m, m.num(sigma1), m.num(t0), m.num(kk), m.num(eta)), c)


def v_factor(kappa, sigma1, t0, eta, ctx: PrecisionContext | None = None) -> CertifiedReal:
    positive("kappa", kappa)
    if not 1 + to_mpf(kappa) <= to_mpf(sigma1) <= 2:
        raise DomainError("requires 1 + kappa <= sigma1 <= 2")
    _check_eta_k(eta, t0, 2)
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.v_factor(m, m.num(kappa), m.num(sigma1), m.num(t0), m.num(eta)), c)


@dataclass(frozen=True)
class StripZetaBound:
    """|zeta| <= main log t + const on the strip next to the 1-line."""

    main: CertifiedReal
    const: CertifiedReal


def c0_strip(W, sigma1, t0, eta, ctx: PrecisionContext | None = None) -> StripZetaBound:
    positive("W", W)
    t, e = to_mpf(t0), to_mpf(eta)
    if not t >= 3:
        raise DomainError("t0 must be at least 3")
    if not (2 / t <= e <= 1 - 1 / t):
        raise DomainError("eta must lie in [2/t0, 1 - 1/t0]")
    c, m = backend_for(ctx)
    with c.working():
        main, const = k.c0_strip(m, m.num(W), m.num(sigma1), m.num(t0), m.num(eta))
        return StripZetaBound(certify(m, main, c), certify(m, const, c))


def q_rh(p: RhParams, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """|zeta'/zeta| <= Q log t for sigma >= 1 + eps - alpha0/2, t0 <= t <= T - 1/2, assuming RH(T)."""
    c, m = backend_for(ctx)
    with c.working():
        branches, margins, extras = k.q_rh_terms(
            m, m.num(p.epsilon), m.num(p.alpha0), m.num(p.sigma1), m.num(p.eta), m.num(p.t0)
        )
        region = Region("half_plane", p.sigma0, t_lo=p.t0, t_hi=to_mpf(p.T) - mp.mpf(1) / 2)
        return build(m, c, branches, margins, region, extras=extras)


def _w_from_inv(inv_w: CertifiedReal):
    if inv_w.mid <= 0:
        return mp.inf
    return 1 / inv_w.mid


def _exact_d(d) -> dict:
    r = exact_rational(d)
    return {} if r is None else {"d_hi": 1 / CONSTANTS.W0 - r}


def q_h(p: HParams, ctx: PrecisionContext | None = None):
    """Returns (W, bound): |zeta'/zeta| <= Q log t for sigma >= 1 - 1/(W log t), t >= t0."""
    c, m = backend_for(ctx)
    with c.working():
        branches, margins, extras = k.q_h_terms(
            m, m.num(p.d), m.num(p.beta), m.num(p.epsilon1), m.num(p.sigma1), m.num(p.eta), m.num(p.t0)
        )
        W = _w_from_inv(certify(m, extras["inv_W"], c))
        region = Region("zero_free", W, t_lo=p.t0)
        return W, build(m, c, branches, margins, region, extras=extras, exact=_exact_d(p.d))


def q_one(d, epsilon1, sigma1, eta, t0=CONSTANTS.H, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """The sigma >= 1 constant for t >= t0 >= H, with beta at its floor."""
    HParams(d, "0.5", epsilon1, sigma1, eta, t0)  # shared hard checks
    c, m = backend_for(ctx)
    with c.working():
        branches, margins, extras = k.q_one_terms(
            m, m.num(d), m.num(epsilon1), m.num(sigma1), m.num(eta), m.num(t0)
        )
        region = Region("half_plane", 1, t_lo=t0)
        return build(m, c, branches, margins, region, extras=extras, exact=_exact_d(d))


def beta_for_w(W, d, epsilon1, t0=CONSTANTS.H, ctx: PrecisionContext | None = None) -> CertifiedReal:
    """The beta that produces a given W."""
    positive("W", W)
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.beta_for_w(m, m.num(W), m.num(d), m.num(epsilon1), m.num(t0)), c)


def beta_floor(epsilon1, t0=CONSTANTS.H, ctx: PrecisionContext | None = None) -> CertifiedReal:
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.beta_floor(m, m.num(epsilon1), m.num(t0)), c)
