"""Bound formulas written against an arithmetic backend ``m``.

Each ``*_terms`` function returns ``(branches, margins, extras)``: the
candidate constants whose maximum is the bound, the side-condition margins
(non-negative means satisfied) and intermediate quantities worth reporting.
The same code runs on floats for the optimizer and on intervals for
certified evaluation.
"""
from __future__ import annotations

from fractions import Fraction

from ..numerics import CONSTANTS as K


def q(m, num, den=1):
    return m.num(Fraction(num, den))


def pw(m, x, y):
    """x**y for x > 0."""
    return m.exp(y * m.log(x))


def a0(m, sigma, Q0, t):
    L = m.log(t)
    sq = sigma + Q0
    return sq / (2 * t * t * L) + m.pi / (2 * L) + m.pi * sq * sq / (4 * t * L * L)


def a1(m, sigma, Q0, t):
    return (sigma + Q0) / t


def c_backlund(m, s1, t0, k, eta):
    kt = k * t0
    c1 = m.sqrt(s1 * s1 / (kt * kt) + 1)
    c2 = c1 * m.sqrt((s1 + 1) ** 2 / (kt * kt) + 1)
    return (
        m.log(1 / eta + 1 / kt)
        + m.euler
        + eta**4 / (64 * kt**4)
        + (12 + (c1 - 1 / kt) * eta * eta) / (12 * kt)
        + c2 * eta * eta / 24
    )


def v_factor(m, kappa, s1, t0, eta):
    L = m.log(t0)
    first = pw(m, m.exp(m.euler * kappa) / (kappa * L), q(m, 3, 4))
    second = pw(m, 1 + (m.log(m.num(2)) + c_backlund(m, s1, t0, 2, eta)) / L, q(m, 1, 4))
    return first * second


def c3(m, t0):
    return m.num(K.one_line_23) * m.sqrt(1 + 9 / (t0 * t0)) * pw(m, 1 + a0(m, m.num(2), m.num(1), t0), q(m, 2, 3))


def c0_strip(m, W, s1, t0, eta):
    main = m.exp(1 / W)
    inner = (
        m.log(eta + 1 / t0)
        + m.euler
        + 1 / (12 * eta * eta)
        + (1 / (6 * eta * eta) + 1 / eta + 1) / t0
        + (16 * (s1 * s1 + 2 * s1 - 1) + 3) / (192 * eta * eta * t0 * t0)
    )
    return main, main * inner


def b_t0(m, t0):
    """1/e up to e^e, log log t0 / log t0 beyond (their maximum over t >= t0)."""
    ee = m.exp(m.e)
    small = 1 / m.e
    L = m.log(t0)
    if m.upper(t0) <= m.lower(ee):
        return small
    if m.lower(t0) >= m.upper(ee):
        return m.log(L) / L
    return m.max(small, m.log(L) / L)


def half_line_threshold(m, sigma, t0):
    """Right-hand side of the t^(1/6) log t threshold conditions."""
    return m.zeta_real(sigma) / (m.num(K.hpy_half_line) * pw(m, 1 + a1(m, sigma, m.num(K.q0_half_line), t0), q(m, 1, 6)))


def _a3_core(m, sr, x, t0, v):
    Q0 = m.num(K.q0_half_line)
    L = m.log(t0)
    return (
        m.num(K.hpy_half_line)
        * (1 + a0(m, sr, Q0, t0))
        * pw(m, 1 + a1(m, sr, Q0, t0), q(m, 7, 6))
        * pw(m, x, q(m, 1, 6))
        * (1 + m.log(x) / L)
        * v
    )


def a3_rh(m, eps, s1, eta, t0):
    r = q(m, 1, 2)
    return _a3_core(m, 1 + eps + r, 1 + r / t0, t0, v_factor(m, eps, s1, t0, eta))


def a3_h(m, d, s1, eta, t0):
    L = m.log(t0)
    sr = q(m, 3, 2) + 2 * d / L
    x = 1 + 1 / (2 * t0) + d / (t0 * L)
    return _a3_core(m, sr, x, t0, v_factor(m, d / L, s1, t0, eta))


def q_rh_terms(m, eps, alpha0, s1, eta, t0):
    L = m.log(t0)
    A3 = a3_rh(m, eps, s1, eta, t0)
    B = b_t0(m, t0)
    b1 = 4 / (1 - alpha0) ** 2 * (q(m, 1, 6) + 2 * B + m.log(A3) / L)
    b2 = 1 / ((eps + alpha0 / 2) * L)
    sr = q(m, 3, 2) + eps
    margins = {
        "tcond_rh1": pw(m, t0, q(m, 1, 6)) * L - half_line_threshold(m, sr, t0),
        "sigma1_lo": s1 - (1 + eps),
        "sigma1_hi": 2 - s1,
        "eta_hi": 2 * t0 - eta,
        "t0_lo": t0 - m.e - q(m, 1, 2),
    }
    return (b1, b2), margins, {"A3": A3, "B_t0": B}


def a_eps(m, e1, t0):
    L = m.log(t0)
    return 1 + m.log(1 + e1 / L) / L


def beta_floor(m, e1, t0):
    return 1 / (1 + 1 / a_eps(m, e1, t0))


def beta_for_w(m, W, d, e1, t0):
    """beta giving the requested W with the other parameters fixed."""
    ae = a_eps(m, e1, t0)
    return (1 / W + d) / (d * (1 + 1 / ae))


def q_h_terms(m, d, beta, e1, s1, eta, t0, one: bool = False):
    L = m.log(t0)
    ae = a_eps(m, e1, t0)
    inv_w = d * beta * (1 + 1 / ae) - d
    A3 = a3_h(m, d, s1, eta, t0)
    l1 = 16 * beta / (1 - beta) / (1 - 8 * d / (2 * d + L)) ** 2
    l2 = (1 + beta) / (d * (1 - beta))
    b1 = l1 * (q(m, 1, 6) + 2 * m.log(L) / L + m.log(A3) / L) + l2
    b2 = 1 / (2 * d) if one else 1 / (d * beta * (1 + 1 / ae) + d)
    sr = q(m, 3, 2) + 2 * d / L
    margins = {
        "eps1_lo": e1 - 2 * d / L,
        "eps1_hi": q(m, 1, 2) - e1,
        # the pinned beta meets its floor with equality
        "beta_floor": m.num(0) if one else beta - 1 / (1 + 1 / ae),
        "sigma1_lo": s1 - (1 + d / L),
        "sigma1_hi": 2 - s1,
        "eta_hi": 2 * t0 - eta,
        "d_hi": 1 / m.num(K.W0) - d,
        "d_lt_log_t0_over_6": L / 6 - d,
        "t0_lo": t0 - m.num(K.H),
        "tcond_not_rh1": pw(m, t0, q(m, 1, 6)) * L - half_line_threshold(m, sr, t0),
    }
    if not one:
        margins["w_gt_w0"] = 1 / m.num(K.W0) - inv_w
    return (b1, b2), margins, {"inv_W": inv_w, "A3": A3, "lambda1": l1, "lambda2": l2}


def q_one_terms(m, d, e1, s1, eta, t0):
    beta = beta_floor(m, e1, t0)
    branches, margins, extras = q_h_terms(m, d, beta, e1, s1, eta, t0, one=True)
    extras["beta"] = beta
    return branches, margins, extras


def ladder_sum(m, entries) -> object:
    """sum_{j<J} Q_j (1/W_j - 1/W_{j+1}) + Q_J / W_J; zero for an empty ladder."""
    if not entries:
        return m.num(0)
    ws = [m.num(w) for w, _ in entries]
    qs = [m.num(v) for _, v in entries]
    total = qs[-1] / ws[-1]
    for j in range(len(ws) - 1):
        total = total + qs[j] * (1 / ws[j] - 1 / ws[j + 1])
    return total


def y0_terms(m, d1, s1, eta, t0, S):
    L = m.log(t0)
    b1 = 1 / d1 + 1 / L
    b2 = v_factor(m, d1 / L, s1, t0, eta) * m.exp(S + m.num(K.sigma_ge_1_logderiv) * d1)
    margins = {
        "t0_lo": t0 - 13,
        "sigma1_lo": s1 - (1 + d1 / L),
        "sigma1_hi": 2 - s1,
        "eta_hi": 2 * t0 - eta,
    }
    return (b1, b2), margins, {"ladder_sum": S}


def yprime0_terms(m, d1, t0, S):
    L = m.log(t0)
    c = pw(m, c3(m, t0), q(m, 1, 4))
    b1 = c * pw(m, 1 / d1 + 1 / L, q(m, 3, 4))
    b2 = c * m.exp(S + m.num(K.sigma_ge_1_logderiv) * d1) * pw(m, m.exp(m.euler * d1 / L) / d1, q(m, 3, 4))
    return (b1, b2), {"t0_lo": t0 - 13}, {"ladder_sum": S, "c3_quarter": c}


def c0_terms(m, W, s1, t0, eta):
    main, const = c0_strip(m, W, s1, t0, eta)
    margins = {"eta_lo": eta - 2 / t0, "eta_hi": 1 - 1 / t0 - eta, "t0_lo": t0 - 3}
    return (const,), margins, {"main": main}


def plp3(m, k1, k2, k3, k4, Q0, delta, sigma, t, t0):
    A0 = a0(m, 1 + delta, Q0, t0)
    A1 = a1(m, 1 + delta, Q0, t0)
    half = q(m, 1, 2)
    width = half + delta
    e_hi = (sigma - half) / width
    e_lo = (1 + delta - sigma) / width
    val = (
        pw(m, k4, e_hi)
        * pw(m, 1 + A0, k3)
        * pw(m, m.log(t), k3)
        * (1 + A1)
        * pw(m, k1 * pw(m, 1 + A1, k2) * pw(m, t, k2), e_lo)
    )
    threshold = pw(m, k4 / (k1 * pw(m, 1 + A1, k2)), 1 / k2)
    return val, {"tcond0": t - threshold, "t0_lo": t0 - m.e, "t_ge_t0": t - t0}


def plp_cor(m, delta, t0, t):
    Q0 = m.num(K.q0_half_line)
    A1 = a1(m, 1 + delta, Q0, t0)
    coeff = m.num(K.hpy_half_line) * (1 + a0(m, 1 + delta, Q0, t0)) * pw(m, 1 + A1, q(m, 7, 6))
    margins = {
        "tcond": pw(m, t, q(m, 1, 6)) * m.log(t) - half_line_threshold(m, 1 + delta, t0),
        "t0_lo": t0 - m.e,
        "t_ge_t0": t - t0,
    }
    return coeff, margins
