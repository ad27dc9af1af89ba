"""Certified evaluation of zeta(s) and zeta'(s) for Re s > 0.

Euler-Maclaurin summation of order p with truncation point N:

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{j<=p} B_2j/(2j)! (s)_{2j-1} N^(-s-2j+1) + R,

    |R| <= |(s)_2p| |B_2p| / ((2p)! (sigma+2p-1) N^(sigma+2p-1)),

where (s)_k is the rising factorial.  Differentiating term by term gives the
same shape for zeta'.  All arithmetic is done in mpmath ``iv``; the remainder
bound is added as a disc, so every returned enclosure is rigorous.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import bernfrac, iv, mp, mpf

from .errors import (
    BudgetError,
    DomainError,
    NonConvergenceError,
    PoleError,
    ZeroCrossingError,
)
from .numerics import DEFAULT_CONTEXT, CertifiedReal, IvBackend, PrecisionContext, _ivbounds

N_CAP = 10**6
ORDER_MAX = 60
REANCHOR = 64


@dataclass(frozen=True)
class CertifiedComplex:
    re: CertifiedReal
    im: CertifiedReal

    @classmethod
    def from_interval(cls, z, ctx: PrecisionContext) -> "CertifiedComplex":
        return cls(CertifiedReal.from_interval(z.real, ctx), CertifiedReal.from_interval(z.imag, ctx))

    def to_interval(self):
        return iv.mpc(self.re.to_interval(), self.im.to_interval())

    @property
    def mid(self):
        return mp.mpc(self.re.mid, self.im.mid)

    @property
    def rad(self) -> mpf:
        return max(self.re.rad, self.im.rad)

    def modulus(self, ctx: PrecisionContext | None = None) -> "tuple[mpf, mpf]":
        """Lower and upper bounds for |z|, computed at the precision of ``ctx``
        (default: enough bits to hold the stored midpoints)."""
        bits = ctx.prec_bits if ctx is not None else max(iv.prec, _bits(self.re.mid), _bits(self.im.mid))
        saved = iv.prec
        iv.prec = bits
        try:
            return _ivbounds(abs(self.to_interval()))
        finally:
            iv.prec = saved

    def contains(self, z) -> bool:
        z = mp.mpc(z)
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def __str__(self) -> str:
        return f"({self.re}) + ({self.im})i"


def _bits(x: mpf) -> int:
    return int(mpf(x)._mpf_[3]) + 8


@dataclass(frozen=True)
class EMParams:
    N: int
    order: int


# ---------------------------------------------------------------------------
# parameter choice (floating point; the rigorous bound is recomputed later)
# ---------------------------------------------------------------------------


def _log_bern_over_fact(p: int) -> float:
    # |B_2p|/(2p)! = 2 zeta(2p) / (2 pi)^2p
    z = sum(k ** (-2.0 * p) for k in range(1, 40))
    return math.log(2 * z) - 2 * p * math.log(2 * math.pi)


def choose_params(sigma_lo: float, sigma_hi: float, t_abs: float, target: float, deriv: bool = False) -> EMParams:
    """Cheapest (N, p) whose remainder bound is below ``target``."""
    log_target = math.log(target)
    best: Optional[tuple[float, int, int]] = None
    log_poch = 0.0
    inv_sum = 0.0
    for p in range(1, ORDER_MAX + 1):
        for j in (2 * p - 2, 2 * p - 1):
            r = math.hypot(sigma_hi + j, t_abs)
            log_poch += math.log(r)
            inv_sum += 1 / max(math.hypot(sigma_lo + j, t_abs), 1e-300)
        a = sigma_lo + 2 * p - 1
        log_k = log_poch + _log_bern_over_fact(p) - math.log(a)
        log_n = (log_k - log_target) / a
        if deriv:
            for _ in range(2):
                log_n = (log_k + math.log(inv_sum + max(log_n, 0.0) + 1 / a + 1) - log_target) / a
        n = max(2, math.ceil(math.exp(min(log_n, 50.0))) + 1)
        cost = n + p
        if best is None or cost < best[0]:
            best = (cost, n, p)
    assert best is not None
    _, n, p = best
    if n > N_CAP:
        raise NonConvergenceError(f"truncation point {n} exceeds cap {N_CAP}")
    return EMParams(n, p)


# ---------------------------------------------------------------------------
# interval kernel
# ---------------------------------------------------------------------------

_LOG_CACHE: dict[int, list] = {}
_BERN_CACHE: dict[tuple[int, int], object] = {}


def _logs(n_max: int) -> list:
    """[log 1, ..., log(n_max - 1)] at the current iv precision."""
    cache = _LOG_CACHE.setdefault(iv.prec, [iv.mpf(0)])
    while len(cache) < n_max:
        cache.append(iv.log(len(cache) + 1))
    return cache


def _bern_coeff(p: int):
    """B_2j/(2j)! for j = 1..p at the current precision."""
    key = (iv.prec, p)
    if key not in _BERN_CACHE:
        out = []
        fact = 1
        for j in range(1, p + 1):
            fact *= (2 * j - 1) * (2 * j)
            b = bernfrac(2 * j)
            out.append(iv.mpf(b[0]) / (b[1] * fact))
        _BERN_CACHE[key] = out
    return _BERN_CACHE[key]


def _abs_upper(z) -> mpf:
    return _ivbounds(abs(z))[1]


def _corrections(s, sig_lo: mpf, N: int, p: int, deriv: bool):
    """Everything except the partial sum, plus the remainder bound."""
    logN = _logs(N + 1)[N - 1]
    Nms = iv.exp(-s * logN)
    s1 = s - 1
    NN = iv.mpf(N)
    if deriv:
        val = -logN * Nms / 2 - logN * NN * Nms / s1 - NN * Nms / (s1 * s1)
    else:
        val = NN * Nms / s1 + Nms / 2
    coeffs = _bern_coeff(p)
    P, dP = s, iv.mpf(1)
    Npow = NN
    for j in range(1, p + 1):
        # P = (s)_{2j-1}
        if deriv:
            val += coeffs[j - 1] * Nms / Npow * (dP - logN * P)
        else:
            val += coeffs[j - 1] * Nms / Npow * P
        k = 2 * j - 1
        dP, P = dP * (s + k) + P, P * (s + k)
        if j < p:
            dP, P = dP * (s + k + 1) + P, P * (s + k + 1)
            Npow = Npow * NN * NN
    # the last pass leaves P = (s)_{2p}
    b = bernfrac(2 * p)
    bern_over_fact = iv.mpf(abs(b[0])) / b[1] / iv.factorial(2 * p)
    a = iv.mpf(sig_lo) + 2 * p - 1
    J = bern_over_fact / (a * iv.exp(a * logN))
    if deriv:
        dJ = bern_over_fact * iv.exp(-a * logN) * (logN / a + 1 / (a * a))
        tail = iv.mpf(_abs_upper(dP)) * J + iv.mpf(_abs_upper(P)) * dJ
    else:
        tail = iv.mpf(_abs_upper(P)) * J
    return val, _ivbounds(tail)[1]


def _disc(z, r: mpf):
    box = iv.mpf([-r, r])
    if isinstance(z, iv.mpc):
        return z + iv.mpc(box, box)
    return z + box


def _em_interval(sig, t, N: int, p: int, deriv: bool):
    """Interval enclosure of zeta (or zeta') on the box sig + i t."""
    logs = _logs(N)
    real = _ivbounds(t) == (0, 0)
    s = sig if real else iv.mpc(sig, t)
    acc = iv.mpf(1) if not deriv else iv.mpf(0)
    if real:
        for n in range(2, N):
            term = iv.exp(-sig * logs[n - 1])
            acc += -logs[n - 1] * term if deriv else term
    else:
        acc = iv.mpc(acc, 0)
        for n in range(2, N):
            term = iv.exp(-s * logs[n - 1])
            acc += -logs[n - 1] * term if deriv else term
    corr, tail = _corrections(s, _ivbounds(sig)[0], N, p, deriv)
    return _disc(acc + corr, tail)


def _parse_point(s, ctx: PrecisionContext):
    """(sigma, t) as iv intervals from complex, pair or mpc input."""
    iv_num = IvBackend(ctx).num
    if isinstance(s, tuple):
        sig, t = s
    elif isinstance(s, iv.mpc):
        sig, t = s.real, s.imag
    elif isinstance(s, (int, Fraction, str, iv.mpf)):
        sig, t = s, 0
    else:
        z = mp.mpc(s) if not isinstance(s, complex) else s
        sig, t = z.real, z.imag
    return iv_num(sig), iv_num(t)


def _check_domain(sig, t) -> None:
    slo, shi = _ivbounds(sig)
    tlo, thi = _ivbounds(t)
    if not slo > 0:
        raise DomainError(f"requires Re s > 0, got sigma >= {mp.nstr(slo, 10)}")
    if slo <= 1 <= shi and tlo <= 0 <= thi:
        raise PoleError("s = 1 is a pole of zeta")


def _default_target(ctx: PrecisionContext) -> mpf:
    return mpf(10) ** (-(ctx.working_digits // 2))


def _evaluate(s, ctx, target, deriv, order=None):
    with ctx.working():
        sig, t = _parse_point(s, ctx)
        _check_domain(sig, t)
        tgt = float(target if target is not None else _default_target(ctx))
        slo, shi = (float(x) for x in _ivbounds(sig))
        tabs = float(max(abs(x) for x in _ivbounds(t)))
        prm = choose_params(slo, shi, tabs, tgt, deriv)
        if order is not None:
            prm = EMParams(prm.N, order)
        z = _em_interval(sig, t, prm.N, prm.order, deriv)
        if isinstance(z, iv.mpc):
            return CertifiedComplex.from_interval(z, ctx)
        return CertifiedComplex(CertifiedReal.from_interval(z, ctx), CertifiedReal.exact(0))


def em_zeta(s, ctx: PrecisionContext = DEFAULT_CONTEXT, target=None, order: Optional[int] = None) -> CertifiedComplex:
    """Enclosure of zeta(s); ``s`` may be complex, an mpc or a pair (sigma, t)."""
    return _evaluate(s, ctx, target, False, order)


def em_zeta_deriv(s, ctx: PrecisionContext = DEFAULT_CONTEXT, target=None, order: Optional[int] = None) -> CertifiedComplex:
    """Enclosure of zeta'(s)."""
    return _evaluate(s, ctx, target, True, order)


def em_remainder_bound(s, N: int, order: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> mpf:
    """Upper bound for the remainder R at truncation (N, order)."""
    with ctx.working():
        sig, t = _parse_point(s, ctx)
        _check_domain(sig, t)
        real = _ivbounds(t) == (0, 0)
        z = sig if real else iv.mpc(sig, t)
        return _corrections(z, _ivbounds(sig)[0], N, order, False)[1]


# ---------------------------------------------------------------------------
# vertical-line grids
# ---------------------------------------------------------------------------


def em_zeta_grid(sigma, t_start, step, count: int, ctx: PrecisionContext = DEFAULT_CONTEXT, target=1e-12) -> list[CertifiedComplex]:
    """Enclosures of zeta(sigma + i t_k), t_k = t_start + k step, k < count.

    Partial sums are advanced from node to node by multiplying each term by
    n^(-i step); the recurrence is re-anchored every few nodes to keep the
    intervals narrow.
    """
    if count <= 0:
        return []
    out: list[CertifiedComplex] = []
    with ctx.working():
        num = IvBackend(ctx).num
        sig, t0, h = num(sigma), num(t_start), num(step)
        slo, shi = (float(x) for x in _ivbounds(sig))
        ts = [t0 + k * h for k in range(count)]
        for t in ts:
            _check_domain(sig, t)
        params = [
            choose_params(slo, shi, float(max(abs(x) for x in _ivbounds(t))), float(target))
            for t in ts
        ]
        n_top = max(p.N for p in params)
        logs = _logs(n_top)
        rot = [iv.exp(iv.mpc(0, -h * logs[n - 1])) for n in range(1, n_top)]
        for start in range(0, count, REANCHOR):
            block = range(start, min(start + REANCHOR, count))
            n_blk = max(params[k].N for k in block)
            s0 = iv.mpc(sig, ts[start])
            terms = [iv.exp(-s0 * logs[n - 1]) for n in range(1, n_blk)]
            for k in block:
                N, p = params[k].N, params[k].order
                acc = iv.mpc(0, 0)
                for a in terms[: N - 1]:
                    acc += a
                corr, tail = _corrections(iv.mpc(sig, ts[k]), _ivbounds(sig)[0], N, p, False)
                out.append(CertifiedComplex.from_interval(_disc(acc + corr, tail), ctx))
                if k + 1 in block:
                    terms = [a * r for a, r in zip(terms, rot)]
    return out


@dataclass(frozen=True)
class GridCheck:
    holds: bool
    max_upper: mpf
    argmax: mpf
    nodes: int


def _weighted(mod_lo: mpf, mod_hi: mpf, t, reciprocal: bool, log_power) -> tuple[mpf, mpf]:
    """Bounds for |zeta|^(+-1) / (log t)^w from bounds on |zeta| and a t interval."""
    if reciprocal:
        if not mod_lo > 0:
            return mpf(0), mp.inf
        lo, hi = 1 / mod_hi, 1 / mod_lo
    else:
        lo, hi = mod_lo, mod_hi
    if log_power:
        lt = iv.log(t) ** log_power
        a, b = _ivbounds(lt)
        if not a > 0:
            raise DomainError("log weight requires t > 1")
        lo = _ivbounds(iv.mpf(lo) / b)[0]
        hi = _ivbounds(iv.mpf(hi) / a)[1]
    return lo, hi


def grid_check(sigma, t_lo, t_hi, step, claim, ctx: PrecisionContext = DEFAULT_CONTEXT, *, reciprocal=False, log_power=0, target=1e-12) -> GridCheck:
    """Certify g(t) <= claim at every grid node of [t_lo, t_hi]."""
    with ctx.working():
        num = IvBackend(ctx).num
        span = (num(t_hi) - num(t_lo)) / num(step)
        count = int(mp.floor(_ivbounds(span)[0] + mpf("1e-9"))) + 1
        vals = em_zeta_grid(sigma, t_lo, step, count, ctx, target)
        worst, where = mpf(-1), 0
        for k, z in enumerate(vals):
            t = num(t_lo) + k * num(step)
            lo, hi = z.modulus()
            _, g_hi = _weighted(lo, hi, t, reciprocal, log_power)
            if g_hi > worst:
                worst, where = g_hi, k
        t_arg = mpf(_ivbounds(num(t_lo) + where * num(step))[0])
        return GridCheck(bool(worst <= _ivbounds(num(claim))[0]), worst, t_arg, count)


# ---------------------------------------------------------------------------
# suprema over segments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupResult:
    upper: mpf
    lower: mpf
    argmax: mpf
    nodes: int
    certified: bool
    claim: Optional[mpf] = None
    claim_holds: Optional[bool] = None


def sup_modulus_on_segment(
    sigma,
    t_lo,
    t_hi,
    certified: bool = True,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    *,
    reciprocal: bool = False,
    log_power=0,
    claim=None,
    rel_tol: float = 1e-4,
    max_nodes: int = 200_000,
    piece: float = 0.25,
    grid_points: int = 2001,
) -> SupResult:
    """Bounds for sup of |zeta(sigma+it)|^(+-1) / (log t)^w over t in [t_lo, t_hi].

    In certified mode the segment is bisected; on each piece the value at the
    centre and a bound for |zeta'| over the whole piece give a rigorous upper
    bound.  Subdivision stops once the claim is decided, or once the bracket
    is within ``rel_tol`` when no claim is given.
    """
    with ctx.working():
        num = IvBackend(ctx).num
        sig = num(sigma)
        a0, b0 = mpf(num(t_lo).a), mpf(num(t_hi).b)
        if not a0 < b0:
            raise DomainError("empty segment")
        _check_domain(sig, iv.mpf([a0, b0]))
        if log_power and not a0 > 1:
            raise DomainError("log weight requires t > 1")
        if not certified:
            return _sup_grid(sig, a0, b0, ctx, reciprocal, log_power, grid_points)
        claim_hi = mpf(num(claim).a) if claim is not None else None
        return _sup_bnb(sig, a0, b0, ctx, reciprocal, log_power, claim_hi, rel_tol, max_nodes, piece)


def _sup_grid(sig, a0, b0, ctx, reciprocal, log_power, points) -> SupResult:
    step = (b0 - a0) / (points - 1)
    vals = em_zeta_grid(sig, a0, step, points, ctx, target=1e-10)
    best, where = mpf(-1), a0
    for k, z in enumerate(vals):
        t = a0 + k * step
        m = abs(z.mid)
        g = 1 / m if reciprocal else m
        if log_power:
            g = g / mp.log(t) ** log_power
        if g > best:
            best, where = g, t
    return SupResult(best, best, where, points, False)


def _piece_bounds(sig, a: mpf, b: mpf, reciprocal, log_power):
    c = (a + b) / 2
    h = mp.make_mpf((iv.mpf(b) - iv.mpf(a))._mpi_[1]) / 2
    slo, shi = (float(x) for x in _ivbounds(sig))
    pc = choose_params(slo, shi, float(max(abs(a), abs(b))), 1e-15)
    fc = _em_interval(sig, iv.mpf(c), pc.N, pc.order, False)
    pd = choose_params(slo, shi, float(max(abs(a), abs(b))), 1e-8, deriv=True)
    box = iv.mpf([a, b])
    d = _em_interval(sig, box, pd.N, pd.order, True)
    f_lo, f_hi = _ivbounds(abs(fc))
    dsup = _abs_upper(d)
    spread = iv.mpf(h) * dsup
    z_hi = _ivbounds(iv.mpf(f_hi) + spread)[1]
    z_lo = _ivbounds(iv.mpf(f_lo) - spread)[0]
    g_lo, _ = _weighted(f_lo, f_hi, iv.mpf(c), reciprocal, log_power)
    if reciprocal and not z_lo > 0:
        return c, g_lo, mp.inf, h
    _, g_hi = _weighted(max(z_lo, mpf(0)), z_hi, box, reciprocal, log_power)
    return c, g_lo, g_hi, h


def _sup_bnb(sig, a0, b0, ctx, reciprocal, log_power, claim, rel_tol, max_nodes, piece) -> SupResult:
    n0 = max(1, int(mp.ceil((b0 - a0) / piece)))
    width = (b0 - a0) / n0
    heap: list = []
    best_lo, argmax = mpf(-1), a0
    nodes = 0

    def push(a, b):
        nonlocal best_lo, argmax, nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetError(f"segment bisection exceeded {max_nodes} nodes")
        c, g_lo, g_hi, h = _piece_bounds(sig, a, b, reciprocal, log_power)
        if g_lo > best_lo:
            best_lo, argmax = g_lo, c
        if reciprocal and g_hi == mp.inf and h < mpf("1e-12"):
            raise ZeroCrossingError(f"zeta may vanish near t = {mp.nstr(c, 15)}")
        heapq.heappush(heap, (-g_hi, a, b))

    for i in range(n0):
        a = a0 + i * width
        b = b0 if i == n0 - 1 else a0 + (i + 1) * width
        push(a, b)
    while True:
        neg_hi, a, b = heap[0]
        top = -neg_hi
        if claim is not None:
            if top <= claim:
                return SupResult(top, best_lo, argmax, nodes, True, claim, True)
            if best_lo > claim:
                return SupResult(top, best_lo, argmax, nodes, True, claim, False)
        elif top != mp.inf and top - best_lo <= rel_tol * best_lo:
            return SupResult(top, best_lo, argmax, nodes, True)
        heapq.heappop(heap)
        c = (a + b) / 2
        push(a, c)
        push(c, b)


def abs_enclosure(values: Sequence[CertifiedComplex]) -> list[tuple[mpf, mpf]]:
    return [v.modulus() for v in values]
