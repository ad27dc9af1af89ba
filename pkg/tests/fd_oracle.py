"""Central-difference check of em_zeta_deriv with a rigorous truncation term.

(f(s+h) - f(s-h))/2h - f'(s) = sum_k f^(2k+1)(s) h^2k / (2k+1)!, and Cauchy's
estimate |f^(n)(s)| <= n! M / r^n on a disc of radius r gives the bound
M/r * q^2/(1 - q^2), q = h/r.  M is an upper bound for |zeta| over a square
containing the disc.
"""
import random
from fractions import Fraction

from mpmath import iv, mpf

from zetabounds.zeta_eval import em_zeta, em_zeta_deriv

H = Fraction(1, 10**10)
R = Fraction(1, 4)


def _q(x):
    return iv.mpf(x.numerator) / x.denominator


def _m(x):
    return mpf(x.numerator) / x.denominator


def sample_points(n=20, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        s = Fraction(rng.randint(300, 3000), 1000)
        t = Fraction(rng.randint(-40000, 40000), 1000)
        if abs(s - 1) <= R + Fraction(1, 10) and abs(t) <= R + Fraction(1, 10):
            continue
        out.append((s, t))
    return out


def fd_check(s, t, ctx):
    """Returns (discrepancy, allowance) maximised over real and imaginary parts."""
    zp, zm = em_zeta((s + H, t), ctx), em_zeta((s - H, t), ctx)
    d = em_zeta_deriv((s, t), ctx)
    with ctx.working():
        box = (iv.mpf([_q(s - R).a, _q(s + R).b]), iv.mpf([_q(t - R).a, _q(t + R).b]))
        M = em_zeta(box, ctx, target=1e-3).modulus(ctx)[1]
        q = _m(H) / _m(R)
        trunc = M / _m(R) * q * q / (1 - q * q)
        worst = (mpf(0), mpf(1))
        for part in ("re", "im"):
            a, b, dd = getattr(zp, part), getattr(zm, part), getattr(d, part)
            fd = (a.mid - b.mid) / (2 * _m(H))
            allow = (a.rad + b.rad) / (2 * _m(H)) + dd.rad + trunc
            gap = abs(fd - dd.mid)
            if gap / allow > worst[0] / worst[1]:
                worst = (gap, allow)
        return worst
