"""Certified generation of the Laurent-Stieltjes constants.

gamma_n is the limit of sum_{k<=m} f(k) - (log m)^(n+1)/(n+1) with
f(x) = (log x)^n / x.  Euler-Maclaurin summation from m to infinity gives
the limit up to a remainder bounded in closed form, since every derivative of
f has the shape x^(-k-1) P_k(log x) with integer polynomials P_k.

Run ``python -m zetabounds.stieltjes`` to regenerate the packaged table.
"""
from __future__ import annotations

import argparse
import math
from pathlib import Path

from mpmath import bernfrac, iv, mp, mpf

from .numerics import PrecisionContext, StieltjesTable


def derivative_polys(n: int, order: int) -> list[list[int]]:
    """Coefficient lists of P_0..P_order with f^(k)(x) = x^(-k-1) P_k(log x)."""
    polys = [[0] * n + [1]]
    for k in range(order):
        p = polys[-1]
        nxt = [-(k + 1) * c for c in p]
        for i in range(1, len(p)):
            nxt[i - 1] += i * p[i]
        polys.append(nxt)
    return polys


def _poly_at(coeffs: list[int], x):
    acc = iv.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _upper_incomplete_gamma(i: int, y):
    """Gamma(i+1, y) = i! e^-y sum_{j<=i} y^j/j!, for integer i >= 0."""
    term = iv.mpf(1)
    total = iv.mpf(1)
    for j in range(1, i + 1):
        term = term * y / j
        total += term
    return math.factorial(i) * iv.exp(-y) * total


def stieltjes_enclosure(n: int, digits: int = 130, m: int = 1000, p: int = 40):
    """Interval enclosure of gamma_n."""
    ctx = PrecisionContext(digits, "outward")
    with ctx.working():
        polys = derivative_polys(n, 2 * p)
        s = iv.mpf(0)
        for k in range(1, m + 1):
            s += iv.log(k) ** n / k
        M = iv.mpf(m)
        L = iv.log(M)
        val = s - L ** (n + 1) / (n + 1) - L**n / (2 * M)
        fact = iv.mpf(1)
        for j in range(1, p + 1):
            fact = fact * (2 * j - 1) * (2 * j)
            b = bernfrac(2 * j)
            c = iv.mpf(b[0]) / b[1] / fact
            k = 2 * j - 1
            val -= c * M ** (-k - 1) * _poly_at(polys[k], L)
        # remainder: |B_2p|/(2p)! * int_m^inf |f^(2p)|
        b = bernfrac(2 * p)
        y = 2 * p * L
        integral = iv.mpf(0)
        for i, c in enumerate(polys[2 * p]):
            if c:
                integral += abs(c) * _upper_incomplete_gamma(i, y) / iv.mpf(2 * p) ** (i + 1)
        tail = iv.mpf(abs(b[0])) / b[1] / fact * integral
        tail_hi = mp.make_mpf(tail._mpi_[1])
        return val + iv.mpf([-tail_hi, tail_hi])


def build_table(n_max: int = 20, digits: int = 130, stored_digits: int = 118) -> StieltjesTable:
    records = []
    for n in range(n_max + 1):
        x = stieltjes_enclosure(n, digits)
        with mp.workdps(digits):
            lo, hi = mp.make_mpf(x._mpi_[0]), mp.make_mpf(x._mpi_[1])
            mid = mp.nstr((lo + hi) / 2, stored_digits, strip_zeros=False, min_fixed=1, max_fixed=0)
            # distance to the rounded decimal midpoint, rounded up to one digit
            err = max(hi - mpf(mid), mpf(mid) - lo)
            e = int(mp.floor(mp.log10(err)))
            lead = int(mp.ceil(err / mpf(10) ** e))
            if lead >= 10:
                lead, e = 1, e + 1
            rad = f"{lead}e{e}"
            assert mpf(rad) >= err
        records.append((n, mid, rad))
    return StieltjesTable(tuple(records))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description="regenerate the Stieltjes constants table")
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--digits", type=int, default=130)
    ap.add_argument(
        "--out", type=Path, default=Path(__file__).with_name("data") / "stieltjes.txt"
    )
    args = ap.parse_args(argv)
    args.out.write_text(build_table(args.n_max, args.digits).to_text())


if __name__ == "__main__":
    main()
