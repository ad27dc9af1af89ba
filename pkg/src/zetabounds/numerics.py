"""Precision control, certified reals and the real-argument helpers.

Every formula in :mod:`zetabounds.bounds` is written once against an
*arithmetic backend* (see :func:`backend`).  Three backends exist:

``float``
    plain doubles, used by the optimizer's inner loop;
``mp``
    mpmath at the working precision, round-to-nearest;
``iv``
    mpmath interval arithmetic at the working precision, outward rounding.

The ``iv`` backend is what makes a :class:`CertifiedReal` certified.
"""
from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterator

from mpmath import iv, mp, mpf

from .errors import DomainError, IndexOutOfRangeError, PrecisionUnreachableError

PRECISION_ENV = "ZETABOUNDS_PRECISION"
MIN_DIGITS = 30
ROUNDING_POLICIES = ("nearest", "outward")


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits) and rounding policy."""

    working_digits: int = 60
    rounding_policy: str = "nearest"

    def __post_init__(self) -> None:
        if int(self.working_digits) != self.working_digits or self.working_digits < MIN_DIGITS:
            raise DomainError(
                f"working_digits must be an integer >= {MIN_DIGITS}, got {self.working_digits!r}"
            )
        if self.rounding_policy not in ROUNDING_POLICIES:
            raise DomainError(f"unknown rounding policy {self.rounding_policy!r}")

    @classmethod
    def from_env(cls, rounding_policy: str = "nearest") -> "PrecisionContext":
        digits = os.environ.get(PRECISION_ENV)
        if digits is None:
            return cls(rounding_policy=rounding_policy)
        try:
            return cls(int(digits), rounding_policy)
        except ValueError as exc:
            raise DomainError(f"{PRECISION_ENV}={digits!r} is not an integer") from exc

    @property
    def outward(self) -> bool:
        return self.rounding_policy == "outward"

    def with_rounding(self, policy: str) -> "PrecisionContext":
        return replace(self, rounding_policy=policy)

    def doubled(self) -> "PrecisionContext":
        return replace(self, working_digits=2 * self.working_digits)

    @property
    def prec_bits(self) -> int:
        return int(math.ceil(self.working_digits * math.log2(10))) + 8

    @contextmanager
    def working(self) -> Iterator["PrecisionContext"]:
        """Set both mpmath contexts to this precision for the duration."""
        saved = mp.prec, iv.prec
        mp.prec = iv.prec = self.prec_bits
        try:
            yield self
        finally:
            mp.prec, iv.prec = saved

    def slack(self, magnitude=1) -> mpf:
        """Rounding allowance added to every radius produced at this precision.

        It is large enough that an enclosure recomputed at twice the
        precision nests inside the original one.
        """
        with self.working():
            return mpf(10) ** (2 - self.working_digits) * max(mpf(1), abs(mpf(magnitude)))


DEFAULT_CONTEXT = PrecisionContext()
VERIFY_CONTEXT = PrecisionContext(rounding_policy="outward")


def _ivbounds(x) -> tuple[mpf, mpf]:
    lo, hi = x._mpi_
    return mp.make_mpf(lo), mp.make_mpf(hi)


@dataclass(frozen=True)
class CertifiedReal:
    """Midpoint-radius enclosure ``[mid - rad, mid + rad]``."""

    mid: mpf
    rad: mpf = field(default_factory=lambda: mpf(0))

    def __post_init__(self) -> None:
        object.__setattr__(self, "mid", mpf(self.mid))
        object.__setattr__(self, "rad", mpf(self.rad))
        if not self.rad >= 0:
            raise DomainError(f"radius must be non-negative, got {self.rad}")

    @classmethod
    def exact(cls, value) -> "CertifiedReal":
        return cls(mpf(value), mpf(0))

    @classmethod
    def from_interval(cls, x, ctx: PrecisionContext) -> "CertifiedReal":
        """Convert an ``iv`` interval to midpoint-radius form, rounding outward."""
        with ctx.working():
            lo, hi = _ivbounds(iv.mpf(x))
            if not (mp.isfinite(lo) and mp.isfinite(hi)):
                raise DomainError("interval is unbounded")
            mid = (lo + hi) / 2
            half = max((iv.mpf(hi) - iv.mpf(mid)).b, (iv.mpf(mid) - iv.mpf(lo)).b)
            rad = (iv.mpf(mp.make_mpf(half._mpi_[1])) + ctx.slack(mid)).b
            return cls(mid, mp.make_mpf(rad._mpi_[1]))

    @classmethod
    def from_value(cls, x, ctx: PrecisionContext) -> "CertifiedReal":
        """Wrap a value from any backend; nearest-mode values get only the slack radius."""
        if isinstance(x, CertifiedReal):
            return x
        if isinstance(x, iv.mpf):
            return cls.from_interval(x, ctx)
        if isinstance(x, Fraction):
            with ctx.working():
                return cls.from_interval(iv.mpf(x.numerator) / x.denominator, ctx)
        with ctx.working():
            v = to_mpf(x)
            return cls(v, ctx.slack(v))

    @property
    def lower(self) -> mpf:
        with _guard(self):
            return mp.make_mpf((iv.mpf(self.mid) - iv.mpf(self.rad))._mpi_[0])

    @property
    def upper(self) -> mpf:
        with _guard(self):
            return mp.make_mpf((iv.mpf(self.mid) + iv.mpf(self.rad))._mpi_[1])

    def to_interval(self):
        return iv.mpf([self.lower, self.upper])

    def contains(self, x) -> bool:
        if isinstance(x, CertifiedReal):
            return self.lower <= x.lower and x.upper <= self.upper
        with mp.workprec(max(mp.prec, int(self.mid._mpf_[3]) + 64)):
            return self.lower <= to_mpf(x) <= self.upper

    __contains__ = contains

    def intersects(self, other: "CertifiedReal") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def __float__(self) -> float:
        return float(self.mid)

    def __str__(self) -> str:
        return f"{mp.nstr(self.mid, 20)} +/- {mp.nstr(self.rad, 3)}"


@contextmanager
def _guard(x: CertifiedReal):
    # iv rounds outward, so a low precision only widens the result; use
    # enough bits that mid +- rad is close to exact
    saved = iv.prec
    bits = 64
    if x.mid and x.rad:
        bits = max(bits, int(x.mid._mpf_[3]) + 32, int(mp.mag(x.mid) - mp.mag(x.rad)) + 64)
    elif x.mid:
        bits = max(bits, int(x.mid._mpf_[3]) + 32)
    iv.prec = max(saved, min(bits, 1 << 16))
    try:
        yield
    finally:
        iv.prec = saved


def to_mpf(x) -> mpf:
    """Exact-decimal conversion used for user-facing parameters."""
    if isinstance(x, CertifiedReal):
        return x.mid
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, float):
        return mpf(repr(x))
    if isinstance(x, iv.mpf):
        lo, hi = _ivbounds(x)
        return (lo + hi) / 2
    return mpf(x)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constants:
    """Imported constants, stored as exact rationals."""

    W0: Fraction = Fraction("5.558691")
    H0: Fraction = Fraction("3000175332800")
    hpy_half_line: Fraction = Fraction("0.618")
    one_line_23: Fraction = Fraction("58.096")
    small_t_half_line: Fraction = Fraction("1.461")
    chirre_recip: Fraction = Fraction("2.079")
    chirre_logderiv: Fraction = Fraction("0.639")
    sigma_ge_1_logderiv: Fraction = Fraction("24.303")
    q0_half_line: Fraction = Fraction("1.31")
    phi2_floor: Fraction = Fraction("0.852")

    @property
    def H(self) -> Fraction:
        return self.H0 - Fraction(1, 2)

    def euler_gamma(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> CertifiedReal:
        with ctx.working():
            return CertifiedReal.from_interval(iv.euler, ctx)


CONSTANTS = Constants()


# ---------------------------------------------------------------------------
# Arithmetic backends
# ---------------------------------------------------------------------------


class FloatBackend:
    """Double precision; fast and uncertified."""

    kind = "float"
    interval = False
    inf = math.inf
    pi = math.pi
    e = math.e
    euler = 0.5772156649015329
    log = staticmethod(math.log)
    exp = staticmethod(math.exp)
    sqrt = staticmethod(math.sqrt)

    @staticmethod
    def num(x) -> float:
        if isinstance(x, CertifiedReal):
            return float(x.mid)
        return float(x)

    @staticmethod
    def max(*xs):
        return max(xs)

    @staticmethod
    def lower(x):
        return float(x)

    upper = lower

    @staticmethod
    def zeta_real(x: float) -> float:
        from scipy.special import zeta

        return float(zeta(x, 1))


class MpBackend:
    """mpmath round-to-nearest at the context precision."""

    kind = "mp"
    interval = False

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx

    inf = mp.inf
    log = staticmethod(mp.log)
    exp = staticmethod(mp.exp)
    sqrt = staticmethod(mp.sqrt)

    @property
    def pi(self):
        return +mp.pi

    @property
    def e(self):
        return +mp.e

    @property
    def euler(self):
        return +mp.euler

    @staticmethod
    def num(x):
        return to_mpf(x)

    @staticmethod
    def max(*xs):
        return max(xs)

    @staticmethod
    def lower(x):
        return mpf(x)

    upper = lower

    def zeta_real(self, x):
        return zeta_real(x, self.ctx).mid


class IvBackend:
    """mpmath interval arithmetic; every result encloses the exact value."""

    kind = "iv"
    interval = True

    def __init__(self, ctx: PrecisionContext):
        self.ctx = ctx

    inf = iv.inf
    log = staticmethod(iv.log)
    exp = staticmethod(iv.exp)
    sqrt = staticmethod(iv.sqrt)

    @property
    def pi(self):
        return +iv.pi

    @property
    def e(self):
        return +iv.e

    @property
    def euler(self):
        return +iv.euler

    @staticmethod
    def num(x):
        if isinstance(x, CertifiedReal):
            return x.to_interval()
        if isinstance(x, iv.mpf):
            return x
        if isinstance(x, Fraction):
            return iv.mpf(x.numerator) / x.denominator
        if isinstance(x, float):
            return iv.mpf(repr(x))
        if isinstance(x, str):
            return iv.mpf(x)
        return iv.mpf(x)

    @staticmethod
    def max(*xs):
        bounds = [_ivbounds(iv.mpf(x)) for x in xs]
        return iv.mpf([max(b[0] for b in bounds), max(b[1] for b in bounds)])

    @staticmethod
    def lower(x):
        return _ivbounds(iv.mpf(x))[0]

    @staticmethod
    def upper(x):
        return _ivbounds(iv.mpf(x))[1]

    def zeta_real(self, x):
        # zeta is decreasing on (1, inf)
        lo, hi = _ivbounds(iv.mpf(x))
        return iv.mpf([zeta_real(hi, self.ctx).lower, zeta_real(lo, self.ctx).upper])


FLOAT = FloatBackend()


def backend(ctx: PrecisionContext):
    """Backend matching the context's rounding policy."""
    return IvBackend(ctx) if ctx.outward else MpBackend(ctx)


# ---------------------------------------------------------------------------
# Stieltjes constants
# ---------------------------------------------------------------------------

STIELTJES_RESOURCE = "stieltjes.txt"


@dataclass(frozen=True)
class StieltjesTable:
    """Enclosures of the Laurent-Stieltjes constants, stored as decimal strings."""

    records: tuple[tuple[int, str, str], ...]

    def __post_init__(self) -> None:
        for i, (n, _, _) in enumerate(self.records):
            if n != i:
                raise DomainError("Stieltjes records must be consecutive from n = 0")

    @property
    def n_max(self) -> int:
        return len(self.records) - 1

    def enclosure(self, n: int) -> CertifiedReal:
        """The stored enclosure at full stored precision."""
        if not 0 <= n <= self.n_max:
            raise IndexOutOfRangeError(f"Stieltjes index {n} outside 0..{self.n_max}")
        _, mid, rad = self.records[n]
        with mp.workprec(_STORE_BITS):
            return CertifiedReal(mpf(mid), mpf(rad))

    def stored_radius(self, n: int) -> mpf:
        return mpf(self.records[n][2])

    @classmethod
    def from_text(cls, text: str) -> "StieltjesTable":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            n, mid, rad = line.split()
            rows.append((int(n), mid, rad))
        return cls(tuple(rows))

    def to_text(self) -> str:
        lines = ["# n mid rad  (Laurent-Stieltjes constants, |gamma_n - mid| <= rad)"]
        lines += [f"{n} {mid} {rad}" for n, mid, rad in self.records]
        return "\n".join(lines) + "\n"


_STORE_BITS = 512


@lru_cache(maxsize=1)
def stieltjes_table() -> StieltjesTable:
    text = resources.files("zetabounds").joinpath("data", STIELTJES_RESOURCE).read_text()
    return StieltjesTable.from_text(text)


def stieltjes_constant(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> CertifiedReal:
    """Enclosure of gamma_n with radius at most ``10**-(working_digits - 10)``."""
    table = stieltjes_table()
    if not isinstance(n, int) or n < 0:
        raise IndexOutOfRangeError(f"Stieltjes index must be a non-negative integer, got {n!r}")
    stored = table.enclosure(n)
    with ctx.working():
        tol = mpf(10) ** (10 - ctx.working_digits)
        if stored.rad > tol:
            raise PrecisionUnreachableError(
                f"stored radius {mp.nstr(stored.rad, 3)} for gamma_{n} exceeds {mp.nstr(tol, 3)}"
            )
        return CertifiedReal(stored.mid, stored.rad + ctx.slack(stored.mid))


def lavrik_bound(n: int) -> mpf:
    """n!/2^(n+1); bounds |gamma_n| for n >= 1."""
    return mpf(math.factorial(n)) / 2 ** (n + 1)


# ---------------------------------------------------------------------------
# zeta on the real axis
# ---------------------------------------------------------------------------


def zeta_real(sigma, ctx: PrecisionContext = DEFAULT_CONTEXT, target=None) -> CertifiedReal:
    """Certified enclosure of zeta(sigma) for real sigma > 1."""
    with ctx.working():
        s = to_mpf(sigma)
        if not s > 1:
            raise DomainError(f"zeta_real requires sigma > 1, got {mp.nstr(s, 15)}")
    from .zeta_eval import em_zeta

    return em_zeta((sigma, 0), ctx, target=target).re
