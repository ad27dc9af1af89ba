"""Parameter records and the result types shared by the bound formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from mpmath import mp, mpf

from ..errors import DomainError, LadderOrderError
from ..numerics import CONSTANTS, CertifiedReal, to_mpf


def _f(x) -> float:
    return float(to_mpf(x)) if not isinstance(x, float) else x


@dataclass(frozen=True)
class Region:
    """Where a bound holds: a sigma constraint and a t range.

    kind is one of
      ``half_plane``  sigma >= a
      ``strip``       a <= sigma <= b
      ``zero_free``   sigma >= 1 - 1/(W log t), with a = W
      ``line``        sigma = a
    """

    kind: str
    a: Any
    b: Any = None
    t_lo: Any = 0
    t_hi: Any = math.inf

    def sigma_floor(self, t) -> mpf:
        """Smallest sigma covered at height t."""
        if self.kind == "zero_free":
            return 1 - 1 / (to_mpf(self.a) * mp.log(to_mpf(t)))
        return to_mpf(self.a)

    def describe(self) -> str:
        a = _fmt(self.a)
        if self.kind == "half_plane":
            sig = f"sigma >= {a}"
        elif self.kind == "strip":
            sig = f"{a} <= sigma <= {_fmt(self.b)}"
        elif self.kind == "zero_free":
            sig = f"sigma >= 1 - 1/({a} log t)"
        else:
            sig = f"sigma = {a}"
        hi = "inf" if self.t_hi in (math.inf, mp.inf) else _fmt(self.t_hi)
        return f"{sig}, {_fmt(self.t_lo)} <= t <= {hi}"


def _fmt(x) -> str:
    if isinstance(x, (int, str)):
        return str(x)
    return mp.nstr(to_mpf(x), 10)


@dataclass(frozen=True)
class Condition:
    id: str
    satisfied: bool
    margin: Any
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    items: tuple[Condition, ...] = ()

    @classmethod
    def from_margins(cls, margins: dict, lower, details: Optional[dict] = None) -> "ConditionReport":
        """Build from {id: margin}; ``lower`` maps a backend value to a certain lower bound."""
        details = details or {}
        items = []
        for cid, m in margins.items():
            lo = lower(m)
            items.append(Condition(cid, bool(lo >= 0), lo, details.get(cid, "")))
        return cls(tuple(items))

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.items)

    def failed(self) -> list[Condition]:
        return [c for c in self.items if not c.satisfied]

    def margin(self, cid: str):
        for c in self.items:
            if c.id == cid:
                return c.margin
        raise KeyError(cid)

    def __contains__(self, cid: str) -> bool:
        return any(c.id == cid for c in self.items)

    def merged(self, other: "ConditionReport") -> "ConditionReport":
        return ConditionReport(self.items + other.items)


@dataclass(frozen=True)
class ConditionedBound:
    """A constant together with the region and side conditions it needs.

    ``form`` names the function of t that multiplies the constant, e.g.
    ``log t`` or ``(log t)^(11/12)``.
    """

    value: CertifiedReal
    region: Region
    conditions: ConditionReport
    form: str = "log t"
    branches: tuple[CertifiedReal, ...] = ()
    selected: int = 0
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        v = self.value
        if not (mp.isfinite(v.mid) and mp.isfinite(v.rad)):
            raise DomainError("bound value is not finite")
        if not v.upper > 0:
            raise DomainError("bound value is not positive")

    @property
    def ok(self) -> bool:
        return self.conditions.all_satisfied


@dataclass(frozen=True)
class KParams:
    k1: Any
    k2: Any
    k3: Any
    k4: Any
    Q0: Any
    delta_r: Any

    def __post_init__(self) -> None:
        for name in ("k1", "k2", "k3", "k4"):
            if not _f(getattr(self, name)) >= 0:
                raise DomainError(f"{name} must be non-negative")
        if not _f(self.Q0) > 0.5:
            raise DomainError("Q0 must exceed 1/2")
        if not _f(self.delta_r) > 0:
            raise DomainError("delta_r must be positive")


@dataclass(frozen=True)
class RhParams:
    epsilon: Any
    alpha0: Any
    sigma1: Any
    eta: Any
    t0: Any
    T: Any = CONSTANTS.H0

    def __post_init__(self) -> None:
        if not 0 < _f(self.epsilon) <= 0.5:
            raise DomainError("epsilon must lie in (0, 1/2]")
        if not 0 < _f(self.alpha0) < 1:
            raise DomainError("alpha0 must lie in (0, 1)")
        if not _f(self.eta) > 0:
            raise DomainError("eta must be positive")
        if not _f(self.t0) >= 3:
            raise DomainError("t0 must be at least 3")

    @classmethod
    def from_sigma0(cls, sigma0, epsilon, sigma1, eta, t0, T=CONSTANTS.H0) -> "RhParams":
        alpha0 = 2 * (1 + _frac(epsilon) - _frac(sigma0))
        return cls(epsilon, alpha0, sigma1, eta, t0, T)

    @property
    def sigma0(self):
        return 1 + _frac(self.epsilon) - _frac(self.alpha0) / 2


def _frac(x):
    """Exact rational for decimal-like inputs, else the value itself."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return x


@dataclass(frozen=True)
class HParams:
    d: Any
    beta: Any
    epsilon1: Any
    sigma1: Any
    eta: Any
    t0: Any = CONSTANTS.H

    def __post_init__(self) -> None:
        if not _f(self.d) > 0:
            raise DomainError("d must be positive")
        if not _f(self.beta) < 1 or not _f(self.beta) > 0:
            raise DomainError("beta must lie in (0, 1)")
        if not _f(self.epsilon1) > 0:
            raise DomainError("epsilon1 must be positive")
        if not _f(self.eta) > 0:
            raise DomainError("eta must be positive")
        if not _f(self.sigma1) > 0:
            raise DomainError("sigma1 must be positive")
        if not _f(self.t0) > math.e:
            raise DomainError("t0 must exceed e")


@dataclass(frozen=True)
class LadderTable:
    """Pairs (W_j, Q_j): the bound Q_j log t holds for sigma >= 1 - 1/(W_j log t)."""

    entries: tuple[tuple[Any, Any], ...] = ()

    def __post_init__(self) -> None:
        ws = [_f(w) for w, _ in self.entries]
        if any(b <= a for a, b in zip(ws, ws[1:])):
            raise LadderOrderError("ladder W values must be strictly increasing")
        if any(not _f(q) > 0 for _, q in self.entries):
            raise DomainError("ladder Q values must be positive")

    @property
    def empty(self) -> bool:
        return not self.entries

    @property
    def w1(self):
        return self.entries[0][0] if self.entries else None

    def restrict(self, w_min) -> "LadderTable":
        """Entries with W >= w_min (what is usable for a region starting at W = w_min)."""
        lo = _f(w_min) * (1 - 1e-12)
        return LadderTable(tuple(e for e in self.entries if _f(e[0]) >= lo))


@dataclass(frozen=True)
class ReciprocalParams:
    d1: Any
    sigma1: Any = None
    eta: Any = None
    t0: Any = 13
    ladder: LadderTable = field(default_factory=LadderTable)
    asymptotic: bool = False

    def __post_init__(self) -> None:
        if not _f(self.d1) > 0:
            raise DomainError("d1 must be positive")
        if not self.asymptotic:
            if self.sigma1 is None or self.eta is None:
                raise DomainError("sigma1 and eta are required for the log t bound")
            if not _f(self.eta) > 0:
                raise DomainError("eta must be positive")
        if not _f(self.t0) > 1:
            raise DomainError("t0 must exceed 1")
