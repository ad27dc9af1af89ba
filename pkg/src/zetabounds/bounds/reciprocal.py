"""Bounds for 1/zeta near the 1-line."""
from __future__ import annotations

from ..errors import DomainError
from ..numerics import CertifiedReal, PrecisionContext
from . import kernels as k
from ._common import backend_for, build, certify
from .types import ConditionedBound, LadderTable, ReciprocalParams, Region


def ladder_sum(ladder: LadderTable, ctx: PrecisionContext | None = None) -> CertifiedReal:
    c, m = backend_for(ctx)
    with c.working():
        return certify(m, k.ladder_sum(m, ladder.entries), c)


def _region(p: ReciprocalParams) -> Region:
    if p.ladder.empty:
        return Region("half_plane", 1, t_lo=p.t0)
    return Region("zero_free", p.ladder.w1, t_lo=p.t0)


def y0(p: ReciprocalParams, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """|1/zeta| <= Y0 log t.  An empty ladder gives the sigma >= 1 variant."""
    if p.asymptotic:
        raise DomainError("y0 takes the non-asymptotic parameters; use yprime0")
    c, m = backend_for(ctx)
    with c.working():
        S = k.ladder_sum(m, p.ladder.entries)
        branches, margins, extras = k.y0_terms(
            m, m.num(p.d1), m.num(p.sigma1), m.num(p.eta), m.num(p.t0), S
        )
        return build(m, c, branches, margins, _region(p), extras=extras)


def yprime0(p: ReciprocalParams, ctx: PrecisionContext | None = None) -> ConditionedBound:
    """|1/zeta| <= Y0' (log t)^(11/12)."""
    if not p.asymptotic:
        raise DomainError("yprime0 needs the asymptotic flag")
    c, m = backend_for(ctx)
    with c.working():
        S = k.ladder_sum(m, p.ladder.entries)
        branches, margins, extras = k.yprime0_terms(m, m.num(p.d1), m.num(p.t0), S)
        return build(m, c, branches, margins, _region(p), form="(log t)^(11/12)", extras=extras)
