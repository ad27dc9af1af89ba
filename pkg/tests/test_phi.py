from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from zetabounds import bounds as B
from zetabounds.bounds.phi import ADMISSIBLE_PAIRS, check_phi0_nonnegative, check_phi1_below
from zetabounds.errors import DomainError, IndexOutOfRangeError
from zetabounds.numerics import PrecisionContext, zeta_real

# plain-mpmath oracles (mpmath.stieltjes) at 60 digits
PHI1_12_10 = "0.90524077008879967267410638463062863832890837949337"
PHI0_145_1 = "0.00010584014507388102597354656306043232165877160529079"
PHI1_183_3 = "0.99865386622015864525885829407826400016014150872997"

FAST = PrecisionContext(30)


def near(x, ref, tol="1e-40"):
    with mp.workdps(60):
        return abs(x.mid - mpf(ref)) < mpf(tol)


def test_oracle_values(ctx):
    assert near(B.phi_family(F("1.45"), 1, ctx)[0], PHI0_145_1)
    assert near(B.phi_family(F("1.83"), 3, ctx)[1], PHI1_183_3)
    assert near(B.phi_family(F("1.2"), 10, ctx)[1], PHI1_12_10)


def test_phi0_vanishes_at_one(ctx):
    p0, _ = B.phi_family(1 + F(1, 10**12), 5, ctx)
    assert abs(p0.mid) < 1e-11


def test_admissible_pair_endpoints(ctx):
    for sk, k in ADMISSIBLE_PAIRS:
        assert B.phi_family(sk, k, ctx)[0].lower >= 0


def test_phi1_below_one_at_183(ctx):
    assert B.phi_family(F("1.83"), 3, ctx)[1].upper < 1


def test_phi2(ctx):
    assert B.phi2(F("1.49"), ctx).contains(F("0.852"))
    assert near(B.phi2(F("1.2"), ctx), PHI1_12_10)
    for s in (F("1.001"), F("1.3"), F("1.5")):
        assert B.phi2(s, ctx).upper >= mpf("0.852") - mpf("1e-50")


@pytest.mark.parametrize("s", [1, F(3, 2) + F(1, 100), 0])
def test_phi2_domain(ctx, s):
    with pytest.raises(DomainError):
        B.phi2(s, ctx)


def test_phi_family_domain(ctx):
    for s in (1, 3):
        with pytest.raises(DomainError):
            B.phi_family(s, 3, ctx)
    with pytest.raises(IndexOutOfRangeError):
        B.phi_family(F(3, 2), 40, ctx)


@settings(max_examples=30)
@given(st.fractions(F(1001, 1000), F(2)))
def test_zeta_lower_bound_holds(s):
    # the inequality phi0 is built for: zeta(s) >= 1/(s-1) + gamma + phi0(s, k)
    p0, _ = B.phi_family(s, 3, FAST)
    z = zeta_real(s, FAST)
    with mp.workdps(40):
        x = mpf(s.numerator) / s.denominator
        assert z.upper >= 1 / (x - 1) + mp.euler + p0.lower


@settings(max_examples=30)
@given(st.fractions(F(1001, 1000), F("1.83")))
def test_phi1_bounds_logderiv(s):
    # -zeta'/zeta(s) <= phi1(s, 3)/(s - 1) (the reading of phi1 as an upper bound)
    from zetabounds.zeta_eval import em_zeta, em_zeta_deriv

    _, p1 = B.phi_family(s, 3, FAST)
    z, d = em_zeta((s, 0), FAST).re, em_zeta_deriv((s, 0), FAST).re
    with mp.workdps(40):
        x = mpf(s.numerator) / s.denominator
        assert -d.mid / z.mid <= p1.upper / (x - 1) + mpf("1e-20")


def test_grid_checks_small():
    c = check_phi0_nonnegative(F("1.45"), 1, step=F(1, 100), ctx=FAST)
    assert c.holds and c.nodes == 45
    c = check_phi1_below(3, F("1.83"), 1, step=F(1, 100), ctx=FAST, strict=True)
    assert c.holds


def test_grid_check_detects_failure():
    # phi0(sigma, 1) turns negative just past 1.45
    assert not check_phi0_nonnegative(F("1.6"), 1, step=F(1, 100), ctx=FAST).holds
