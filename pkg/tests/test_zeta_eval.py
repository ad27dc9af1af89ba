from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from fd_oracle import fd_check, sample_points
from zetabounds.errors import BudgetError, DomainError, NonConvergenceError, PoleError, ZeroCrossingError
from zetabounds.numerics import CONSTANTS, CertifiedReal, PrecisionContext, zeta_real
from zetabounds.zeta_eval import (
    choose_params,
    em_remainder_bound,
    em_zeta,
    em_zeta_deriv,
    em_zeta_grid,
    grid_check,
    sup_modulus_on_segment,
)

# mpmath oracles at 75 digits (altzeta for zeta(1/2), zeta(s, derivative=1) for zeta')
ZETA_HALF = "-1.46035450880958681288949915251529801246722933101258149054288608782553052947"
DZETA_2 = "-0.937548254315843753702574094567864977897860288614829925885433480360443811313"
DZETA_3 = "-0.198126242885636853330681821503285796875542793463835003346889963192725669423"
# zeta(1/2 + 14i), mpmath at 75 digits
Z14_RE = "0.022241142609993589246213199203968626386786243194923632475936481360388746616"
Z14_IM = "-0.103258123266450057902363095552573834507549030464100714717429025028717926535"

FAST = PrecisionContext(30)


def test_zeta2(ctx):
    z = em_zeta(2, ctx)
    with mp.workdps(80):
        assert z.re.contains(mp.pi**2 / 6)
    assert z.im.mid == 0 and z.im.rad == 0


def test_zeta_half(ctx):
    assert em_zeta(Fraction(1, 2), ctx).re.contains(ZETA_HALF)


def test_zeta_half_plus_14i(ctx):
    z = em_zeta((Fraction(1, 2), 14), ctx)
    assert z.re.contains(Z14_RE) and z.im.contains(Z14_IM)


def test_input_forms_agree(ctx):
    a = em_zeta((Fraction(1, 2), 3), ctx)
    b = em_zeta(mp.mpc("0.5", "3"), ctx)
    c = em_zeta(complex(0.5, 3), ctx)
    assert a.re.intersects(b.re) and b.re.intersects(c.re) and a.im.intersects(c.im)


def test_half_plus_3i_below_1461(ctx):
    assert em_zeta((Fraction(1, 2), 3), ctx).modulus(ctx)[1] <= mpf("1.461")


def test_radius_meets_default_target(ctx):
    z = em_zeta((Fraction(3, 4), 20), ctx)
    assert z.rad <= mpf(10) ** -(ctx.working_digits // 2)


def test_explicit_target(ctx):
    assert em_zeta((2, 5), ctx, target=1e-8).rad <= 1e-8


def test_pole_and_domain(ctx):
    with pytest.raises(PoleError):
        em_zeta(1, ctx)
    with pytest.raises(DomainError):
        em_zeta((0, 5), ctx)
    with pytest.raises(DomainError):
        em_zeta((-1, 5), ctx)
    with pytest.raises(PoleError):
        em_zeta_deriv(1, ctx)


def test_pole_error_is_domain_error():
    assert issubclass(PoleError, DomainError)


def test_nonconvergence_when_n_would_exceed_cap():
    with pytest.raises(NonConvergenceError):
        choose_params(1e-6, 1e-6, 1e9, 1e-40)


def test_remainder_bound_decreases_with_n(ctx):
    s = (Fraction(1, 2), 10)
    a, b = em_remainder_bound(s, 10, 3, ctx), em_remainder_bound(s, 40, 3, ctx)
    assert 0 < b < a


def test_order_one_matches_backlund_tail(ctx):
    # p = 1 is the classical form; its remainder is |s(s+1)|/(12 (sigma+1) N^(sigma+1)) up to B2/2! = 1/12
    s = mp.mpc(2, 3)
    with ctx.working():
        bound = em_remainder_bound((2, 3), 10, 1, ctx)
        ref = abs(s * (s + 1)) / (12 * 3 * mpf(10) ** 3)
        assert abs(bound / ref - 1) < mpf("1e-20")


def test_deriv_values(ctx):
    assert em_zeta_deriv(2, ctx).re.contains(DZETA_2)
    d3 = em_zeta_deriv(3, ctx).re
    assert d3.contains(DZETA_3) and d3.upper < 1 and d3.lower > -1


def test_deriv_finite_differences(vctx):
    for s, t in sample_points(20):
        gap, allow = fd_check(s, t, vctx)
        assert gap <= allow, (s, t)


def test_enclosures_from_two_truncations_intersect(ctx):
    for s in ((Fraction(1, 2), 7), (Fraction(3, 2), 30), (Fraction(5, 4), -2)):
        a = em_zeta(s, ctx)
        b = em_zeta(s, ctx, order=2)
        c = em_zeta(s, ctx, target=1e-10)
        assert a.re.intersects(b.re) and a.im.intersects(b.im)
        assert a.re.intersects(c.re) and a.im.intersects(c.im)


@settings(max_examples=25)
@given(st.integers(105, 400), st.integers(-6000, 6000))
def test_conjugate_symmetry(k, j):
    s, t = Fraction(k, 100), Fraction(j, 100)
    if t == 0 and s == 1:
        return
    a, b = em_zeta((s, t), FAST), em_zeta((s, -t), FAST)
    assert a.re.intersects(b.re)
    assert a.im.intersects(CertifiedReal(-b.im.mid, b.im.rad))


@settings(max_examples=25)
@given(st.integers(1050, 4000), st.integers(-8000, 8000))
def test_modulus_below_zeta_sigma(k, j):
    s, t = Fraction(k, 1000), Fraction(j, 100)
    up = em_zeta((s, t), FAST).modulus(FAST)[1]
    z = zeta_real(s, FAST)
    with mp.workprec(200):
        assert up <= z.upper + z.rad + mpf("1e-20")


def test_nesting_under_doubling():
    c = PrecisionContext(40, "outward")
    for s in ((Fraction(1, 2), 14), (2, 0), (Fraction(9, 10), 100)):
        a, b = em_zeta(s, c), em_zeta(s, c.doubled())
        assert a.re.contains(b.re) and a.im.contains(b.im)


def test_grid_matches_pointwise(ctx):
    vals = em_zeta_grid(Fraction(1, 2), 10, Fraction(1, 4), 9, ctx)
    assert len(vals) == 9
    for k in (0, 4, 8):
        p = em_zeta((Fraction(1, 2), 10 + Fraction(k, 4)), ctx)
        assert vals[k].re.intersects(p.re) and vals[k].im.intersects(p.im)


def test_grid_check_simple(ctx):
    g = grid_check(2, 1, 5, Fraction(1, 4), zeta_real(2, ctx).upper, ctx)
    assert g.holds and g.nodes == 17


def test_sup_sigma2_below_zeta2(ctx):
    # the maximum zeta(2) is attained at t = 0, so the claim needs some room
    # for a first-order bracket to decide it
    r = sup_modulus_on_segment(2, 0, 1, True, ctx, claim=zeta_real(2, ctx).upper + mpf("1e-4"))
    assert r.certified and r.claim_holds
    with mp.workdps(30):
        assert r.lower <= mp.pi**2 / 6 <= r.upper


def test_sup_half_line_small_range(ctx):
    r = sup_modulus_on_segment(Fraction(1, 2), Fraction(1, 100), 1, True, ctx, claim=CONSTANTS.small_t_half_line)
    assert r.claim_holds and r.upper <= mpf("1.461")


def test_sup_heuristic_mode_flagged(ctx):
    r = sup_modulus_on_segment(2, 0, 1, False, ctx, grid_points=51)
    assert not r.certified and r.lower <= r.upper


def test_sup_reciprocal_zero_crossing(ctx):
    # the first zero sits near t = 14.1347
    with pytest.raises(ZeroCrossingError):
        sup_modulus_on_segment(Fraction(1, 2), 14, Fraction(143, 10), True, ctx, reciprocal=True)


def test_sup_budget(ctx):
    with pytest.raises(BudgetError):
        sup_modulus_on_segment(Fraction(1, 2), 0, 3, True, ctx, max_nodes=4)


def test_sup_domain(ctx):
    with pytest.raises(DomainError):
        sup_modulus_on_segment(2, 3, 3, True, ctx)
    with pytest.raises(PoleError):
        sup_modulus_on_segment(1, -1, 1, True, ctx)
