from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from zetabounds.errors import DomainError, IndexOutOfRangeError, PrecisionUnreachableError
from zetabounds.numerics import (
    CONSTANTS,
    CertifiedReal,
    PrecisionContext,
    StieltjesTable,
    lavrik_bound,
    stieltjes_constant,
    stieltjes_table,
    zeta_real,
)

# oracles from mpmath.stieltjes / mpmath.zeta at 75 digits
GAMMA0 = "0.577215664901532860606512090082402431042159335939923598805767234884867726778"
GAMMA1 = "-0.0728158454836767248605863758749013191377363383343379525990065597414014335715"
ZETA_3_2 = "2.61237534868548834334856756792407163057080065240006340757332824881492776769"


class TestPrecisionContext:
    def test_defaults(self):
        c = PrecisionContext()
        assert c.working_digits == 60 and c.rounding_policy == "nearest"

    @pytest.mark.parametrize("digits", [29, 0, -5, 40.5])
    def test_rejects_low_or_fractional_digits(self, digits):
        with pytest.raises(DomainError):
            PrecisionContext(digits)

    def test_rejects_unknown_policy(self):
        with pytest.raises(DomainError):
            PrecisionContext(60, "upward")

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("ZETABOUNDS_PRECISION", "45")
        assert PrecisionContext.from_env().working_digits == 45
        monkeypatch.setenv("ZETABOUNDS_PRECISION", "lots")
        with pytest.raises(DomainError):
            PrecisionContext.from_env()

    def test_working_restores_precision(self):
        before = mp.prec
        with PrecisionContext(80).working():
            assert mp.prec > 250
        assert mp.prec == before

    def test_doubled(self):
        assert PrecisionContext(40).doubled().working_digits == 80


class TestCertifiedReal:
    def test_negative_radius_rejected(self):
        with pytest.raises(DomainError):
            CertifiedReal(1, -1)

    def test_fraction_enclosed(self, ctx):
        x = CertifiedReal.from_value(Fraction(1, 3), ctx)
        with mp.workdps(80):
            assert x.contains(mpf(1) / 3)

    @given(st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6))
    def test_from_value_contains_exact(self, q):
        x = CertifiedReal.from_value(q, PrecisionContext(40))
        with mp.workdps(100):
            assert x.lower <= mpf(q.numerator) / q.denominator <= x.upper

    def test_contains_long_decimal(self):
        with mp.workdps(60):
            x = CertifiedReal(mpf(GAMMA0), mpf("1e-38"))
        assert x.contains(GAMMA0)
        assert not x.contains(GAMMA0[:37])


class TestConstants:
    def test_values(self):
        assert CONSTANTS.W0 == Fraction("5.558691")
        assert CONSTANTS.H0 == Fraction(3000175332800)
        assert CONSTANTS.H == CONSTANTS.H0 - Fraction(1, 2)
        assert CONSTANTS.hpy_half_line == Fraction("0.618")
        assert CONSTANTS.one_line_23 == Fraction("58.096")

    def test_frozen(self):
        with pytest.raises(Exception):
            CONSTANTS.W0 = 6

    def test_euler_gamma(self, ctx):
        assert CONSTANTS.euler_gamma(ctx).contains(GAMMA0)


class TestStieltjes:
    def test_gamma0_gamma1(self, ctx):
        assert stieltjes_constant(0, ctx).contains(GAMMA0)
        assert stieltjes_constant(1, ctx).contains(GAMMA1)

    def test_gamma0_matches_euler(self, ctx):
        assert stieltjes_constant(0, ctx).intersects(CONSTANTS.euler_gamma(ctx))

    def test_radius_target(self, ctx):
        g = stieltjes_constant(5, ctx)
        assert g.rad <= mpf(10) ** -(ctx.working_digits - 10)

    def test_table_size(self):
        assert stieltjes_table().n_max >= 20

    def test_out_of_range(self, ctx):
        with pytest.raises(IndexOutOfRangeError):
            stieltjes_constant(stieltjes_table().n_max + 1, ctx)
        with pytest.raises(IndexOutOfRangeError):
            stieltjes_constant(-1, ctx)

    def test_precision_unreachable(self):
        with pytest.raises(PrecisionUnreachableError):
            stieltjes_constant(3, PrecisionContext(400))

    @pytest.mark.parametrize("n", range(1, 21))
    def test_lavrik(self, n):
        g = stieltjes_table().enclosure(n)
        b = lavrik_bound(n)
        assert -b <= g.lower and g.upper <= b

    def test_round_trip(self):
        tab = stieltjes_table()
        again = StieltjesTable.from_text(tab.to_text())
        for n in range(tab.n_max + 1):
            assert again.enclosure(n) == tab.enclosure(n)


class TestZetaReal:
    def test_zeta2(self, ctx):
        with mp.workdps(70):
            assert zeta_real(2, ctx).contains(mp.pi**2 / 6)

    def test_zeta_three_halves(self, ctx):
        assert zeta_real(Fraction(3, 2), ctx).contains(ZETA_3_2)

    def test_zeta3_inside_trivial(self, ctx):
        z = zeta_real(3, ctx)
        assert 1 < z.lower and z.upper <= 1.5

    @pytest.mark.parametrize("sigma", [1, Fraction(1, 2), 0, -2])
    def test_domain(self, ctx, sigma):
        with pytest.raises(DomainError):
            zeta_real(sigma, ctx)

    def test_monotone_on_grid(self):
        c = PrecisionContext(30)
        vals = [zeta_real(Fraction(k, 10), c) for k in range(11, 51)]
        assert all(a.lower > b.upper for a, b in zip(vals, vals[1:]))

    @given(st.integers(min_value=1001, max_value=6000))
    def test_trivial_upper(self, k):
        c = PrecisionContext(30)
        s = Fraction(k, 1000)
        z = zeta_real(s, c)
        with mp.workdps(40):
            sm = mpf(s.numerator) / s.denominator
            g = mpf(GAMMA0)
            bound = min(sm / (sm - 1), mp.exp(g * (sm - 1)) / (sm - 1))
            assert z.upper <= bound + z.rad

    def test_nesting_under_doubling(self):
        c = PrecisionContext(40, "outward")
        for s in (Fraction(11, 10), 2, Fraction(7, 2)):
            assert zeta_real(s, c).contains(zeta_real(s, c.doubled()))
