import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdarwin import info
from qdarwin.errors import DegenerateInputError, DomainError
from qdarwin.info import (
    LN2,
    DecoherenceFactor,
    branch_entropy,
    info_curve,
    mutual_information_isotropic,
    mutual_information_point,
    redundancy_asymptotic,
    redundancy_exact,
)

gammas = st.floats(0.0, 1.0, allow_nan=False, exclude_max=True)
fractions = st.floats(0.0, 1.0, allow_nan=False)


def mp_series_entropy(gamma, dps=40):
    # independent oracle: direct high-precision summation
    with mp.workdps(dps):
        g = mp.mpf(gamma)
        return mp.log(2) - mp.nsum(lambda n: g**n / (2 * n * (2 * n - 1)), [1, mp.inf])


def mp_closed_entropy(gamma, dps=40):
    with mp.workdps(dps):
        g = mp.mpf(gamma)
        if g == 1:
            return mp.mpf(0)
        s = mp.sqrt(g)
        return mp.log(2) - s * mp.atanh(s) - mp.log(mp.sqrt(1 - g))


class TestBranchEntropy:
    def test_fully_decohered(self):
        assert branch_entropy(0.0) == pytest.approx(LN2, abs=1e-15)
        assert branch_entropy(0.0, "series") == pytest.approx(LN2, abs=1e-15)

    def test_pure(self):
        assert branch_entropy(1.0) == 0.0
        assert branch_entropy(1.0, "series") == pytest.approx(0.0, abs=1e-14)

    def test_quarter(self):
        # mpmath evaluation of the closed form
        assert float(mp_closed_entropy(0.25)) == pytest.approx(0.562335144618808, abs=1e-15)
        assert branch_entropy(0.25) == pytest.approx(0.562335144618808, abs=1e-14)
        assert branch_entropy(0.25, "series") == pytest.approx(0.562335144618808, abs=1e-14)

    @pytest.mark.parametrize("gamma", [1e-9, 0.01, 0.3, 0.5, 0.9, 0.999, 0.9999, 1 - 1e-6, 1 - 1e-9])
    def test_against_high_precision(self, gamma):
        ref = float(mp_closed_entropy(gamma))
        assert branch_entropy(gamma) == pytest.approx(ref, abs=1e-14)
        assert branch_entropy(gamma, "series") == pytest.approx(ref, abs=1e-14)

    @pytest.mark.parametrize("gamma", [0.01, 0.3, 0.7, 0.95])
    def test_series_oracle_matches_closed_oracle(self, gamma):
        assert float(mp_series_entropy(gamma) - mp_closed_entropy(gamma)) == pytest.approx(0, abs=1e-25)

    def test_is_binary_entropy_of_overlap_eigenvalues(self):
        # the two eigenvalues of the decohered system are (1 +- sqrt(Gamma)) / 2
        g = np.linspace(0, 1, 101)
        p = (1 + np.sqrt(g)) / 2
        binary = -(p * np.log(p)) - np.where(p < 1, (1 - p) * np.log(np.where(p < 1, 1 - p, 1)), 0)
        np.testing.assert_allclose(branch_entropy(g), binary, atol=1e-13)

    def test_accepts_factor_and_arrays(self):
        factor = DecoherenceFactor.from_value(0.25)
        assert branch_entropy(factor) == pytest.approx(branch_entropy(0.25), abs=1e-15)
        out = branch_entropy([0.0, 0.25, 1.0])
        assert out.shape == (3,)

    def test_huge_exponent_does_not_underflow(self):
        assert branch_entropy(DecoherenceFactor(1e8)) == LN2

    @pytest.mark.parametrize("bad", [-1e-6, 1 + 1e-6, math.nan])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            branch_entropy(bad)

    def test_tolerates_tiny_excursions(self):
        assert branch_entropy(1 + 1e-13) == 0.0
        assert branch_entropy(-1e-13) == pytest.approx(LN2)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            branch_entropy(0.5, "taylor")


class TestPointSource:
    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.5, 0.97, 1.0])
    def test_half_fragment_equals_system_entropy(self, gamma):
        assert mutual_information_point(gamma, 0.5) == pytest.approx(branch_entropy(gamma), abs=1e-15)

    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.5, 0.97, 1.0])
    def test_empty_fragment(self, gamma):
        assert mutual_information_point(gamma, 0.0) == 0.0
        assert mutual_information_point(gamma, 0.0, "series") == pytest.approx(0.0, abs=1e-14)

    def test_whole_environment_gamma_point_three(self):
        # 2 H_S from high-precision summation
        expected = 2 * 0.5345684549613805884
        assert mutual_information_point(0.3, 1.0) == pytest.approx(expected, abs=1e-14)
        assert mutual_information_point(0.3, 1.0, "series") == pytest.approx(expected, abs=1e-14)

    def test_large_time_example(self):
        gamma = DecoherenceFactor(10.0)
        # full sum at 40 digits; ln2 - exp(-1)/2 = 0.509207 is only the
        # leading-order estimate and is off by about 0.013 here
        full = 0.4958812640560668665
        assert mutual_information_point(gamma, 0.1) == pytest.approx(full, abs=1e-14)
        assert mutual_information_point(gamma, 0.1, "series") == pytest.approx(full, abs=1e-14)
        assert LN2 - math.exp(-1) / 2 == pytest.approx(0.509207, abs=1e-6)
        assert abs(full - (LN2 - math.exp(-1) / 2)) < 0.015

    def test_leading_order_accurate_when_gamma_f_small(self):
        gamma = DecoherenceFactor(400.0)
        approx = LN2 - 0.5 * math.exp(-40.0)
        assert mutual_information_point(gamma, 0.1) == pytest.approx(approx, abs=1e-30)

    def test_intermediate_value(self):
        # x = 4, f = 0.3, from 40-digit summation
        assert mutual_information_point(DecoherenceFactor(4.0), 0.3) == pytest.approx(0.55543264558458919621, abs=1e-14)


class TestIsotropic:
    @pytest.mark.parametrize("gamma", [0.0, 0.2, 0.9, 1.0])
    def test_endpoints(self, gamma):
        assert mutual_information_isotropic(gamma, 0.0) == 0.0
        assert mutual_information_isotropic(gamma, 1.0) == pytest.approx(branch_entropy(gamma), abs=1e-15)

    def test_vanishes_at_long_times(self):
        values = [mutual_information_isotropic(DecoherenceFactor(x), 0.5) for x in (10, 50, 100, 200)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < 1e-40


class TestInvariants:
    def test_series_and_closed_agree_on_random_points(self):
        rng = np.random.default_rng(20101016)
        g, f = rng.random(10_000), rng.random(10_000)
        np.testing.assert_allclose(branch_entropy(g), branch_entropy(g, "series"), atol=1e-12, rtol=0)
        np.testing.assert_allclose(
            mutual_information_point(g, f), mutual_information_point(g, f, "series"), atol=1e-12, rtol=0
        )
        np.testing.assert_allclose(
            mutual_information_isotropic(g, f), mutual_information_isotropic(g, f, "series"), atol=1e-12, rtol=0
        )

    @given(gammas, fractions)
    def test_antisymmetry(self, g, f):
        total = mutual_information_point(g, f) + mutual_information_point(g, 1 - f)
        assert total == pytest.approx(2 * branch_entropy(g), abs=1e-12)

    @given(gammas, fractions)
    def test_ordering_identity(self, g, f):
        diff = mutual_information_point(g, f) - mutual_information_isotropic(g, f)
        assert diff == pytest.approx(branch_entropy(g**f if f > 0 else 1.0), abs=1e-12)
        assert diff >= -1e-15

    @given(gammas, fractions)
    def test_bounds(self, g, f):
        h = branch_entropy(g)
        iso = mutual_information_isotropic(g, f)
        point = mutual_information_point(g, f)
        assert 0 <= iso <= h + 1e-15
        assert h <= LN2
        assert 0 <= point <= 2 * h + 1e-15

    @settings(max_examples=50)
    @given(gammas)
    def test_monotone_in_f(self, g):
        grid = np.linspace(0, 1, 1001)
        for fn in (mutual_information_point, mutual_information_isotropic):
            assert np.all(np.diff(fn(g, grid)) >= -1e-15)

    @pytest.mark.parametrize("f", [0.1, 0.3, 0.7])
    def test_long_time_limits(self, f):
        big = DecoherenceFactor(5000.0)
        assert mutual_information_point(big, f) == pytest.approx(LN2, abs=1e-12)
        assert mutual_information_isotropic(big, f) == pytest.approx(0.0, abs=1e-12)


class TestRedundancy:
    def test_asymptotic_unit_example(self):
        log_term = math.log(1 / (0.2 * LN2))
        assert log_term == pytest.approx(1.97595083301576, abs=1e-13)
        assert redundancy_asymptotic(log_term, 0.1) == pytest.approx(1.0, abs=1e-15)
        assert redundancy_asymptotic(1.97612, 0.1) == pytest.approx(1.0, abs=1e-4)

    def test_asymptotic_zero_time(self):
        assert redundancy_asymptotic(0.0, 0.1) == 0.0

    def test_asymptotic_quarter_deficit(self):
        assert redundancy_asymptotic(100, 0.25) == pytest.approx(94.369883222239312, rel=1e-14)

    @pytest.mark.parametrize("delta", [0.0, 0.5, 0.8, -0.1])
    def test_asymptotic_domain(self, delta):
        with pytest.raises(DomainError):
            redundancy_asymptotic(10, delta)

    def test_exact_at_hundred(self):
        result = redundancy_exact(DecoherenceFactor(100.0), 0.1)
        # 30-digit mpmath bisection of the same crossing
        assert result.redundancy == pytest.approx(50.011128005888686, rel=1e-9)
        assert result.asymptotic == pytest.approx(50.60854669515057, rel=1e-12)
        assert abs(result.redundancy - result.asymptotic) / result.redundancy < 0.02
        assert result.has_plateau
        assert result.redundancy == pytest.approx(1 / result.f_delta)

    def test_exact_accepts_raw_gamma(self):
        a = redundancy_exact(math.exp(-100), 0.1)
        b = redundancy_exact(DecoherenceFactor(100.0), 0.1)
        assert a.f_delta == pytest.approx(b.f_delta, abs=1e-12)

    def test_crossing_is_solved(self):
        g = DecoherenceFactor(37.0)
        r = redundancy_exact(g, 0.05)
        assert mutual_information_point(g, r.f_delta) == pytest.approx(0.95 * branch_entropy(g), abs=1e-11)

    def test_logarithmic_in_delta(self):
        ratio_exact = (
            redundancy_exact(DecoherenceFactor(100.0), 0.01).redundancy
            / redundancy_exact(DecoherenceFactor(100.0), 0.1).redundancy
        )
        ratio_asym = math.log(1 / (0.2 * LN2)) / math.log(1 / (0.02 * LN2))
        assert ratio_asym == pytest.approx(11.686240542247898 / 25.304273347575286, rel=1e-12)
        assert ratio_exact == pytest.approx(0.46709284372041, rel=1e-8)
        assert abs(ratio_exact / ratio_asym - 1) < 0.05

    @pytest.mark.parametrize("x", [50, 100, 500])
    @pytest.mark.parametrize("delta", [0.01, 0.1])
    def test_consistency_with_asymptotics(self, x, delta):
        r = redundancy_exact(DecoherenceFactor(x), delta)
        assert abs(r.redundancy - r.asymptotic) / r.redundancy <= 0.05

    @pytest.mark.parametrize("x", [50, 100, 500])
    def test_quarter_deficit_truncation_error(self, x):
        # the leading-order estimate drops the y**2/12 term of the deficit
        # equation; at delta = 0.25 it overshoots R by 5.76 % of R
        r = redundancy_exact(DecoherenceFactor(x), 0.25)
        assert abs(r.redundancy - r.asymptotic) / r.redundancy == pytest.approx(0.0576451455, abs=1e-6)

    def test_near_pure_state(self):
        # I(1/2) = H_S >= (1 - delta) H_S, so f_delta never exceeds 1/2 and
        # the plateau flag is set even this close to a pure state
        r = redundancy_exact(0.9, 0.1)
        assert r.f_delta == pytest.approx(0.44632283926239325, abs=1e-11)
        assert r.has_plateau
        assert r.redundancy == pytest.approx(1 / r.f_delta)

    @given(st.floats(1e-6, 700.0), st.floats(1e-3, 0.999))
    def test_half_fragment_always_suffices(self, x, delta):
        r = redundancy_exact(DecoherenceFactor(x), delta)
        assert r.f_delta <= 0.5 + 1e-12
        assert r.has_plateau == (r.f_delta <= 0.5)

    def test_large_deficit_has_no_asymptotic(self):
        r = redundancy_exact(DecoherenceFactor(100.0), 0.6)
        assert r.asymptotic is None

    @pytest.mark.parametrize("gamma", [0.0, 1.0])
    def test_degenerate(self, gamma):
        with pytest.raises(DegenerateInputError):
            redundancy_exact(gamma, 0.1)

    @pytest.mark.parametrize("delta", [0.0, 1.0])
    def test_bad_delta(self, delta):
        with pytest.raises(DomainError):
            redundancy_exact(0.5, delta)

    def test_huge_time(self):
        r = redundancy_exact(DecoherenceFactor(1e8), 0.1)
        assert r.redundancy == pytest.approx(1e8 * 0.50011128005888686, rel=1e-6)


class TestInfoCurve:
    def test_point_endpoints(self):
        g = DecoherenceFactor(4.0)
        curve = info_curve(g, "point", [0, 0.5, 1])
        h = branch_entropy(g)
        np.testing.assert_allclose(curve.values, [0, h, 2 * h], atol=1e-15)
        assert curve.illumination is info.Illumination.POINT

    def test_isotropic_endpoints(self):
        g = DecoherenceFactor(4.0)
        curve = info_curve(g, "isotropic", [0, 1])
        np.testing.assert_allclose(curve.values, [0, branch_entropy(g)], atol=1e-15)

    def test_later_curve_dominates(self):
        grid = np.linspace(0.01, 0.99, 99)
        early = info_curve(DecoherenceFactor(0.5), "point", grid).values
        late = info_curve(DecoherenceFactor(4.0), "point", grid).values
        assert np.all(late > early)

    def test_grid_must_increase(self):
        with pytest.raises(DomainError):
            info_curve(0.5, "point", [0, 0.5, 0.5])
        with pytest.raises(DomainError):
            info_curve(0.5, "point", [0, 1.5])

    def test_unknown_illumination(self):
        with pytest.raises(DomainError):
            info_curve(0.5, "ambient", [0, 1])


class TestDecoherenceFactor:
    def test_from_time(self):
        assert DecoherenceFactor.from_time(3.0, 1.5).value == pytest.approx(math.exp(-2))

    def test_roundtrip(self):
        assert DecoherenceFactor.from_value(0.3).value == pytest.approx(0.3, rel=1e-15)
        assert DecoherenceFactor.from_value(0.0).exponent == math.inf

    @pytest.mark.parametrize("bad", [-1.0, math.nan])
    def test_rejects_negative_exponent(self, bad):
        with pytest.raises(DomainError):
            DecoherenceFactor(bad)
