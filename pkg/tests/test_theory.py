"""Closed-form risk, rate and density formulas."""

import math

import numpy as np
import pytest

from core.theory import (
    achieving_noise_variance,
    adaptive_risk_threshold,
    bhat_concentration_bound,
    chi2_mean_tail_bound,
    distortion,
    distortion_rate_gaussian,
    effective_rate,
    expected_max_inner,
    extreme_angle_limit,
    orthogonality_tail,
    pinsker_risk,
    prior_tail_bound,
    quantized_risk_bound,
    rate_lower_bound,
    sphere_inner_cdf,
    sphere_inner_density,
    sphere_inner_moment,
)
from utils.errors import DomainError, UsageError


class TestPinskerRisk:
    def test_value(self):
        assert pinsker_risk(1.0, 4.0) == pytest.approx(0.8)

    @pytest.mark.parametrize("sigma2, c2", [(0.0, 1.0), (1.0, -1.0), (math.nan, 1.0)])
    def test_rejects_nonpositive(self, sigma2, c2):
        with pytest.raises(DomainError):
            pinsker_risk(sigma2, c2)


class TestQuantizedRiskBound:
    @pytest.mark.parametrize("c2", [2.0, 3.0, 4.0, 5.0, 6.0])
    def test_zero_rate_is_c2(self, c2):
        assert quantized_risk_bound(0, 1.0, c2) == pytest.approx(c2, abs=1e-12)

    @pytest.mark.parametrize("c2", [2.0, 3.0, 4.0, 5.0, 6.0])
    def test_infinite_rate_is_pinsker(self, c2):
        assert quantized_risk_bound(math.inf, 1.0, c2) == pytest.approx(pinsker_risk(1.0, c2), abs=1e-12)

    def test_hand_value(self):
        assert quantized_risk_bound(3, 1.0, 2.0) == pytest.approx(2 / 3 + (4 / 3) / 64, abs=1e-12)
        assert quantized_risk_bound(3, 1.0, 2.0) == pytest.approx(0.6875, abs=1e-12)

    def test_zero_energy(self):
        assert quantized_risk_bound(1, 1.0, 0.0) == 0.0

    def test_excess_over_pinsker(self, rng):
        for _ in range(100):
            rate, sigma2, c2 = rng.uniform(0.0, 4.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 6.0)
            excess = quantized_risk_bound(rate, sigma2, c2) - pinsker_risk(sigma2, c2)
            assert excess == pytest.approx(c2**2 * 2.0 ** (-2 * rate) / (sigma2 + c2), rel=1e-12, abs=1e-15)

    def test_decreasing_in_rate(self):
        values = [quantized_risk_bound(b, 1.0, 3.0) for b in np.linspace(0, 3, 31)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_negative_rate(self):
        with pytest.raises(DomainError):
            quantized_risk_bound(-0.1, 1.0, 1.0)


class TestDistortionRate:
    def test_value(self):
        assert distortion_rate_gaussian(1, 2.0) == pytest.approx(0.5)


class TestRateLowerBound:
    @pytest.mark.parametrize("rate", [0.25, 0.5, 1.0, 1.5, 3.0])
    def test_inverts_risk_bound(self, rate):
        D = quantized_risk_bound(rate, 1.0, 2.0)
        assert rate_lower_bound(D, 1.0, 2.0) == pytest.approx(rate, rel=1e-9)

    def test_inverts_random_triples(self, rng):
        for _ in range(100):
            rate, sigma2, c2 = rng.uniform(0.1, 3.0), rng.uniform(0.5, 2.0), rng.uniform(0.5, 6.0)
            D = quantized_risk_bound(rate, sigma2, c2)
            assert rate_lower_bound(D, sigma2, c2) == pytest.approx(rate, rel=1e-12)

    def test_zero_at_or_above_c2(self):
        assert rate_lower_bound(2.0, 1.0, 2.0) == 0.0
        assert rate_lower_bound(5.0, 1.0, 2.0) == 0.0

    def test_at_pinsker_is_infinite_rate(self):
        with pytest.raises(DomainError):
            rate_lower_bound(pinsker_risk(1.0, 2.0), 1.0, 2.0)


class TestDistortion:
    def test_value(self):
        assert distortion([1.0, 2.0], [0.0, 0.0]) == pytest.approx(2.5)

    def test_length_mismatch(self):
        with pytest.raises(UsageError):
            distortion([1.0, 2.0], [1.0])


class TestTailBounds:
    def test_chi2(self):
        assert chi2_mean_tail_bound(8, 0.5) == pytest.approx(2 * math.exp(-0.25))

    @pytest.mark.parametrize("t", [0.0, 1.0, 1.5])
    def test_chi2_outside_unit_interval(self, t):
        with pytest.raises(DomainError):
            chi2_mean_tail_bound(8, t)

    def test_bhat_without_signal_keeps_chi2_part(self):
        assert bhat_concentration_bound(16, 1.0, 1.0, 0.0) == pytest.approx(2 * math.exp(-0.5))

    def test_bhat_signal_adds_mean_term(self):
        assert bhat_concentration_bound(16, 1.0, 1.0, 1.0) > bhat_concentration_bound(16, 1.0, 1.0, 0.0)

    def test_orthogonality(self):
        assert orthogonality_tail(4, 0.5, 1.0) == pytest.approx(2 * 0.75)

    def test_prior_tail(self):
        assert prior_tail_bound(8, math.sqrt(0.5)) == pytest.approx(2 * math.exp(-1.0))


class TestSphereDensity:
    def test_uniform_in_three_dimensions(self):
        np.testing.assert_allclose(sphere_inner_density(np.array([-0.5, 0.0, 0.7]), 3), 0.5, atol=1e-12)

    def test_zero_outside(self):
        assert sphere_inner_density(1.2, 5) == 0.0
        assert sphere_inner_density(-1.0, 5) == 0.0

    @pytest.mark.parametrize("n", [2, 3, 5, 10, 50, 400, 4096])
    def test_normalization_and_second_moment(self, n):
        assert sphere_inner_moment(0, n) == pytest.approx(1.0, abs=1e-12)
        assert sphere_inner_moment(2, n) == pytest.approx(1.0 / n, rel=1e-10)

    @pytest.mark.parametrize("n", [3, 9, 40])
    def test_fourth_moment(self, n):
        assert sphere_inner_moment(4, n) == pytest.approx(3.0 / (n * (n + 2)), rel=1e-10)

    def test_fourth_moment_matches_density_integral(self):
        from scipy import integrate
        value, _ = integrate.quad(lambda r: r**4 * sphere_inner_density(r, 12), -1.0, 1.0)
        assert sphere_inner_moment(4, 12) == pytest.approx(value, rel=1e-8)

    def test_odd_moment_vanishes(self):
        assert sphere_inner_moment(1, 7) == 0.0
        assert sphere_inner_moment(3, 400) == 0.0

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            sphere_inner_moment(-2, 5)

    def test_cdf(self):
        assert sphere_inner_cdf(0.0, 9) == pytest.approx(0.5)
        assert sphere_inner_cdf(0.4, 3) == pytest.approx(0.7)
        assert sphere_inner_cdf(1.5, 3) == pytest.approx(1.0)

    def test_cdf_matches_density_integral(self):
        from scipy import integrate
        mass, _ = integrate.quad(lambda r: sphere_inner_density(r, 12), -1.0, 0.3)
        assert sphere_inner_cdf(0.3, 12) == pytest.approx(mass, abs=1e-9)

    def test_dimension_one_rejected(self):
        with pytest.raises(DomainError):
            sphere_inner_density(0.1, 1)


class TestExtremeAngle:
    def test_limit(self):
        assert extreme_angle_limit(1) == pytest.approx(math.sqrt(0.75))
        assert extreme_angle_limit(0) == 0.0

    def test_single_codeword_mean_is_zero(self):
        assert expected_max_inner(6, 1) == pytest.approx(0.0, abs=1e-6)

    def test_two_uniform_draws(self):
        # n = 3: inner products are uniform on [-1, 1]
        assert expected_max_inner(3, 2) == pytest.approx(1 / 3, abs=1e-6)

    def test_grows_with_count(self):
        values = [expected_max_inner(16, 2**k) for k in (2, 8, 16)]
        assert values == sorted(values)
        assert values[-1] < 1.0


class TestSupplementalFormulas:
    def test_effective_rate(self):
        assert effective_rate(4, 2.0, 1) == pytest.approx(1.5)
        # 0.5 + log2(4)/16 + log2(16)/32
        assert effective_rate(16, 4.0, 0.5) == pytest.approx(0.75)

    def test_effective_rate_tends_to_rate(self):
        assert effective_rate(10**6, 4.0, 0.5) == pytest.approx(0.5, abs=1e-4)

    def test_adaptive_threshold(self):
        assert adaptive_risk_threshold(16, 1, 1.0, 1.0, 0.0) == pytest.approx(0.625)
        assert adaptive_risk_threshold(16, 1, 1.0, 1.0, 2.0) == pytest.approx(0.625 + 2 * math.sqrt(math.log(16) / 16))

    def test_achieving_noise_variance(self):
        assert achieving_noise_variance(0.75, 1.0, 1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("D", [0.5, 0.2, 1.0, 1.3])
    def test_testdist_outside_interval(self, D):
        with pytest.raises(DomainError):
            achieving_noise_variance(D, 1.0, 1.0)
