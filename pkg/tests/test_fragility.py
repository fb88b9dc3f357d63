import math

import numpy as np
import pytest

from gridres.fragility import (
    FragilityCurve,
    FragilityError,
    WindProfile,
    apply_hardening,
    failure_probability,
    sample_wind_speed,
    wind_cdf,
    wind_density,
    wind_quantile,
)

from oracles import ks_distance, weibull_cdf, weibull_mean


def weibull(shape, scale, label="custom"):
    return WindProfile(kind="weibull", shape=shape, scale_m_s=scale, label=label)


def uniform_profile(lo=0.0, hi=50.0):
    d = 1.0 / (hi - lo)
    return WindProfile(kind="empirical", knots=((lo, d), (hi, d)))


class TestWindDensity:
    def test_weibull_zero_at_origin_for_shape_above_one(self):
        assert wind_density(weibull(2.0, 10.0), 0.0) == 0.0

    def test_uniform_density_value(self):
        assert wind_density(uniform_profile(0.0, 50.0), 25.0) == pytest.approx(0.02)

    def test_weibull_closed_form(self):
        # k/lam * (x/lam)^(k-1) * exp(-(x/lam)^k) at x = lam = 10, k = 2
        expected = (2.0 / 10.0) * 1.0 * math.exp(-1.0)
        assert wind_density(weibull(2.0, 10.0), 10.0) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(0.0736, abs=5e-5)

    @pytest.mark.parametrize("profile", [weibull(2.0, 30.0), weibull(1.5, 18.0), uniform_profile()])
    def test_density_integrates_to_one(self, profile):
        xs = np.linspace(0.0, 400.0, 400001)
        ys = np.array([wind_density(profile, float(x)) for x in xs])
        assert np.trapezoid(ys, xs) == pytest.approx(1.0, abs=1e-4)

    def test_negative_speed_rejected(self):
        with pytest.raises(FragilityError):
            wind_density(weibull(2.0, 10.0), -1.0)


class TestSampling:
    def test_point_mass_always_returns_atom(self):
        profile = WindProfile(kind="empirical", knots=((25.0, 1.0),))
        rng = np.random.default_rng(1)
        for _ in range(10):
            assert sample_wind_speed(profile, rng) == 25.0

    def test_weibull_sample_mean_matches_analytic(self):
        rng = np.random.default_rng(7)
        samples = np.asarray(sample_wind_speed(weibull(2.0, 10.0), rng, size=1_000_000))
        expected = weibull_mean(2.0, 10.0)
        assert expected == pytest.approx(10.0 * math.gamma(1.5), rel=1e-12)
        assert abs(float(samples.mean()) - expected) / expected < 0.01

    def test_independent_streams_reproduce(self):
        a = sample_wind_speed(weibull(2.0, 30.0), np.random.default_rng(42), size=100)
        b = sample_wind_speed(weibull(2.0, 30.0), np.random.default_rng(42), size=100)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("shape,scale", [(2.0, 30.0), (2.0, 18.0), (2.0, 8.0)])
    def test_weibull_ks_distance(self, shape, scale):
        rng = np.random.default_rng(11)
        samples = np.asarray(sample_wind_speed(weibull(shape, scale), rng, size=100_000))
        assert ks_distance(samples, lambda x: weibull_cdf(x, shape, scale)) < 0.01

    def test_empirical_ks_distance(self):
        profile = WindProfile(kind="empirical", knots=((0.0, 0.0), (20.0, 0.05), (40.0, 0.0)))
        rng = np.random.default_rng(3)
        samples = np.asarray(sample_wind_speed(profile, rng, size=50_000))
        assert ks_distance(samples, lambda xs: np.array([wind_cdf(profile, float(x)) for x in xs])) < 0.015

    def test_quantile_inverts_cdf(self):
        for profile in (weibull(2.0, 30.0), uniform_profile(5.0, 45.0)):
            for q in (0.001, 0.2, 0.5, 0.9, 0.999):
                assert wind_cdf(profile, wind_quantile(profile, q)) == pytest.approx(q, abs=1e-9)


class TestFailureProbability:
    def test_below_critical_returns_normal_rate(self):
        c = FragilityCurve(0.01, 20.0, 60.0)
        assert failure_probability(c, 10.0) == 0.01

    def test_above_collapse_is_certain(self):
        c = FragilityCurve(0.01, 20.0, 60.0)
        assert failure_probability(c, 70.0) == 1.0

    def test_linear_midpoint(self):
        c = FragilityCurve(0.01, 20.0, 60.0)
        assert failure_probability(c, 40.0) == pytest.approx(0.505, abs=1e-12)

    def test_at_collapse_is_one(self):
        c = FragilityCurve(0.3, 20.0, 60.0)
        assert failure_probability(c, 60.0) == 1.0

    @pytest.mark.parametrize("interp", ["linear", "logistic"])
    def test_nondecreasing_and_bounded(self, interp):
        rng = np.random.default_rng(5)
        for _ in range(50):
            crit = float(rng.uniform(5.0, 40.0))
            coll = crit + float(rng.uniform(1.0, 60.0))
            c = FragilityCurve(float(rng.uniform(0.0, 0.5)), crit, coll, interp)
            xs = np.linspace(0.0, coll + 20.0, 500)
            ps = [failure_probability(c, float(x)) for x in xs]
            assert all(0.0 <= p <= 1.0 for p in ps)
            assert all(b >= a - 1e-12 for a, b in zip(ps, ps[1:]))

    def test_logistic_hits_endpoints(self):
        c = FragilityCurve(0.05, 20.0, 60.0, "logistic")
        assert failure_probability(c, 20.0) == pytest.approx(0.05)
        assert failure_probability(c, 60.0) == 1.0


class TestHardening:
    def test_zero_shift_is_identity(self):
        c = FragilityCurve(0.01, 20.0, 60.0)
        assert apply_hardening(c, 0.0) == c

    def test_shift_moves_both_thresholds(self):
        c = apply_hardening(FragilityCurve(0.01, 20.0, 60.0), 15.0)
        assert c == FragilityCurve(0.01, 35.0, 75.0)

    @pytest.mark.parametrize("interp", ["linear", "logistic"])
    def test_pointwise_dominance_on_grid(self, interp):
        base = FragilityCurve(0.01, 20.0, 60.0, interp)
        hard = apply_hardening(base, 15.0)
        for omega in np.linspace(0.0, 100.0, 2001):
            assert failure_probability(hard, float(omega)) <= failure_probability(
                base, float(omega)
            ) + 1e-15

    def test_negative_shift_rejected(self):
        with pytest.raises(FragilityError):
            apply_hardening(FragilityCurve(0.01, 20.0, 60.0), -1.0)


class TestValidation:
    def test_bad_weibull_params(self):
        with pytest.raises(FragilityError):
            WindProfile(kind="weibull", shape=-1.0, scale_m_s=10.0)
        with pytest.raises(FragilityError):
            WindProfile(kind="weibull", shape=2.0)

    def test_empirical_must_integrate_to_one(self):
        with pytest.raises(FragilityError):
            WindProfile(kind="empirical", knots=((0.0, 0.5), (10.0, 0.5)))

    def test_empirical_speeds_increasing(self):
        with pytest.raises(FragilityError):
            WindProfile(kind="empirical", knots=((10.0, 0.1), (5.0, 0.1)))

    def test_curve_threshold_order(self):
        with pytest.raises(FragilityError):
            FragilityCurve(0.01, 60.0, 20.0)

    def test_p_normal_below_one(self):
        with pytest.raises(FragilityError):
            FragilityCurve(1.0, 20.0, 60.0)

    def test_unknown_label(self):
        with pytest.raises(FragilityError):
            WindProfile(kind="weibull", shape=2.0, scale_m_s=10.0, label="storm")
