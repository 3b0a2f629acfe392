import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fockcm import Distribution, InvalidModel, TimingModel, sample_times, trajectory_rng, uncorrelated_sample_times
from fockcm.stochastic import sample_many


class TestTimingModel:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(tau_mean=0.0),
            dict(tau_mean=1.0, spread=-0.1),
            dict(tau_mean=1.0, length_ratio=0.0),
            dict(tau_mean=1.0, spread=1.0),
            dict(tau_mean=1.0, distribution="lorentzian"),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidModel):
            TimingModel(**kwargs)

    def test_gaussian_allows_wide_spread(self):
        TimingModel(1.0, 3.0, distribution="gaussian")


class TestSampling:
    def test_zero_spread_is_exact(self):
        model = TimingModel(1.2345, 0.0, 2.0)
        rng = trajectory_rng(7)
        for _ in range(20):
            s = sample_times(model, rng)
            assert s.tau == 1.2345
            assert s.t_final_pulse == 2.0 * 1.2345
        u = uncorrelated_sample_times(model, trajectory_rng(7))
        assert (u.tau, u.t_final_pulse) == (1.2345, 2.0 * 1.2345)

    def test_uniform_statistics(self):
        model = TimingModel(1.0, 0.5)
        taus, _ = sample_many(model, trajectory_rng(3), 10**6)
        sigma = 0.5 / math.sqrt(3)
        assert abs(taus.mean() - 1.0) < 3 * sigma / math.sqrt(taus.size)
        assert taus.min() >= 0.5 and taus.max() <= 1.5
        # variance of a uniform variable; standard error of the sample variance is sigma^2 sqrt(4/5 / N)
        assert abs(taus.var() - sigma**2) < 5 * sigma**2 * math.sqrt(0.8 / taus.size)

    def test_gaussian_statistics(self):
        model = TimingModel(5.0, 0.5, distribution=Distribution.GAUSSIAN)
        taus, _ = sample_many(model, trajectory_rng(4), 10**6)
        se = 0.5 / math.sqrt(taus.size)
        assert abs(taus.mean() - 5.0) < 5 * se
        assert abs(taus.std() - 0.5) < 5 * 0.5 / math.sqrt(2 * taus.size)

    def test_gaussian_truncated_positive(self):
        taus, _ = sample_many(TimingModel(0.1, 1.0, distribution="gaussian"), trajectory_rng(5), 10**4)
        assert taus.min() > 0.0

    @given(st.floats(0.01, 10.0), st.floats(0.0, 0.99), st.floats(0.1, 5.0), st.integers(0, 2**31))
    def test_correlation_exact(self, tau_mean, frac, ratio, seed):
        model = TimingModel(tau_mean, frac * tau_mean, ratio)
        rng = trajectory_rng(seed)
        for _ in range(10):
            s = sample_times(model, rng)
            assert s.t_final_pulse == ratio * s.tau
            assert s.tau > 0

    def test_length_ratio_two_and_a_half(self):
        model = TimingModel(1.0, 0.3, 2.5)
        rng = trajectory_rng(11)
        for _ in range(100):
            s = sample_times(model, rng)
            assert s.t_final_pulse / s.tau == pytest.approx(2.5, rel=1e-15)

    def test_uncorrelated_ratio_varies(self):
        model = TimingModel(1.0, 0.3, 1.0)
        taus, pulses = sample_many(model, trajectory_rng(2), 200, correlated=False)
        assert np.unique(np.round(pulses / taus, 12)).size > 100

    def test_determinism(self):
        model = TimingModel(1.0, 0.4)
        a = sample_many(model, trajectory_rng(99, 3), 1000)
        b = sample_many(model, trajectory_rng(99, 3), 1000)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])

    def test_streams_are_independent(self):
        model = TimingModel(1.0, 0.4)
        a, _ = sample_many(model, trajectory_rng(99, 0), 100)
        b, _ = sample_many(model, trajectory_rng(99, 1), 100)
        assert not np.array_equal(a, b)

    def test_trajectory_rng_xor(self):
        x = trajectory_rng(12, 5).random(3)
        y = np.random.default_rng(12 ^ 5).random(3)
        np.testing.assert_array_equal(x, y)
