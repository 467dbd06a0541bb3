"""Conjugate posterior mechanics and the quantile oracle."""

import math

import numpy as np
import pytest
from scipy.special import gammainc

from tailpool.experts import (
    UNINFORMATIVE,
    ExpertPosterior,
    InsufficientDataError,
    point_estimate,
    posterior_quantile,
    posterior_update,
    posterior_update_many,
)
from tailpool.pareto import sample_losses


def bisect_gamma_quantile(shape, rate, p, tol=1e-12):
    """Independent oracle: bisection on the regularized incomplete gamma CDF."""
    lo, hi = 0.0, 1.0
    while gammainc(shape, hi) < p:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gammainc(shape, mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(hi, 1.0):
            break
    return 0.5 * (lo + hi) / rate


class TestPosteriorUpdate:
    def test_unit_log_increment(self):
        post = posterior_update(UNINFORMATIVE, math.e)
        assert post.shape == 1.0
        assert post.rate == pytest.approx(1.0)

    def test_second_update(self):
        post = posterior_update(ExpertPosterior(1.0, 1.0), math.e**2)
        assert post.shape == 2.0
        assert post.rate == pytest.approx(3.0)

    def test_threshold_loss_adds_nothing_to_rate(self):
        post = posterior_update(ExpertPosterior(3.0, 2.5), 1.0)
        assert post.shape == 4.0
        assert post.rate == 2.5

    def test_below_threshold_rejected(self):
        with pytest.raises(ValueError):
            posterior_update(UNINFORMATIVE, 0.5)

    def test_shape_counts_observations(self):
        rng = np.random.default_rng(0)
        losses = sample_losses(rng, 1.4, 25)
        post = posterior_update_many(UNINFORMATIVE, losses)
        assert post.shape == 25.0

    def test_order_independence(self):
        rng = np.random.default_rng(1)
        losses = list(sample_losses(rng, 0.9, 40))
        a = posterior_update_many(UNINFORMATIVE, losses)
        for perm_seed in range(5):
            perm = np.random.default_rng(perm_seed).permutation(len(losses))
            b = posterior_update_many(UNINFORMATIVE, [losses[i] for i in perm])
            assert b.shape == a.shape
            assert b.rate == pytest.approx(a.rate, rel=1e-12)


class TestPointEstimate:
    def test_mean_values(self):
        assert point_estimate(ExpertPosterior(2.0, 3.0)) == pytest.approx(2.0 / 3.0)
        assert point_estimate(ExpertPosterior(1.0, 1.0)) == 1.0

    def test_mode_rule(self):
        assert point_estimate(ExpertPosterior(3.0, 2.0), rule="mode") == 1.0
        with pytest.raises(InsufficientDataError):
            point_estimate(ExpertPosterior(1.0, 1.0), rule="mode")

    def test_undefined_before_data(self):
        with pytest.raises(InsufficientDataError):
            point_estimate(UNINFORMATIVE)
        with pytest.raises(InsufficientDataError):
            point_estimate(ExpertPosterior(1.0, 0.0))

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            point_estimate(ExpertPosterior(2.0, 1.0), rule="map")

    def test_consistency_large_sample(self):
        # E[ln x] = 1/alpha, so shape/rate -> alpha; n = 1e5 pins it within 0.02
        rng = np.random.default_rng(2)
        losses = sample_losses(rng, 1.5, 100_000)
        post = ExpertPosterior(losses.size, float(np.sum(np.log(losses))))
        assert point_estimate(post) == pytest.approx(1.5, abs=0.02)

    def test_consistency_across_alpha_range(self):
        # at n = 1e4, |estimate - alpha| < 0.05 across the range of interest
        for seed, alpha in enumerate((0.5, 1.0, 1.5, 2.0, 3.0)):
            rng = np.random.default_rng(100 + seed)
            losses = sample_losses(rng, alpha, 10_000)
            post = ExpertPosterior(losses.size, float(np.sum(np.log(losses))))
            assert abs(point_estimate(post) - alpha) < 0.05


class TestPosteriorQuantile:
    def test_exponential_median(self):
        assert posterior_quantile(ExpertPosterior(1.0, 1.0), 0.5) == pytest.approx(math.log(2.0))

    def test_exponential_cdf_point(self):
        assert posterior_quantile(ExpertPosterior(1.0, 1.0), 1.0 - math.exp(-1.0)) == pytest.approx(1.0)

    def test_matches_bisection_oracle(self):
        q = posterior_quantile(ExpertPosterior(5.0, 2.0), 0.9)
        assert q == pytest.approx(bisect_gamma_quantile(5.0, 2.0, 0.9), rel=1e-8)

    def test_random_triples_against_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            shape = float(rng.uniform(1.0, 40.0))
            rate = float(rng.uniform(0.1, 10.0))
            p = float(rng.uniform(0.01, 0.99))
            q = posterior_quantile(ExpertPosterior(shape, rate), p)
            oracle = bisect_gamma_quantile(shape, rate, p)
            assert abs(q - oracle) <= 1e-6 * max(1.0, abs(oracle))

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            posterior_quantile(ExpertPosterior(2.0, 1.0), 0.0)
        with pytest.raises(ValueError):
            posterior_quantile(ExpertPosterior(2.0, 1.0), 1.0)
        with pytest.raises(InsufficientDataError):
            posterior_quantile(ExpertPosterior(0.5, 1.0), 0.5)

    def test_negative_parameters_rejected(self):
        with pytest.raises(ValueError):
            ExpertPosterior(-1.0, 0.0)
