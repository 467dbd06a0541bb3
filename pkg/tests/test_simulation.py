"""Scenario engine: determinism, reset mechanics, stream separation, consistency."""

import numpy as np
import pytest

from tailpool.simulation import (
    LinearTsConfig,
    ScenarioConfig,
    derived_stream,
    gen_gaussian_panel,
    gen_linear_ts,
    linear_ts_run,
    run_monte_carlo,
    run_scenario,
)


class TestScenarioConfig:
    def test_defaults(self):
        cfg = ScenarioConfig(m=5, alpha_post=1.5)
        assert cfg.shock_period == 2
        assert cfg.burn_in == 2
        assert cfg.horizon == 12
        assert cfg.seed == 0
        assert cfg.regime_mode == "full_history"
        assert cfg.estimate_rule == "posterior_mean"

    def test_invariants(self):
        with pytest.raises(ValueError):
            ScenarioConfig(m=1, alpha_post=1.5)
        with pytest.raises(ValueError):
            ScenarioConfig(m=3, alpha_post=-1.0)
        with pytest.raises(ValueError):
            ScenarioConfig(m=3, alpha_post=1.5, shock_period=1, burn_in=2)
        with pytest.raises(ValueError):
            ScenarioConfig(m=3, alpha_post=1.5, horizon=2, shock_period=2)
        with pytest.raises(ValueError):
            ScenarioConfig(m=3, alpha_post=1.5, regime_mode="other")


class TestRunScenario:
    def test_reset_shape_bookkeeping(self):
        cfg = ScenarioConfig(
            m=2, alpha_post=1.5, horizon=4, regime_mode="reset_at_shock", shock_period=2
        )
        run = run_scenario(cfg, methods=("mean",))
        assert run.shapes[:, 3].tolist() == [2.0, 2.0]
        for t in range(2, 4):
            assert np.all(run.shapes[:, t] == t - 2 + 1)

    def test_full_history_shape_bookkeeping(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, horizon=6)
        run = run_scenario(cfg, methods=("mean",))
        for t in range(6):
            assert np.all(run.shapes[:, t] == t + 1)

    def test_truth_has_single_jump(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, alpha_pre=3.0, horizon=8)
        run = run_scenario(cfg, methods=("mean",))
        jumps = np.count_nonzero(np.diff(run.truth.values))
        assert jumps == 1
        assert run.truth.values[cfg.shock_period] == 1.5

    def test_determinism(self):
        cfg = ScenarioConfig(m=4, alpha_post=1.2, horizon=9, seed=123)
        a = run_scenario(cfg, replication=5)
        b = run_scenario(cfg, replication=5)
        assert np.array_equal(a.estimates, b.estimates)
        for name in a.pooled:
            np.testing.assert_array_equal(a.pooled[name], b.pooled[name])
        np.testing.assert_array_equal(a.full_info, b.full_info)

    def test_stream_separation(self):
        cfg = ScenarioConfig(m=6, alpha_post=1.5, horizon=5, seed=9)
        run = run_scenario(cfg, methods=("mean",))
        assert len(set(run.stream_ids)) == cfg.m
        # distinct replications and experts give distinct identifiers
        ids = {derived_stream(9, 0, rep, i)[1] for rep in range(4) for i in range(6)}
        assert len(ids) == 24

    def test_cross_expert_independence_of_draws(self):
        cfg = ScenarioConfig(m=2, alpha_post=1.5, horizon=40, seed=1)
        run = run_scenario(cfg, methods=("mean",))
        increments = np.diff(run.rates, axis=1)
        corr = np.corrcoef(increments[0], increments[1])[0, 1]
        assert abs(corr) < 0.35

    def test_usable_suffix_under_mode_rule(self):
        # the posterior mode needs two observations, so period 0 is undefined
        # and, after a reset, so is the shock period itself
        cfg = ScenarioConfig(
            m=3,
            alpha_post=1.5,
            horizon=7,
            regime_mode="reset_at_shock",
            estimate_rule="posterior_mode",
        )
        run = run_scenario(cfg, methods=("mean",))
        assert np.all(np.isnan(run.estimates[:, cfg.shock_period]))
        assert run.first_usable == cfg.shock_period + 1
        assert np.all(np.isnan(run.pooled["mean"][: cfg.shock_period + 1]))
        assert np.all(np.isfinite(run.pooled["mean"][cfg.shock_period + 1 :]))

    def test_full_info_tracks_post_shock_union(self):
        cfg = ScenarioConfig(m=4, alpha_post=1.5, horizon=8, regime_mode="reset_at_shock")
        run = run_scenario(cfg, methods=("mean",))
        t = 5
        shape_union = 4 * (t - 2 + 1)
        rate_union = float(np.sum(run.rates[:, t]))
        assert run.full_info[t] == pytest.approx(shape_union / rate_union)
        assert np.all(np.isnan(run.full_info[:2]))

    def test_weight_methods_recorded(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, horizon=8)
        run = run_scenario(cfg)
        assert set(run.weights) >= {"pioneer_angle", "pioneer_distance", "granger", "lagged_correlation"}
        w = run.weights["pioneer_angle"]
        np.testing.assert_allclose(np.nansum(w, axis=0), 1.0, atol=1e-12)
        assert np.all(np.isnan(run.weights["granger"][:, :3]))


class TestMonteCarlo:
    def test_replication_floor(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, horizon=6)
        with pytest.raises(ValueError):
            run_monte_carlo(cfg, 1)

    def test_report_shape(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, horizon=8)
        methods = ("pioneer_angle", "mean", "minimum")
        report = run_monte_carlo(cfg, 10, methods=methods)
        assert report.rmse_by_period.shape == (3, 8)
        assert report.mc_se.shape == (3, 8)
        assert report.replications == 10
        assert set(report.stability) == set(methods)

    def test_thread_count_does_not_change_results(self):
        cfg = ScenarioConfig(m=3, alpha_post=1.5, horizon=8, seed=21)
        a = run_monte_carlo(cfg, 12, methods=("pioneer_angle", "mean"), threads=1)
        b = run_monte_carlo(cfg, 12, methods=("pioneer_angle", "mean"), threads=4)
        np.testing.assert_array_equal(a.pooled_reps, b.pooled_reps)
        np.testing.assert_array_equal(a.rmse_by_period, b.rmse_by_period)

    def test_mean_pool_mode_rule_unbiased_at_truth(self):
        # the posterior mode (n-1)/rate is exactly unbiased for the tail
        # index, so the cross-replication mean of the mean pool sits at the
        # post-shock truth
        cfg = ScenarioConfig(
            m=5,
            alpha_post=1.5,
            horizon=12,
            regime_mode="reset_at_shock",
            estimate_rule="posterior_mode",
            seed=2,
        )
        report = run_monte_carlo(cfg, 1000, methods=("mean",))
        level = float(np.mean(report.pooled_reps[:, 0, 11]))
        assert level == pytest.approx(1.5, abs=0.05)

    def test_mean_pool_mean_rule_known_bias(self):
        # the posterior mean n/rate is biased by n/(n-1): with ten post-shock
        # observations the mean pool centres on 10/9 * 1.5
        cfg = ScenarioConfig(
            m=5,
            alpha_post=1.5,
            horizon=12,
            regime_mode="reset_at_shock",
            estimate_rule="posterior_mean",
            seed=2,
        )
        report = run_monte_carlo(cfg, 1000, methods=("mean",))
        level = float(np.mean(report.pooled_reps[:, 0, 11]))
        assert level == pytest.approx(1.5 * 10.0 / 9.0, abs=0.05)

    def test_more_replications_shrink_mc_se(self):
        cfg = ScenarioConfig(m=4, alpha_post=1.5, horizon=8, seed=5)
        small = run_monte_carlo(cfg, 300, methods=("mean",))
        large = run_monte_carlo(cfg, 600, methods=("mean",))
        t = 6
        assert large.rmse_by_period[0, t] == pytest.approx(
            small.rmse_by_period[0, t], rel=0.2
        )
        ratio = small.mc_se[0, t] / large.mc_se[0, t]
        assert 1.1 <= ratio <= 1.9  # about sqrt(2)


class TestGaussianPanel:
    def test_zero_noise_pins_estimates(self):
        run = gen_gaussian_panel(4, 6, mu=2.0, sd=0.0, seed=0)
        assert np.all(run.estimates == 2.0)
        np.testing.assert_allclose(run.pooled["mean"], 2.0)

    def test_shapes_and_finiteness(self):
        run = gen_gaussian_panel(5, 12, mu=1.5, sd=1.0, seed=3)
        assert run.estimates.shape == (5, 12)
        assert np.all(np.isfinite(run.estimates))
        assert run.truth.values.tolist() == [1.5] * 12

    def test_running_mean_construction(self):
        run = gen_gaussian_panel(2, 5, mu=0.5, sd=1.0, seed=8)
        rng, _ = derived_stream(8, 1, 0, 0)
        draws = rng.normal(0.5, 1.0, 5)
        np.testing.assert_allclose(run.estimates[0], np.cumsum(draws) / np.arange(1, 6))


class TestLinearTs:
    def test_zero_noise_is_identically_zero(self):
        x, y, z = gen_linear_ts(LinearTsConfig(noise_sd=0.0, horizon=10))
        assert np.all(x == 0.0) and np.all(y == 0.0) and np.all(z == 0.0)

    def test_decoupled_when_cross_terms_vanish(self):
        cfg = LinearTsConfig(b=0.0, d=0.0, e=0.0, horizon=30, seed=2)
        x, y, z = gen_linear_ts(cfg)
        rng, _ = derived_stream(2, 2, 0, 0)
        eps = rng.normal(0.0, 1.0, 30)
        np.testing.assert_allclose(x, np.concatenate([[0.0], np.cumsum(eps[1:])]))
        # y and z are AR(1) in their own noise only
        rng_nu, _ = derived_stream(2, 2, 0, 1)
        nu = rng_nu.normal(0.0, 1.0, 30)
        expected_y = np.zeros(30)
        for t in range(1, 30):
            expected_y[t] = 0.2 * expected_y[t - 1] + nu[t]
        np.testing.assert_allclose(y, expected_y)

    def test_coefficient_validation(self):
        with pytest.raises(ValueError):
            LinearTsConfig(a=1.0)
        with pytest.raises(ValueError):
            LinearTsConfig(c=-1.2)
        with pytest.raises(ValueError):
            LinearTsConfig(noise_sd=-0.1)

    def test_run_produces_weights(self):
        run = linear_ts_run(LinearTsConfig(horizon=20, seed=4))
        assert set(run.weights) == {"pioneer_angle", "granger", "lagged_correlation"}
        assert run.estimates.shape == (3, 20)
