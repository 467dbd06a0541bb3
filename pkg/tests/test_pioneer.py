"""Pioneer weighting: figure-derived cases, the brute-force oracle, and invariances."""

import math

import numpy as np
import pytest

from tailpool.panel import EstimatePanel
from tailpool.pioneer import (
    MissingPreviousWeightsError,
    NoPriorPeriodError,
    PioneerConfig,
    distance_dummy,
    orientation_angles,
    orientation_dummy,
    others_center,
    pioneer_pool,
    pioneer_weights,
    pooled_series,
    raw_pioneer_score,
    weight_series,
)

from oracles import bruteforce_weight_series, bruteforce_weights

# Two-expert trajectories traced from the illustrative charts: expert 0 is
# the candidate pioneer, expert 1 plays the consensus of the others.
CONVERGING = np.array([[10.0, 7.5, 5.0], [17.0, 14.0, 9.0]])
REVERSAL = np.array([[10.0, 2.0, 4.0], [17.0, 12.5, 6.0]])
DISTANCE_CASE = np.array([[17.0, 12.5, 6.0], [10.0, 7.5, 4.0]])


def panel(values):
    return EstimatePanel(np.asarray(values, dtype=float))


class TestOthersCenter:
    def test_single_other(self):
        p = panel([[5.0, 5.0], [14.0, 14.0]])
        assert others_center(p, 0, 1) == 14.0

    def test_mean_and_median(self):
        p = panel([[5.0], [1.0], [2.0], [9.0]])
        assert others_center(p, 0, 0, "mean") == pytest.approx(4.0)
        assert others_center(p, 0, 0, "median") == 2.0

    def test_even_median_midpoint(self):
        p = panel([[5.0], [1.0], [3.0]])
        assert others_center(p, 0, 0, "median") == 2.0


class TestDistanceDummy:
    def test_figure_gap_reduction(self):
        # gaps 5 -> 2 between the two series
        assert distance_dummy(panel(DISTANCE_CASE), 0, 2) is True

    def test_converging_case(self):
        # gaps 6.5 -> 4
        assert distance_dummy(panel(CONVERGING), 0, 2) is True

    def test_equal_gaps_fail_strictness(self):
        p = panel([[1.0, 2.0], [3.0, 4.0]])
        assert distance_dummy(p, 0, 1) is False

    def test_no_prior_period(self):
        with pytest.raises(NoPriorPeriodError):
            distance_dummy(panel(CONVERGING), 0, 0)


class TestOrientation:
    def test_converging_angles(self):
        ang = orientation_angles(panel(CONVERGING), 0, 2)
        assert ang.theta_expert == pytest.approx(math.atan(2.5))
        assert ang.theta_others == pytest.approx(math.atan(5.0))
        assert ang.toward is True
        assert orientation_dummy(panel(CONVERGING), 0, 2) is True

    def test_flat_others_never_toward(self):
        p = panel([[5.0, 4.0], [9.0, 9.0]])
        ang = orientation_angles(p, 0, 1)
        assert ang.theta_others == 0.0
        assert ang.toward is False
        assert orientation_dummy(p, 0, 1) is False

    def test_reversal_still_pioneer(self):
        # expert 0 reverses direction yet the others keep descending toward
        # his previous estimate
        ang = orientation_angles(panel(REVERSAL), 0, 2)
        assert ang.theta_others == pytest.approx(math.atan(6.5))
        assert ang.theta_expert == pytest.approx(math.atan(2.0))
        assert ang.toward is True
        assert orientation_dummy(panel(REVERSAL), 0, 2) is True

    def test_moving_away_fails(self):
        # others move up, away from expert 0 sitting below
        p = panel([[5.0, 5.0], [9.0, 12.0]])
        assert orientation_dummy(p, 0, 1) is False

    def test_equal_angles_fail_strictness(self):
        p = panel([[6.0, 4.0], [10.0, 8.0]])
        ang = orientation_angles(p, 0, 1)
        assert ang.theta_expert == ang.theta_others
        assert orientation_dummy(p, 0, 1) is False

    def test_step_scales_angles(self):
        wide = EstimatePanel(CONVERGING, period_step=2.0)
        ang = orientation_angles(wide, 0, 2)
        assert ang.theta_others == pytest.approx(math.atan(2.5))


class TestRawScore:
    def test_angle_kind_value(self):
        score = raw_pioneer_score(panel(CONVERGING), 0, 2, PioneerConfig())
        expected = math.atan(5.0) / (math.atan(5.0) + math.atan(2.5))
        assert score == pytest.approx(expected)
        assert score == pytest.approx(0.5357, abs=5e-4)

    def test_distance_kind_value(self):
        cfg = PioneerConfig(weight_kind="distance")
        score = raw_pioneer_score(panel(CONVERGING), 0, 2, cfg)
        assert score == pytest.approx(5.0 / 7.5)

    def test_failed_dummy_scores_zero(self):
        # expert 1 (the upper series) is converged upon, not pioneering
        assert raw_pioneer_score(panel(CONVERGING), 1, 2, PioneerConfig()) == 0.0

    def test_expert_frozen_gets_full_ratio(self):
        p = panel([[5.0, 5.0], [9.0, 7.0]])
        score = raw_pioneer_score(p, 0, 1, PioneerConfig())
        assert score == 1.0


class TestWeights:
    def test_initial_uniform(self):
        p = panel(np.tile([[1.0], [2.0], [3.0], [4.0]], (1, 2)))
        assert pioneer_weights(p, 0).tolist() == [0.25, 0.25, 0.25, 0.25]

    def test_single_pioneer_takes_all(self):
        w = pioneer_weights(panel(CONVERGING), 2)
        assert w.tolist() == [1.0, 0.0]

    def test_diverging_pair_carries_previous(self):
        p = panel([[5.0, 4.0], [9.0, 11.0]])
        w = pioneer_weights(p, 1, previous_weights=[0.7, 0.3])
        assert w.tolist() == [0.7, 0.3]

    def test_carry_without_history_is_contract_violation(self):
        p = panel([[5.0, 4.0], [9.0, 11.0]])
        with pytest.raises(MissingPreviousWeightsError):
            pioneer_weights(p, 1)

    def test_uniform_fallback(self):
        p = panel([[5.0, 4.0], [9.0, 11.0]])
        cfg = PioneerConfig(fallback="uniform")
        assert pioneer_weights(p, 1, cfg).tolist() == [0.5, 0.5]

    def test_weights_are_probability_vectors(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            m, horizon = int(rng.integers(2, 7)), int(rng.integers(2, 9))
            p = panel(rng.uniform(0.5, 5.0, (m, horizon)))
            series = weight_series(p)
            assert np.all(series.weights >= 0.0)
            np.testing.assert_allclose(series.weights.sum(axis=0), 1.0, atol=1e-12)

    def test_pooled_endpoints(self):
        p = panel([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        assert pioneer_pool(p, 0) == pytest.approx(2.0)

    def test_pooled_degenerate_weight(self):
        assert pioneer_pool(panel(CONVERGING), 2) == pytest.approx(5.0)

    def test_pool_with_history(self):
        p = panel([[5.0, 4.0], [9.0, 11.0]])
        pooled = pioneer_pool(p, 1, weight_history=[[1.0, 0.0]])
        assert pooled == pytest.approx(4.0)

    def test_flags_match_positive_scores(self):
        rng = np.random.default_rng(1)
        p = panel(rng.uniform(0.5, 5.0, (4, 8)))
        series = weight_series(p)
        for t in range(1, 8):
            for i in range(4):
                score = raw_pioneer_score(p, i, t, PioneerConfig())
                assert series.pioneer_flags[i, t] == (score > 0.0)


class TestOracleEquivalence:
    def test_random_panels_exact(self):
        rng = np.random.default_rng(42)
        for case in range(50):
            values = rng.uniform(0.5, 5.0, (3, 5))
            p = panel(values)
            for kind in ("angle", "distance"):
                for center in ("mean", "median"):
                    cfg = PioneerConfig(center=center, weight_kind=kind)
                    mine = weight_series(p, cfg).weights
                    oracle = bruteforce_weight_series(values.tolist(), center=center, kind=kind)
                    for t in range(5):
                        assert mine[:, t].tolist() == oracle[t], (case, kind, center, t)

    def test_single_period_exact(self):
        rng = np.random.default_rng(43)
        for _ in range(50):
            values = rng.uniform(0.5, 5.0, (4, 3))
            w = pioneer_weights(panel(values), 2, previous_weights=[0.25] * 4)
            oracle = bruteforce_weights(values.tolist(), 2, previous=[0.25] * 4)
            assert w.tolist() == oracle


class TestInvariances:
    def test_affine_invariance_of_identification(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            values = rng.uniform(0.5, 5.0, (4, 6))
            a = float(rng.uniform(0.1, 10.0))
            b = float(rng.uniform(-5.0, 5.0))
            p1, p2 = panel(values), panel(a * values + b)
            for t in range(1, 6):
                for i in range(4):
                    assert distance_dummy(p1, i, t) == distance_dummy(p2, i, t)
                    assert orientation_dummy(p1, i, t) == orientation_dummy(p2, i, t)
            f1 = weight_series(p1).pioneer_flags
            f2 = weight_series(p2).pioneer_flags
            assert np.array_equal(f1, f2)

    def test_distance_ratio_scale_invariant(self):
        rng = np.random.default_rng(3)
        cfg = PioneerConfig(weight_kind="distance")
        for _ in range(50):
            values = rng.uniform(0.5, 5.0, (3, 4))
            a = float(rng.uniform(0.2, 8.0))
            w1 = weight_series(panel(values), cfg).weights
            w2 = weight_series(panel(a * values), cfg).weights
            np.testing.assert_allclose(w1, w2, atol=1e-12)

    def test_pooled_estimate_commutes_with_shift(self):
        rng = np.random.default_rng(4)
        for kind in ("angle", "distance"):
            cfg = PioneerConfig(weight_kind=kind)
            for _ in range(50):
                values = rng.uniform(0.5, 5.0, (4, 6))
                b = float(rng.uniform(-3.0, 3.0))
                base = pooled_series(panel(values), weight_series(panel(values), cfg))
                shifted = pooled_series(panel(values + b), weight_series(panel(values + b), cfg))
                np.testing.assert_allclose(shifted, base + b, rtol=1e-9, atol=1e-9)
