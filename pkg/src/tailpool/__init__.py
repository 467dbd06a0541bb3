"""Pooling expert estimates of a Pareto tail index.

Simulates Bayesian insurance experts learning a fat-tailed loss
distribution through private samples, weights their estimates by
pioneer-detection (who moved first toward where the consensus is heading),
benchmarks that weighting against classical and lead-detection pooling
rules by Monte Carlo, and turns the resulting estimator variances into a
supervisor's pool-versus-audit cost-benefit comparison.
"""

__version__ = "0.1.0"

from .benchmarks import (
    PoolingMethod,
    ar1_forecast,
    granger_weights,
    lagged_corr_weights,
    mean_pool,
    median_pool,
    min_pool,
    relative_rmse,
    vincentize,
)
from .experts import (
    UNINFORMATIVE,
    ExpertPosterior,
    InsufficientDataError,
    point_estimate,
    posterior_quantile,
    posterior_update,
)
from .metrics import MetricsReport, post_shock_window, rmse, stability_stats
from .panel import EstimatePanel
from .pareto import (
    ParetoLaw,
    TruthSeries,
    expected_indemnity,
    pareto_mean,
    pareto_survival,
    premium_mean_variance,
    sample_losses,
)
from .pioneer import (
    PioneerConfig,
    WeightSeries,
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
from .simulation import (
    LinearTsConfig,
    ScenarioConfig,
    SimulationRun,
    gen_gaussian_panel,
    gen_linear_ts,
    run_monte_carlo,
    run_scenario,
)
from .welfare import (
    SigmaRatioFit,
    WelfareConfig,
    WelfareCurve,
    intervention_comparison,
    run_welfare_pipeline,
    sigma_ratio_fit,
    utility_variance_delta,
)

__all__ = [
    "__version__",
    "EstimatePanel",
    "ExpertPosterior",
    "InsufficientDataError",
    "LinearTsConfig",
    "MetricsReport",
    "ParetoLaw",
    "PioneerConfig",
    "PoolingMethod",
    "ScenarioConfig",
    "SigmaRatioFit",
    "SimulationRun",
    "TruthSeries",
    "UNINFORMATIVE",
    "WeightSeries",
    "WelfareConfig",
    "WelfareCurve",
    "ar1_forecast",
    "distance_dummy",
    "expected_indemnity",
    "gen_gaussian_panel",
    "gen_linear_ts",
    "granger_weights",
    "intervention_comparison",
    "lagged_corr_weights",
    "mean_pool",
    "median_pool",
    "min_pool",
    "orientation_angles",
    "orientation_dummy",
    "others_center",
    "pareto_mean",
    "pareto_survival",
    "pioneer_pool",
    "pioneer_weights",
    "point_estimate",
    "pooled_series",
    "post_shock_window",
    "posterior_quantile",
    "posterior_update",
    "premium_mean_variance",
    "raw_pioneer_score",
    "relative_rmse",
    "rmse",
    "run_monte_carlo",
    "run_scenario",
    "run_welfare_pipeline",
    "sample_losses",
    "sigma_ratio_fit",
    "stability_stats",
    "utility_variance_delta",
    "vincentize",
    "weight_series",
]
