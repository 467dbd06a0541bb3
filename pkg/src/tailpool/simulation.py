"""Scenario engine: simulated expert panels and Monte Carlo replication.

Three generators share one pooling pipeline:

* ``run_scenario`` — Bayesian experts learning a Pareto tail index through
  private yearly losses, with a single unanticipated jump in the true index
  at the shock period;
* ``gen_gaussian_panel`` — the Gaussian control, where each expert's
  estimate is the running mean of private normal draws;
* ``gen_linear_ts`` — three linearly coupled time series treated as an
  expert panel, for checking that lead-lag structure is picked up.

Determinism: every random stream is derived from (seed, domain, replication,
unit) through ``numpy``'s SeedSequence, so outputs are reproducible
bit-for-bit for a given configuration regardless of evaluation order or
thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import benchmarks
from .experts import ExpertPosterior, InsufficientDataError, point_estimate
from .metrics import MetricsReport, post_shock_window, rmse_standard_error
from .panel import EstimatePanel
from .pareto import TruthSeries, sample_losses
from .pioneer import PioneerConfig, weight_series, pooled_series

__all__ = [
    "REGIME_MODES",
    "ESTIMATE_RULES",
    "DEFAULT_METHODS",
    "PANEL_METHODS",
    "ScenarioConfig",
    "LinearTsConfig",
    "SimulationRun",
    "derived_stream",
    "run_scenario",
    "run_monte_carlo",
    "report_from_pooled",
    "gen_gaussian_panel",
    "gen_linear_ts",
    "linear_ts_run",
]

REGIME_MODES = ("reset_at_shock", "full_history")
ESTIMATE_RULES = ("posterior_mean", "posterior_mode")

DEFAULT_METHODS = (
    "pioneer_angle",
    "pioneer_distance",
    "mean",
    "median",
    "minimum",
    "granger",
    "lagged_correlation",
    "vincentization",
)
# Methods computable from a bare panel (no posterior distributions needed).
PANEL_METHODS = tuple(k for k in DEFAULT_METHODS if k != "vincentization")

_DOMAIN_PARETO = 0
_DOMAIN_GAUSSIAN = 1
_DOMAIN_LINEAR_TS = 2


@dataclass(frozen=True)
class ScenarioConfig:
    """A tipping-point learning scenario.

    The true tail index sits at ``alpha_pre`` until ``shock_period`` and at
    ``alpha_post`` from then on.  Experts start from the uninformative prior
    and observe ``obs_per_period`` private losses per period; under
    ``regime_mode="full_history"`` (the default) they keep accumulating
    evidence across the break, so heterogeneous learning speeds arise from
    who happens to observe extreme post-shock losses first.  Under
    ``"reset_at_shock"`` posteriors restart from scratch at the shock; note
    that the first couple of post-shock estimates then come from one- and
    two-observation posteriors whose second moment does not exist, so
    squared-error comparisons right after the shock do not stabilise in that
    mode.  Periods before the shock act as burn-in for belief heterogeneity.
    """

    m: int
    alpha_post: float
    alpha_pre: float = 3.0
    shock_period: int = 2
    horizon: int = 12
    burn_in: int = 2
    regime_mode: str = "full_history"
    seed: int = 0
    estimate_rule: str = "posterior_mean"
    obs_per_period: int = 1
    period_step: float = 1.0

    def __post_init__(self) -> None:
        if self.m < 2:
            raise ValueError(f"m: need at least 2 experts, got {self.m}")
        if not self.alpha_pre > 0.0:
            raise ValueError(f"alpha_pre: must be positive, got {self.alpha_pre}")
        if not self.alpha_post > 0.0:
            raise ValueError(f"alpha_post: must be positive, got {self.alpha_post}")
        if self.burn_in < 0:
            raise ValueError("burn_in: must be nonnegative")
        if self.shock_period < self.burn_in:
            raise ValueError(
                f"shock_period: must be >= burn_in ({self.burn_in}), got {self.shock_period}"
            )
        if self.horizon <= self.shock_period:
            raise ValueError(
                f"horizon: must exceed shock_period ({self.shock_period}), got {self.horizon}"
            )
        if self.regime_mode not in REGIME_MODES:
            raise ValueError(f"regime_mode: must be one of {REGIME_MODES}, got {self.regime_mode!r}")
        if self.estimate_rule not in ESTIMATE_RULES:
            raise ValueError(
                f"estimate_rule: must be one of {ESTIMATE_RULES}, got {self.estimate_rule!r}"
            )
        if self.obs_per_period < 1:
            raise ValueError("obs_per_period: must be at least 1")
        if not self.period_step > 0.0:
            raise ValueError("period_step: must be positive")

    @property
    def point_rule(self) -> str:
        return "mean" if self.estimate_rule == "posterior_mean" else "mode"


@dataclass(frozen=True)
class LinearTsConfig:
    """Three coupled series: a unit-root lead, and two followers it feeds into.

    x is a pure random walk; y mixes its own (transient) lag with lagged x;
    z mixes its own lag with lagged y and lagged x.  Own-dynamics
    coefficients must stay below one in modulus so innovations to x are the
    only persistent ones.
    """

    a: float = 0.2
    b: float = 0.8
    c: float = 0.2
    d: float = 0.4
    e: float = 0.4
    noise_sd: float = 1.0
    horizon: int = 30
    seed: int = 0

    def __post_init__(self) -> None:
        if not abs(self.a) < 1.0:
            raise ValueError(f"a: own-dynamics coefficient must satisfy |a| < 1, got {self.a}")
        if not abs(self.c) < 1.0:
            raise ValueError(f"c: own-dynamics coefficient must satisfy |c| < 1, got {self.c}")
        if self.noise_sd < 0.0:
            raise ValueError("noise_sd: must be nonnegative")
        if self.horizon < 2:
            raise ValueError("horizon: need at least 2 periods")


@dataclass
class SimulationRun:
    """One replication: the truth, the panel, and every method's output.

    ``estimates`` keeps the raw (m, horizon) matrix with NaN where an
    expert's estimate is still undefined; ``panel`` covers the maximal
    all-finite suffix of periods, starting at ``first_usable``.  Pooled
    series and weights are reported on the global period grid with NaN
    where a method produces nothing.
    """

    truth: TruthSeries
    estimates: np.ndarray
    first_usable: int
    pooled: dict[str, np.ndarray]
    weights: dict[str, np.ndarray] = field(default_factory=dict)
    pioneer_flags: dict[str, np.ndarray] = field(default_factory=dict)
    full_info: np.ndarray | None = None
    shapes: np.ndarray | None = None
    rates: np.ndarray | None = None
    stream_ids: tuple[tuple[int, ...], ...] = ()

    @property
    def panel(self) -> EstimatePanel:
        return EstimatePanel(self.estimates[:, self.first_usable :])


def derived_stream(
    seed: int, domain: int, replication: int, unit: int
) -> tuple[np.random.Generator, tuple[int, ...]]:
    """An independent generator plus its identifying key.

    Streams for distinct (seed, domain, replication, unit) keys are disjoint
    by construction of SeedSequence; the key doubles as the stream identifier
    recorded on runs.
    """
    key = (int(seed) & 0xFFFFFFFFFFFFFFFF, int(domain), int(replication), int(unit))
    return np.random.default_rng(np.random.SeedSequence(key)), key


def _first_usable_period(estimates: np.ndarray) -> int:
    """First period from which every later column is fully finite."""
    usable = np.all(np.isfinite(estimates), axis=0)
    bad = np.nonzero(~usable)[0]
    return 0 if bad.size == 0 else int(bad[-1]) + 1


def _pool_panel(
    estimates: np.ndarray,
    period_step: float,
    methods: Sequence[str],
    posteriors_at: Callable[[int], list[ExpertPosterior]] | None = None,
) -> tuple[int, dict[str, np.ndarray], dict[str, np.ndarray], dict[str, np.ndarray]]:
    """Run every requested pooling method over the usable suffix of the panel."""
    m, horizon = estimates.shape
    first = _first_usable_period(estimates)
    pooled = {name: np.full(horizon, np.nan) for name in methods}
    weights: dict[str, np.ndarray] = {}
    flags: dict[str, np.ndarray] = {}
    if first >= horizon:
        return first, pooled, weights, flags
    panel = EstimatePanel(estimates[:, first:], period_step)
    local_horizon = panel.horizon

    for name in methods:
        if name in ("pioneer_angle", "pioneer_distance"):
            cfg = PioneerConfig(weight_kind="angle" if name == "pioneer_angle" else "distance")
            series = weight_series(panel, cfg)
            pooled[name][first:] = pooled_series(panel, series)
            w = np.full((m, horizon), np.nan)
            w[:, first:] = series.weights
            weights[name] = w
            fl = np.zeros((m, horizon), dtype=bool)
            fl[:, first:] = series.pioneer_flags
            flags[name] = fl
        elif name == "mean":
            pooled[name][first:] = panel.estimates.mean(axis=0)
        elif name == "median":
            pooled[name][first:] = np.median(panel.estimates, axis=0)
        elif name == "minimum":
            pooled[name][first:] = panel.estimates.min(axis=0)
        elif name == "granger":
            w = np.full((m, horizon), np.nan)
            for t in range(3, local_horizon):
                wt = benchmarks.granger_weights(panel, t)
                w[:, first + t] = wt
                pooled[name][first + t] = float(wt @ panel.estimates[:, t])
            weights[name] = w
        elif name == "lagged_correlation":
            w = np.full((m, horizon), np.nan)
            for t in range(2, local_horizon):
                wt = benchmarks.lagged_corr_weights(panel, t)
                w[:, first + t] = wt
                pooled[name][first + t] = float(wt @ panel.estimates[:, t])
            weights[name] = w
        elif name == "vincentization":
            if posteriors_at is None:
                raise ValueError("vincentization needs posterior distributions, not just a panel")
            for t in range(first, horizon):
                try:
                    pooled[name][t] = benchmarks.vincentize(posteriors_at(t))
                except InsufficientDataError:
                    pass
        else:
            raise ValueError(f"unknown pooling method {name!r}")
    return first, pooled, weights, flags


def run_scenario(
    cfg: ScenarioConfig,
    methods: Sequence[str] = DEFAULT_METHODS,
    replication: int = 0,
) -> SimulationRun:
    """Simulate one replication of the tipping-point scenario.

    Per period, each expert draws its private losses from the current true
    tail index and updates its posterior (restarting at the shock under
    reset_at_shock); the estimate panel records each expert's point estimate
    once defined, and every requested pooling method is evaluated on the
    usable periods.  The full-information series applies the same point rule
    to the union of all experts' post-shock observations.
    """
    m, horizon = cfg.m, cfg.horizon
    truth = TruthSeries.step(cfg.alpha_pre, cfg.alpha_post, cfg.shock_period, horizon)
    shapes = np.zeros((m, horizon))
    rates = np.zeros((m, horizon))
    estimates = np.full((m, horizon), np.nan)
    stream_ids = []
    for i in range(m):
        rng, key = derived_stream(cfg.seed, _DOMAIN_PARETO, replication, i)
        stream_ids.append(key)
        shape = 0.0
        rate = 0.0
        for t in range(horizon):
            if cfg.regime_mode == "reset_at_shock" and t == cfg.shock_period:
                shape = 0.0
                rate = 0.0
            losses = sample_losses(rng, truth.values[t], cfg.obs_per_period)
            shape += losses.size
            rate += float(np.sum(np.log(losses)))
            shapes[i, t] = shape
            rates[i, t] = rate
            try:
                estimates[i, t] = point_estimate(ExpertPosterior(shape, rate), cfg.point_rule)
            except InsufficientDataError:
                pass

    def posteriors_at(t: int) -> list[ExpertPosterior]:
        return [ExpertPosterior(shapes[i, t], rates[i, t]) for i in range(m)]

    first, pooled, weights, flags = _pool_panel(
        estimates, cfg.period_step, methods, posteriors_at
    )

    # Omniscient reference: pool all experts' post-shock observations.
    full_info = np.full(horizon, np.nan)
    shock = cfg.shock_period
    pre_shock_rates = rates[:, shock - 1] if shock >= 1 else np.zeros(m)
    for t in range(shock, horizon):
        shape_union = float(m * cfg.obs_per_period * (t - shock + 1))
        if cfg.regime_mode == "reset_at_shock":
            rate_union = float(np.sum(rates[:, t]))
        else:
            rate_union = float(np.sum(rates[:, t] - pre_shock_rates))
        try:
            full_info[t] = point_estimate(ExpertPosterior(shape_union, rate_union), cfg.point_rule)
        except InsufficientDataError:
            pass

    return SimulationRun(
        truth=truth,
        estimates=estimates,
        first_usable=first,
        pooled=pooled,
        weights=weights,
        pioneer_flags=flags,
        full_info=full_info,
        shapes=shapes,
        rates=rates,
        stream_ids=tuple(stream_ids),
    )


def report_from_pooled(
    pooled_reps: np.ndarray,
    methods: Sequence[str],
    truth: TruthSeries,
    eval_window: np.ndarray,
    full_info_reps: np.ndarray | None = None,
    weights_reps: dict[str, np.ndarray] | None = None,
) -> MetricsReport:
    """Aggregate stacked per-replication pooled series into a metrics report.

    ``pooled_reps`` has shape (replications, methods, horizon).  Per-period
    RMSE is across replications; periods where any replication lacks output
    stay NaN (usability is deterministic, so this only masks warm-up
    periods).
    """
    reps, n_methods, horizon = pooled_reps.shape
    if n_methods != len(methods):
        raise ValueError("method axis does not match the method list")
    errors = pooled_reps - truth.values[None, None, :]
    rmse_by_period = np.full((n_methods, horizon), np.nan)
    mc_se = np.full((n_methods, horizon), np.nan)
    for j in range(n_methods):
        for t in range(horizon):
            col = errors[:, j, t]
            if np.all(np.isfinite(col)):
                sq = col**2
                rmse_by_period[j, t] = math.sqrt(float(np.mean(sq)))
                mc_se[j, t] = rmse_standard_error(sq)
    report = MetricsReport(
        methods=tuple(methods),
        truth=truth.values,
        shock_period=truth.shock_period,
        replications=reps,
        rmse_by_period=rmse_by_period,
        mc_se=mc_se,
        eval_window=eval_window,
        pooled_reps=pooled_reps,
        full_info_reps=full_info_reps,
        weights_reps=weights_reps,
    )
    for j, name in enumerate(methods):
        row = rmse_by_period[j, eval_window]
        row = row[np.isfinite(row)]
        if row.size:
            mean = float(np.mean(row))
            median = float(np.median(row))
            std = float(np.std(row, ddof=1)) if row.size > 1 else 0.0
            report.stability[name] = (mean, median, std)
    return report


def run_monte_carlo(
    cfg: ScenarioConfig,
    replications: int,
    methods: Sequence[str] = DEFAULT_METHODS,
    threads: int = 1,
    collect_weights: bool = False,
    window_length: int = 10,
    window_offset: int = 1,
) -> MetricsReport:
    """Replicate the scenario and aggregate per-method, per-period RMSE.

    Replications are independent work units with derived seeds, so results
    are identical for any thread count.  Stability statistics cover the
    post-shock evaluation window (up to ``window_length`` periods starting
    ``window_offset`` after the shock).
    """
    if replications < 2:
        raise ValueError("need at least 2 replications")
    methods = tuple(methods)

    def one(rep: int) -> SimulationRun:
        return run_scenario(cfg, methods, replication=rep)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(one, range(replications)))
    else:
        runs = [one(rep) for rep in range(replications)]

    horizon = cfg.horizon
    pooled_reps = np.full((replications, len(methods), horizon), np.nan)
    full_info_reps = np.full((replications, horizon), np.nan)
    for r, run in enumerate(runs):
        for j, name in enumerate(methods):
            pooled_reps[r, j] = run.pooled[name]
        full_info_reps[r] = run.full_info
    weights_reps = None
    if collect_weights:
        weights_reps = {}
        for name in methods:
            if runs[0].weights.get(name) is not None:
                weights_reps[name] = np.stack([run.weights[name] for run in runs])

    window = post_shock_window(cfg.shock_period, horizon, window_length, window_offset)
    truth = runs[0].truth
    return report_from_pooled(
        pooled_reps, methods, truth, window, full_info_reps, weights_reps
    )


def gen_gaussian_panel(
    m: int,
    horizon: int,
    mu: float,
    sd: float,
    seed: int = 0,
    replication: int = 0,
    methods: Sequence[str] = PANEL_METHODS,
) -> SimulationRun:
    """Gaussian control: estimates are running sample means of private normal draws.

    The true value is ``mu`` at every period (no shock), so the pooled
    series can be scored against a constant truth.
    """
    if m < 2:
        raise ValueError("need at least 2 experts")
    if horizon < 1:
        raise ValueError("need at least 1 period")
    if sd < 0.0:
        raise ValueError("sd must be nonnegative")
    estimates = np.empty((m, horizon))
    stream_ids = []
    for i in range(m):
        rng, key = derived_stream(seed, _DOMAIN_GAUSSIAN, replication, i)
        stream_ids.append(key)
        draws = rng.normal(mu, sd, horizon)
        estimates[i] = np.cumsum(draws) / np.arange(1, horizon + 1)
    truth = TruthSeries(values=np.full(horizon, float(mu)), shock_period=0)
    first, pooled, weights, flags = _pool_panel(estimates, 1.0, methods)
    return SimulationRun(
        truth=truth,
        estimates=estimates,
        first_usable=first,
        pooled=pooled,
        weights=weights,
        pioneer_flags=flags,
        stream_ids=tuple(stream_ids),
    )


def gen_linear_ts(cfg: LinearTsConfig, replication: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Simulate the coupled lead-follower trio from zero initial values."""
    horizon = cfg.horizon
    noises = []
    for k in range(3):
        rng, _ = derived_stream(cfg.seed, _DOMAIN_LINEAR_TS, replication, k)
        noises.append(rng.normal(0.0, cfg.noise_sd, horizon) if cfg.noise_sd > 0 else np.zeros(horizon))
    eps, nu, xi = noises
    x = np.zeros(horizon)
    y = np.zeros(horizon)
    z = np.zeros(horizon)
    for t in range(1, horizon):
        x[t] = x[t - 1] + eps[t]
        y[t] = cfg.a * y[t - 1] + cfg.b * x[t - 1] + nu[t]
        z[t] = cfg.c * z[t - 1] + cfg.d * y[t - 1] + cfg.e * x[t - 1] + xi[t]
    return x, y, z


def linear_ts_run(
    cfg: LinearTsConfig,
    replication: int = 0,
    methods: Sequence[str] = ("pioneer_angle", "granger", "lagged_correlation"),
) -> SimulationRun:
    """Treat the (x, y, z) trio as a 3-expert panel and weight it."""
    x, y, z = gen_linear_ts(cfg, replication)
    estimates = np.vstack([x, y, z])
    # Constant positive placeholder truth: these series have no true tail index.
    truth = TruthSeries(values=np.ones(cfg.horizon), shock_period=0)
    first, pooled, weights, flags = _pool_panel(estimates, 1.0, methods)
    return SimulationRun(
        truth=truth,
        estimates=estimates,
        first_usable=first,
        pooled=pooled,
        weights=weights,
        pioneer_flags=flags,
    )
