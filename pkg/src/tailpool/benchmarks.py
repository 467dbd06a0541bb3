"""Competitor pooling rules the pioneer weighting is benchmarked against.

Simple column statistics (mean, median, minimum), two lead-detection
weightings built on the same no-ground-truth premise (a lag-one causality
F-test and a lagged-correlation score), quantile averaging of the experts'
posterior distributions, and the lag-one autoregressive reference
forecaster used to normalise errors on external panels.

All weight-producing rules return probability vectors and fall back to
uniform when no expert carries a signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaincinv
from scipy.stats import f as f_dist

from .experts import ExpertPosterior, InsufficientDataError
from .panel import EstimatePanel

__all__ = [
    "POOLING_KINDS",
    "PoolingMethod",
    "InsufficientHistoryError",
    "mean_pool",
    "median_pool",
    "min_pool",
    "granger_weights",
    "lagged_corr_weights",
    "vincentize",
    "default_quantile_grid",
    "ar1_forecast",
    "relative_rmse",
]

POOLING_KINDS = (
    "mean",
    "median",
    "minimum",
    "granger",
    "lagged_correlation",
    "vincentization",
    "pioneer_angle",
    "pioneer_distance",
)


class InsufficientHistoryError(ValueError):
    """Not enough past periods for a lag-based weighting."""


@dataclass(frozen=True)
class PoolingMethod:
    """A pooling rule selector; the lag is fixed at one by construction."""

    kind: str
    significance: float = 0.05
    lag: int = 1

    def __post_init__(self) -> None:
        if self.kind not in POOLING_KINDS:
            raise ValueError(f"kind must be one of {POOLING_KINDS}, got {self.kind!r}")
        if self.lag != 1:
            raise ValueError("lag is fixed at 1")
        if not 0.0 < self.significance < 1.0:
            raise ValueError("significance must lie strictly in (0, 1)")


def _column(panel: EstimatePanel, t: int) -> np.ndarray:
    if not 0 <= t < panel.horizon:
        raise IndexError(f"period {t} outside 0..{panel.horizon - 1}")
    return panel.estimates[:, t]


def mean_pool(panel: EstimatePanel, t: int) -> float:
    return float(np.mean(_column(panel, t)))


def median_pool(panel: EstimatePanel, t: int) -> float:
    return float(np.median(_column(panel, t)))


def min_pool(panel: EstimatePanel, t: int) -> float:
    """The most conservative pool: smallest tail index = fattest tail = highest premium."""
    return float(np.min(_column(panel, t)))


def _others_center_matrix(values: np.ndarray) -> np.ndarray:
    """Row i holds the mean of the other rows, per column."""
    m = values.shape[0]
    return (values.sum(axis=0, keepdims=True) - values) / (m - 1)


def granger_weights(panel: EstimatePanel, t: int, significance: float = 0.05) -> np.ndarray:
    """Weights from a lag-one causality F-test of each expert on the others' mean.

    For each expert i, the others' mean series is regressed (with intercept)
    on its own lag and on expert i's lagged series over periods <= t.  The
    expert's raw score is 1 - p when the F-test for the lagged-i coefficient
    rejects at ``significance``, else 0; scores are normalised, with a
    uniform fallback when nobody rejects.  At t = 3 the unrestricted fit has
    no residual degrees of freedom, so no expert can reject and the result
    is uniform.
    """
    if t < 3:
        raise InsufficientHistoryError(f"causality weights need t >= 3, got {t}")
    if t >= panel.horizon:
        raise IndexError(f"period {t} outside 0..{panel.horizon - 1}")
    values = panel.estimates[:, : t + 1]
    m = panel.m
    n = t  # regression rows, one per transition k-1 -> k
    dof = n - 3
    centers = _others_center_matrix(values)
    y = centers[:, 1:]
    own_lag = centers[:, :-1]
    expert_lag = values[:, :-1]

    # Intercept handled by demeaning; SSRs match the 3-parameter fit exactly.
    ym = y - y.mean(axis=1, keepdims=True)
    om = own_lag - own_lag.mean(axis=1, keepdims=True)
    xm = expert_lag - expert_lag.mean(axis=1, keepdims=True)
    s_oo = np.einsum("ij,ij->i", om, om)
    s_xx = np.einsum("ij,ij->i", xm, xm)
    s_ox = np.einsum("ij,ij->i", om, xm)
    s_oy = np.einsum("ij,ij->i", om, ym)
    s_xy = np.einsum("ij,ij->i", xm, ym)
    s_yy = np.einsum("ij,ij->i", ym, ym)

    with np.errstate(divide="ignore", invalid="ignore"):
        ssr_restricted = np.where(s_oo > 0.0, s_yy - s_oy**2 / s_oo, s_yy)
        det = s_oo * s_xx - s_ox**2
        b1 = (s_oy * s_xx - s_xy * s_ox) / det
        b2 = (s_xy * s_oo - s_oy * s_ox) / det
        ssr_unrestricted = s_yy - b1 * s_oy - b2 * s_xy

    # Collinear or variance-free designs carry no evidence for the i-lag.
    degenerate = ~(det > 1e-12 * np.maximum(s_oo * s_xx, 1e-300))
    ssr_unrestricted = np.where(degenerate, ssr_restricted, ssr_unrestricted)
    ssr_unrestricted = np.maximum(ssr_unrestricted, 0.0)

    pvalues = np.ones(m)
    if dof >= 1:
        with np.errstate(divide="ignore", invalid="ignore"):
            fstat = (ssr_restricted - ssr_unrestricted) * dof / ssr_unrestricted
        exact = ssr_unrestricted <= 0.0
        fstat = np.where(exact, np.inf, fstat)
        fstat = np.where(degenerate, 0.0, np.maximum(fstat, 0.0))
        zero_gain = (ssr_restricted - ssr_unrestricted) <= 0.0
        fstat = np.where(exact & zero_gain, 0.0, fstat)
        pvalues = f_dist.sf(fstat, 1, dof)

    scores = np.where(pvalues < significance, 1.0 - pvalues, 0.0)
    total = scores.sum()
    if total <= 0.0:
        return np.full(m, 1.0 / m)
    return scores / total


def lagged_corr_weights(panel: EstimatePanel, t: int) -> np.ndarray:
    """Weights from the correlation of each expert's lagged series with the others' mean.

    Raw score for expert i is max(0, Pearson correlation between his
    estimates at k-1 and the others' mean at k, over k <= t); zero-variance
    series score 0.  Uniform fallback when no score is positive.
    """
    if t < 2:
        raise InsufficientHistoryError(f"lagged-correlation weights need t >= 2, got {t}")
    if t >= panel.horizon:
        raise IndexError(f"period {t} outside 0..{panel.horizon - 1}")
    values = panel.estimates[:, : t + 1]
    m = panel.m
    centers = _others_center_matrix(values)
    lagged = values[:, :-1]
    led = centers[:, 1:]
    am = lagged - lagged.mean(axis=1, keepdims=True)
    bm = led - led.mean(axis=1, keepdims=True)
    s_ab = np.einsum("ij,ij->i", am, bm)
    s_aa = np.einsum("ij,ij->i", am, am)
    s_bb = np.einsum("ij,ij->i", bm, bm)
    denom = np.sqrt(s_aa * s_bb)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(denom > 0.0, s_ab / denom, 0.0)
    scores = np.maximum(corr, 0.0)
    total = scores.sum()
    if total <= 0.0:
        return np.full(m, 1.0 / m)
    return scores / total


def default_quantile_grid(n: int = 99) -> np.ndarray:
    """n equispaced interior quantile levels k/(n+1); the default 99 include 0.5."""
    return np.arange(1, n + 1) / (n + 1)


def vincentize(
    posteriors: Sequence[ExpertPosterior], probs: np.ndarray | None = None
) -> float:
    """Pool posterior distributions by averaging quantile functions; report the median.

    The per-expert Gamma quantiles are averaged pointwise over the grid to
    form the pooled quantile function, whose value at p = 0.5 is returned.
    The grid must therefore contain 0.5 exactly.
    """
    if not posteriors:
        raise ValueError("need at least one posterior")
    grid = default_quantile_grid() if probs is None else np.asarray(probs, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0.0) or np.any(grid >= 1.0):
        raise ValueError("quantile grid must lie strictly inside (0, 1)")
    median_idx = np.nonzero(grid == 0.5)[0]
    if median_idx.size == 0:
        raise ValueError("quantile grid must contain 0.5 (the reported median)")
    pooled = np.zeros_like(grid)
    for post in posteriors:
        if post.shape < 1.0 or post.rate <= 0.0:
            raise InsufficientDataError(
                f"vincentization needs proper posteriors, have shape={post.shape}, rate={post.rate}"
            )
        pooled += gammaincinv(post.shape, grid) / post.rate
    pooled /= len(posteriors)
    return float(pooled[median_idx[0]])


def ar1_forecast(series: Sequence[float], t: int) -> float:
    """Next-period forecast from a no-intercept lag-one autoregression.

    The coefficient is least squares over all transitions k <= t; the
    forecast is coefficient * series[t].
    """
    if t < 2:
        raise InsufficientHistoryError(f"autoregressive forecast needs t >= 2, got {t}")
    y = np.asarray(series, dtype=float)
    if t >= y.size:
        raise IndexError(f"period {t} outside 0..{y.size - 1}")
    lagged = y[:t]
    current = y[1 : t + 1]
    denom = float(lagged @ lagged)
    if denom == 0.0:
        raise ValueError("degenerate regressor: all lagged values are zero")
    phi = float(current @ lagged) / denom
    return phi * float(y[t])


def relative_rmse(
    method_series: Sequence[float], target: Sequence[float], window: Sequence[int]
) -> float:
    """RMSE of a method against the target, relative to the lag-one autoregressive reference.

    The reference forecast for period k is refit on all transitions of the
    target up to k-1, so the window must start at period 3 or later.
    """
    method = np.asarray(method_series, dtype=float)
    truth = np.asarray(target, dtype=float)
    periods = [int(k) for k in window]
    if not periods:
        raise ValueError("window must contain at least one period")
    if min(periods) < 3:
        raise ValueError("window periods must be >= 3 (reference needs two transitions)")
    if max(periods) >= truth.size:
        raise IndexError("window extends past the series")
    num = 0.0
    den = 0.0
    for k in periods:
        num += (method[k] - truth[k]) ** 2
        den += (ar1_forecast(truth, k - 1) - truth[k]) ** 2
    if den == 0.0:
        raise ValueError("reference forecaster is exact on the window; ratio undefined")
    return math.sqrt(num / len(periods)) / math.sqrt(den / len(periods))
