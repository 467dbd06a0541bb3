"""Pioneer-detection weighting of expert estimates.

An expert is credited as a pioneer at period t when two conditions hold
against the consensus of the other experts:

1. distance reduction: the gap between his estimate and the others' center
   narrowed from t-1 to t;
2. orientation change: the others' center moved in the direction of his
   *previous* estimate, and moved at a steeper angle than his own estimate
   did.

When both hold, the expert's raw score is the share of total movement
attributable to the others, measured either on trajectory angles
(``weight_kind="angle"``, arctan of vertical change over the period step)
or on plain vertical distances (``weight_kind="distance"``).  Scores are
renormalised into a per-period weight vector; periods with no pioneer fall
back to the previous weights (or uniform).  The pooled estimate is the
weighted average of the period's estimates.

The kernel is deliberately scalar Python over small panels: weight logic is
reproducible bit-for-bit regardless of array-library version or SIMD path,
and panels here are at most a few hundred experts by a few dozen periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .panel import EstimatePanel

__all__ = [
    "CENTERS",
    "WEIGHT_KINDS",
    "FALLBACKS",
    "PioneerConfig",
    "WeightSeries",
    "NoPriorPeriodError",
    "MissingPreviousWeightsError",
    "others_center",
    "distance_dummy",
    "orientation_angles",
    "orientation_dummy",
    "raw_pioneer_score",
    "pioneer_weights",
    "pioneer_pool",
    "weight_series",
    "pooled_series",
]

CENTERS = ("mean", "median")
WEIGHT_KINDS = ("angle", "distance")
FALLBACKS = ("carry_previous", "uniform")


class NoPriorPeriodError(ValueError):
    """Raised when a movement-based quantity is requested at period 0."""


class MissingPreviousWeightsError(ValueError):
    """carry_previous fallback hit without a previous weight vector."""


@dataclass(frozen=True)
class PioneerConfig:
    """How the consensus is formed, scores are measured, and no-pioneer periods resolve."""

    center: str = "mean"
    weight_kind: str = "angle"
    fallback: str = "carry_previous"

    def __post_init__(self) -> None:
        if self.center not in CENTERS:
            raise ValueError(f"center must be one of {CENTERS}, got {self.center!r}")
        if self.weight_kind not in WEIGHT_KINDS:
            raise ValueError(f"weight_kind must be one of {WEIGHT_KINDS}, got {self.weight_kind!r}")
        if self.fallback not in FALLBACKS:
            raise ValueError(f"fallback must be one of {FALLBACKS}, got {self.fallback!r}")


class OrientationAngles(NamedTuple):
    theta_expert: float
    theta_others: float
    toward: bool


@dataclass(frozen=True)
class WeightSeries:
    """Per-period weight vectors and the pioneer indicator per expert-period."""

    weights: np.ndarray
    pioneer_flags: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        f = np.asarray(self.pioneer_flags, dtype=bool)
        if w.shape != f.shape or w.ndim != 2:
            raise ValueError("weights and pioneer_flags must share an (m, T) shape")
        sums = w.sum(axis=0)
        if np.any(w < 0.0) or np.any(np.abs(sums - 1.0) > 1e-12):
            raise ValueError("each period's weights must be nonnegative and sum to 1")
        w.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "pioneer_flags", f)


def _center_excluding(col: Sequence[float], i: int, center: str) -> float:
    """Mean or median of the column with entry i left out.

    The mean is computed as (total - own)/(m-1) with a left-to-right total so
    results are reproducible by any direct reimplementation of the same
    formula.
    """
    m = len(col)
    if center == "mean":
        total = 0.0
        for v in col:
            total += v
        return (total - col[i]) / (m - 1)
    if center == "median":
        others = sorted(col[j] for j in range(m) if j != i)
        n = len(others)
        mid = n // 2
        if n % 2:
            return others[mid]
        return (others[mid - 1] + others[mid]) / 2.0
    raise ValueError(f"center must be one of {CENTERS}, got {center!r}")


def _require_prior(t: int) -> None:
    if t < 1:
        raise NoPriorPeriodError("period 0 has no prior period to compare against")


def others_center(panel: EstimatePanel, i: int, t: int, center: str = "mean") -> float:
    """Consensus of the other experts (expert i excluded) at period t."""
    return _center_excluding(panel.column(t), i, center)


def distance_dummy(panel: EstimatePanel, i: int, t: int, center: str = "mean") -> bool:
    """True iff expert i's gap to the others' center strictly narrowed since t-1."""
    _require_prior(t)
    col_now, col_prev = panel.column(t), panel.column(t - 1)
    gap_now = abs(col_now[i] - _center_excluding(col_now, i, center))
    gap_prev = abs(col_prev[i] - _center_excluding(col_prev, i, center))
    return gap_now < gap_prev


def orientation_angles(
    panel: EstimatePanel, i: int, t: int, center: str = "mean"
) -> OrientationAngles:
    """Trajectory angles of expert i and of the others' center from t-1 to t.

    Each angle is arctan(|vertical change| / period_step), i.e. the segment's
    inclination against its own horizontal.  ``toward`` is True iff the
    others' center moved (strictly) in the direction of expert i's estimate
    at t-1; a flat center never counts as moving toward anyone.
    """
    _require_prior(t)
    col_now, col_prev = panel.column(t), panel.column(t - 1)
    step = panel.period_step
    move_expert = col_now[i] - col_prev[i]
    move_others = _center_excluding(col_now, i, center) - _center_excluding(col_prev, i, center)
    gap_prev = col_prev[i] - _center_excluding(col_prev, i, center)
    toward = (move_others > 0.0 and gap_prev > 0.0) or (move_others < 0.0 and gap_prev < 0.0)
    return OrientationAngles(
        theta_expert=math.atan(abs(move_expert) / step),
        theta_others=math.atan(abs(move_others) / step),
        toward=toward,
    )


def orientation_dummy(panel: EstimatePanel, i: int, t: int, center: str = "mean") -> bool:
    """True iff the others moved toward expert i's previous estimate at a strictly steeper angle."""
    ang = orientation_angles(panel, i, t, center)
    return ang.toward and ang.theta_others > ang.theta_expert


def _score_one(
    col_now: Sequence[float],
    col_prev: Sequence[float],
    i: int,
    cfg: PioneerConfig,
    step: float,
) -> float:
    center_now = _center_excluding(col_now, i, cfg.center)
    center_prev = _center_excluding(col_prev, i, cfg.center)
    if not abs(col_now[i] - center_now) < abs(col_prev[i] - center_prev):
        return 0.0
    move_others = center_now - center_prev
    gap_prev = col_prev[i] - center_prev
    toward = (move_others > 0.0 and gap_prev > 0.0) or (move_others < 0.0 and gap_prev < 0.0)
    if not toward:
        return 0.0
    move_expert = col_now[i] - col_prev[i]
    theta_others = math.atan(abs(move_others) / step)
    theta_expert = math.atan(abs(move_expert) / step)
    if not theta_others > theta_expert:
        return 0.0
    if cfg.weight_kind == "angle":
        lead, own = theta_others, theta_expert
    else:
        lead, own = abs(move_others), abs(move_expert)
    if lead == 0.0 and own == 0.0:
        return 0.0
    return lead / (lead + own)


def raw_pioneer_score(panel: EstimatePanel, i: int, t: int, cfg: PioneerConfig) -> float:
    """Both dummies times the movement-attribution ratio; 0 unless both dummies hold."""
    _require_prior(t)
    return _score_one(panel.column(t), panel.column(t - 1), i, cfg, panel.period_step)


def _uniform(m: int) -> list[float]:
    return [1.0 / m] * m


def _period_weights(
    col_now: Sequence[float] | None,
    col_prev: Sequence[float] | None,
    cfg: PioneerConfig,
    step: float,
    m: int,
    previous_weights: Sequence[float] | None,
) -> tuple[list[float], list[bool]]:
    """Weights and pioneer flags for one period; col_prev None means no prior period."""
    if col_prev is None:
        return _uniform(m), [False] * m
    scores = [_score_one(col_now, col_prev, i, cfg, step) for i in range(m)]
    flags = [s > 0.0 for s in scores]
    total = 0.0
    for s in scores:
        total += s
    if total == 0.0:
        if cfg.fallback == "carry_previous":
            if previous_weights is None:
                raise MissingPreviousWeightsError(
                    "no pioneer this period and fallback=carry_previous, "
                    "but no previous weights were supplied"
                )
            return [float(w) for w in previous_weights], flags
        return _uniform(m), flags
    return [s / total for s in scores], flags


def pioneer_weights(
    panel: EstimatePanel,
    t: int,
    cfg: PioneerConfig = PioneerConfig(),
    previous_weights: Sequence[float] | None = None,
) -> np.ndarray:
    """The period-t weight vector (length m, nonnegative, sums to 1).

    Period 0 (no prior period) is initialised uniform.  When no expert scores
    as a pioneer, the fallback rule resolves the period: carry_previous
    requires ``previous_weights``.
    """
    if not 0 <= t < panel.horizon:
        raise IndexError(f"period {t} outside 0..{panel.horizon - 1}")
    if previous_weights is not None and len(previous_weights) != panel.m:
        raise ValueError("previous_weights length must equal the expert count")
    col_prev = panel.column(t - 1) if t >= 1 else None
    weights, _ = _period_weights(
        panel.column(t) if t >= 0 else None,
        col_prev,
        cfg,
        panel.period_step,
        panel.m,
        previous_weights,
    )
    return np.array(weights)


def weight_series(panel: EstimatePanel, cfg: PioneerConfig = PioneerConfig()) -> WeightSeries:
    """Sequential weights for every period, carrying the previous vector across no-pioneer periods."""
    m, horizon = panel.m, panel.horizon
    weights = np.empty((m, horizon))
    flags = np.empty((m, horizon), dtype=bool)
    prev: list[float] | None = None
    col_prev: list[float] | None = None
    for t in range(horizon):
        col_now = panel.column(t)
        w, f = _period_weights(col_now, col_prev, cfg, panel.period_step, m, prev)
        weights[:, t] = w
        flags[:, t] = f
        prev, col_prev = w, col_now
    return WeightSeries(weights=weights, pioneer_flags=flags)


def pooled_series(panel: EstimatePanel, series: WeightSeries) -> np.ndarray:
    """Weighted average of each period's estimates under the given weight series."""
    if series.weights.shape != panel.estimates.shape:
        raise ValueError("weight series shape must match the panel")
    out = np.empty(panel.horizon)
    for t in range(panel.horizon):
        col = panel.column(t)
        acc = 0.0
        for i in range(panel.m):
            acc += series.weights[i, t] * col[i]
        out[t] = acc
    return out


def pioneer_pool(
    panel: EstimatePanel,
    t: int,
    cfg: PioneerConfig = PioneerConfig(),
    weight_history: Sequence[Sequence[float]] | None = None,
) -> float:
    """Pooled estimate at period t: weights dotted with the period's estimates.

    ``weight_history`` supplies the weight vectors of periods 0..t-1 (only
    the last one is consulted, for the carry_previous fallback).  Without it
    the history is recomputed from period 0.
    """
    if weight_history is not None and t >= 1:
        prev = weight_history[t - 1]
        w = pioneer_weights(panel, t, cfg, previous_weights=prev)
    elif t == 0:
        w = pioneer_weights(panel, 0, cfg)
    else:
        series = weight_series(panel, cfg)
        w = series.weights[:, t]
    col = panel.column(t)
    acc = 0.0
    for i in range(panel.m):
        acc += float(w[i]) * col[i]
    return acc
