"""Error metrics and the per-run report container.

Conventions, fixed so emitted tables are stable across runs and platforms:

* RMSE at a period is taken across replications against the true tail
  index; RMSE over a window is the root mean square over the window.
* Stability statistics (mean, median, std of per-period RMSE) use the
  sample standard deviation (n-1 denominator).
* The evaluation window for post-shock comparisons starts one period after
  the shock (the first period where movement-based weights reflect
  post-shock dynamics, and where every benchmarked rule is in play when the
  shock sits at period 2) and spans up to ten periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "rmse",
    "stability_stats",
    "post_shock_window",
    "rmse_standard_error",
    "MetricsReport",
]


def rmse(
    estimates: Sequence[float],
    truth: Sequence[float],
    window: Sequence[int] | None = None,
) -> float:
    """Root mean square error of estimates against truth over a period window."""
    est = np.asarray(estimates, dtype=float)
    tru = np.asarray(truth, dtype=float)
    if est.shape != tru.shape:
        raise ValueError("estimate and truth series must have matching lengths")
    if window is not None:
        idx = np.asarray(list(window), dtype=int)
        if idx.size == 0:
            raise ValueError("window must contain at least one period")
        est = est[idx]
        tru = tru[idx]
    return float(np.sqrt(np.mean((est - tru) ** 2)))


def stability_stats(
    per_period_rmse: Sequence[float], first_k: int = 10
) -> tuple[float, float, float]:
    """Mean, median, and sample std of the first k per-period RMSE values."""
    values = np.asarray(per_period_rmse, dtype=float)
    if first_k < 1:
        raise ValueError("first_k must be at least 1")
    if first_k > values.size:
        raise ValueError(
            f"requested the first {first_k} periods but only {values.size} are available"
        )
    head = values[:first_k]
    std = float(np.std(head, ddof=1)) if head.size > 1 else 0.0
    return float(np.mean(head)), float(np.median(head)), std


def post_shock_window(
    shock_period: int, horizon: int, length: int = 10, offset: int = 1
) -> np.ndarray:
    """Periods [shock+offset, shock+offset+length) clipped to the horizon."""
    start = shock_period + offset
    stop = min(start + length, horizon)
    if start >= horizon:
        raise ValueError("evaluation window starts past the horizon")
    return np.arange(start, stop)


def rmse_standard_error(squared_errors: np.ndarray) -> float:
    """Monte Carlo standard error of an RMSE from the per-replication squared errors.

    Delta method: se(RMSE) = se(MSE) / (2 * RMSE).  Zero when the RMSE is 0.
    """
    sq = np.asarray(squared_errors, dtype=float)
    if sq.size < 2:
        return float("nan")
    mse = float(np.mean(sq))
    if mse == 0.0:
        return 0.0
    se_mse = float(np.std(sq, ddof=1)) / math.sqrt(sq.size)
    return se_mse / (2.0 * math.sqrt(mse))


@dataclass
class MetricsReport:
    """Per-method, per-period RMSE with stability statistics across a Monte Carlo run.

    ``rmse_by_period`` and ``mc_se`` are (methods x horizon) arrays with NaN
    at periods where a method produces no output.  ``pooled_reps`` (and the
    companions) retain per-replication series for downstream bootstrap and
    welfare work.
    """

    methods: tuple[str, ...]
    truth: np.ndarray
    shock_period: int
    replications: int
    rmse_by_period: np.ndarray
    mc_se: np.ndarray
    eval_window: np.ndarray
    stability: dict[str, tuple[float, float, float]] = field(default_factory=dict)
    pooled_reps: np.ndarray | None = None
    full_info_reps: np.ndarray | None = None
    weights_reps: dict[str, np.ndarray] | None = None

    @property
    def horizon(self) -> int:
        return int(self.truth.size)

    def method_index(self, name: str) -> int:
        return self.methods.index(name)

    def window_rmse(self, name: str) -> float:
        """Mean of per-period RMSE over the evaluation window."""
        row = self.rmse_by_period[self.method_index(name)]
        vals = row[self.eval_window]
        return float(np.mean(vals))
