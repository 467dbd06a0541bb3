"""The m-by-T matrix of per-expert tail-index estimates.

Every pooling rule consumes this one structure.  Entries must be finite:
callers are responsible for dropping periods where some expert's estimate
is still undefined before building a panel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["EstimatePanel"]


@dataclass(frozen=True)
class EstimatePanel:
    """Expert estimates, one row per expert, one column per period.

    ``period_step`` is the time between consecutive observation periods and
    feeds the angle computation of the pioneer weighting (the horizontal leg
    of each trajectory segment).
    """

    estimates: np.ndarray
    period_step: float = 1.0

    def __post_init__(self) -> None:
        arr = np.array(self.estimates, dtype=float)
        if arr.ndim != 2:
            raise ValueError("estimates must be a 2-d (experts x periods) array")
        m, horizon = arr.shape
        if m < 2:
            raise ValueError(f"need at least 2 experts, got {m}")
        if horizon < 1:
            raise ValueError("need at least 1 period")
        if not np.all(np.isfinite(arr)):
            raise ValueError("panel entries must all be finite; filter undefined estimates first")
        if not self.period_step > 0.0:
            raise ValueError("period_step must be positive")
        arr.flags.writeable = False
        object.__setattr__(self, "estimates", arr)

    @property
    def m(self) -> int:
        return self.estimates.shape[0]

    @property
    def horizon(self) -> int:
        return self.estimates.shape[1]

    def column(self, t: int) -> list[float]:
        """Period-t estimates as plain floats (scalar kernels index lists)."""
        if not 0 <= t < self.horizon:
            raise IndexError(f"period {t} outside 0..{self.horizon - 1}")
        return [float(v) for v in self.estimates[:, t]]

    def transformed(self, fn) -> "EstimatePanel":
        """A new panel with fn applied elementwise (same step)."""
        return EstimatePanel(fn(np.array(self.estimates)), self.period_step)
