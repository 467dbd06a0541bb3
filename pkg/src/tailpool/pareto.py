"""Pareto Type I loss model with a unit threshold.

Yearly aggregated losses are modelled as Pareto draws above a threshold
normalised to one, so a single tail index ``alpha`` characterises both the
expected loss and the probability of extreme outcomes.  A smaller index
means a fatter tail: below 2 the variance is unbounded, below 1 the mean
itself is unbounded.  The insurance-side quantities (expected indemnity,
mean-variance premium) are simple functions of that index and live here as
well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParetoLaw",
    "TruthSeries",
    "pareto_mean",
    "pareto_survival",
    "loss_from_uniform",
    "sample_losses",
    "expected_indemnity",
    "premium_mean_variance",
]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0.0 or not math.isfinite(alpha):
        raise ValueError(f"tail index must be a finite positive real, got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class ParetoLaw:
    """A Pareto Type I law; the threshold is fixed at the normalised unit."""

    alpha: float
    threshold: float = 1.0

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        if self.threshold != 1.0:
            raise ValueError("threshold is fixed at 1 (normalised loss unit)")

    def mean(self) -> float:
        return pareto_mean(self.alpha)

    def survival(self, x: float) -> float:
        return pareto_survival(self.alpha, x)


@dataclass(frozen=True)
class TruthSeries:
    """True tail index per period: one discrete jump, constant elsewhere.

    ``values[t]`` equals the pre-shock level for ``t < shock_period`` and the
    post-shock level from ``shock_period`` on.  The pre and post levels may
    coincide, in which case the series is constant (no effective jump).
    """

    values: np.ndarray
    shock_period: int

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("truth series must be a non-empty 1-d sequence")
        if not np.all(values > 0.0):
            raise ValueError("tail index values must be positive")
        if not 0 <= self.shock_period < values.size:
            raise ValueError("shock_period outside the horizon")
        pre = values[: self.shock_period]
        post = values[self.shock_period :]
        if (pre.size and not np.all(pre == pre[0])) or not np.all(post == post[0]):
            raise ValueError("truth series must be constant on each side of the shock")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def step(
        cls, alpha_pre: float, alpha_post: float, shock_period: int, horizon: int
    ) -> "TruthSeries":
        """Build the single-jump series alpha_pre -> alpha_post at shock_period."""
        if horizon <= shock_period:
            raise ValueError("horizon must extend past the shock period")
        values = np.full(horizon, float(alpha_post))
        values[:shock_period] = float(alpha_pre)
        return cls(values=values, shock_period=int(shock_period))


def pareto_mean(alpha: float) -> float:
    """Expected loss alpha/(alpha-1); +inf when the mean is unbounded (alpha <= 1)."""
    alpha = _check_alpha(alpha)
    if alpha <= 1.0:
        return math.inf
    return alpha / (alpha - 1.0)


def pareto_survival(alpha: float, x: float) -> float:
    """Pr(X > x) = (1/x)**alpha for x at or above the unit threshold."""
    alpha = _check_alpha(alpha)
    x = float(x)
    if x < 1.0:
        raise ValueError(f"survival is defined for x >= 1 (threshold), got {x!r}")
    return x**-alpha


def loss_from_uniform(u, alpha: float):
    """Inverse-transform a uniform(0,1) variate into a Pareto loss u**(-1/alpha).

    Accepts scalars or arrays; u must lie in (0, 1].
    """
    alpha = _check_alpha(alpha)
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0) or np.any(u > 1.0):
        raise ValueError("uniform variates must lie in (0, 1]")
    out = u ** (-1.0 / alpha)
    return float(out) if out.ndim == 0 else out


def sample_losses(rng: np.random.Generator, alpha: float, n: int) -> np.ndarray:
    """Draw n i.i.d. Pareto losses by inverse transform, >= 1 always.

    The generator's ``random()`` yields U' in [0, 1); the transform is applied
    to 1 - U' in (0, 1] so a zero variate cannot produce an infinite loss.
    Deterministic given the generator state.
    """
    n = int(n)
    if n < 0:
        raise ValueError("sample count must be nonnegative")
    alpha = _check_alpha(alpha)
    if n == 0:
        return np.empty(0)
    u = 1.0 - rng.random(n)
    return loss_from_uniform(u, alpha)


def expected_indemnity(alpha_hat: float) -> float:
    """Expected indemnity under the unit-deductible contract.

    Identical to the Pareto mean: the tail index alone characterises the
    expected payout once the deductible is normalised to the threshold.
    """
    return pareto_mean(alpha_hat)


def premium_mean_variance(alpha_hat: float, t: int, beta: float) -> float:
    """Two-term premium: expected indemnity plus a variance loading.

    ``alpha_hat/(alpha_hat-1) + beta * alpha_hat**2 / t / (alpha_hat-1)**4``
    with t the number of observations behind the estimate and beta the
    loading coefficient.  Reduces to the expected indemnity at beta = 0.
    """
    alpha_hat = float(alpha_hat)
    if not alpha_hat > 1.0:
        raise ValueError(f"premium requires tail index > 1, got {alpha_hat!r}")
    t = int(t)
    if t < 1:
        raise ValueError("observation count t must be >= 1")
    beta = float(beta)
    if beta < 0.0:
        raise ValueError("variance loading beta must be nonnegative")
    base = alpha_hat / (alpha_hat - 1.0)
    loading = beta * alpha_hat**2 / t / (alpha_hat - 1.0) ** 4
    return base + loading
