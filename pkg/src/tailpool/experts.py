"""Bayesian expert beliefs about the tail index.

Each expert accumulates evidence about the Pareto tail index through the
conjugate Gamma posterior: starting from the improper Gamma(0, 0), every
observed loss x adds one to the shape and ln(x) to the rate.  After n
observations the shape is exactly n, so the shape doubles as an observation
counter.  Point estimates are undefined until the posterior is proper.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from scipy.special import gammaincinv

__all__ = [
    "ExpertPosterior",
    "InsufficientDataError",
    "UNINFORMATIVE",
    "posterior_update",
    "point_estimate",
    "posterior_quantile",
]


class InsufficientDataError(ValueError):
    """The posterior does not yet pin down a usable estimate."""


@dataclass(frozen=True)
class ExpertPosterior:
    """Gamma(shape, rate) posterior over the tail index.

    ``shape`` counts observations; ``rate`` accumulates their log-losses.
    """

    shape: float
    rate: float

    def __post_init__(self) -> None:
        if self.shape < 0.0 or self.rate < 0.0:
            raise ValueError("posterior shape and rate must be nonnegative")

    def updated(self, loss: float) -> "ExpertPosterior":
        return posterior_update(self, loss)


UNINFORMATIVE = ExpertPosterior(0.0, 0.0)


def posterior_update(post: ExpertPosterior, loss: float) -> ExpertPosterior:
    """Fold one loss observation into the posterior.

    shape' = shape + 1, rate' = rate + ln(loss).  Losses below the unit
    threshold are impossible under the model and rejected.
    """
    loss = float(loss)
    if loss < 1.0:
        raise ValueError(f"losses lie at or above the unit threshold, got {loss!r}")
    return ExpertPosterior(post.shape + 1.0, post.rate + math.log(loss))


def posterior_update_many(post: ExpertPosterior, losses: Iterable[float]) -> ExpertPosterior:
    for loss in losses:
        post = posterior_update(post, loss)
    return post


def point_estimate(post: ExpertPosterior, rule: str = "mean") -> float:
    """Point estimate of the tail index from the posterior.

    rule="mean" returns shape/rate and needs shape >= 1; rule="mode" returns
    (shape-1)/rate, which is only a positive tail index once shape > 1.
    Either rule needs rate > 0.
    """
    if rule == "mean":
        if post.shape < 1.0 or post.rate <= 0.0:
            raise InsufficientDataError(
                "posterior mean undefined: need shape >= 1 and rate > 0, "
                f"have shape={post.shape}, rate={post.rate}"
            )
        return post.shape / post.rate
    if rule == "mode":
        if post.shape <= 1.0 or post.rate <= 0.0:
            raise InsufficientDataError(
                "posterior mode undefined: need shape > 1 and rate > 0, "
                f"have shape={post.shape}, rate={post.rate}"
            )
        return (post.shape - 1.0) / post.rate
    raise ValueError(f"unknown point-estimate rule {rule!r}")


def posterior_quantile(post: ExpertPosterior, p: float) -> float:
    """Inverse CDF of the Gamma(shape, rate) posterior at probability p."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile level must lie strictly in (0, 1), got {p!r}")
    if post.shape < 1.0 or post.rate <= 0.0:
        raise InsufficientDataError(
            "posterior quantile undefined: need shape >= 1 and rate > 0, "
            f"have shape={post.shape}, rate={post.rate}"
        )
    return float(gammaincinv(post.shape, p)) / post.rate
