"""Portfolio aggregation for exchangeable loans sharing one market path.

With m identically parameterized loans, the portfolio mean scales with m
while the variance carries m(m-1) copies of the pairwise covariance; the
coefficient of variation therefore cannot diversify below a floor set by
that covariance (the systematic part of the risk).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backward import MomentSet
from .market import BAD, GOOD
from .validation import ValidationError, require


@dataclass(frozen=True)
class PortfolioStats:
    """Mean/sd/CV of the m-loan net result, plus the pair-level figures."""

    size: int
    mean_bad: float
    sd_bad: float
    cv_bad: float
    mean_good: float
    sd_good: float
    cv_good: float
    covariance_bad: float
    covariance_good: float
    correlation_bad: float
    correlation_good: float
    limit_cv_bad: float
    limit_cv_good: float

    def mean(self, state: str) -> float:
        return self.mean_bad if state == BAD else self.mean_good

    def sd(self, state: str) -> float:
        return self.sd_bad if state == BAD else self.sd_good

    def cv(self, state: str) -> float:
        return self.cv_bad if state == BAD else self.cv_good


def portfolio_moments(single: MomentSet, size: int) -> PortfolioStats:
    """Aggregate one loan's moments to a portfolio of `size` loans."""
    require(size >= 1, "portfolio size must be a positive integer")
    m = int(size)
    stats = {}
    for state in (BAD, GOOD):
        mean = m * single.expected_value(state)
        var = m * single.variance(state) + m * (m - 1) * single.covariance(state)
        sd = float(np.sqrt(max(var, 0.0)))
        stats[state] = (mean, sd, sd / mean if mean != 0.0 else float("inf"))
    lim_b, lim_g = limit_cv(single)
    return PortfolioStats(
        m,
        stats[BAD][0], stats[BAD][1], stats[BAD][2],
        stats[GOOD][0], stats[GOOD][1], stats[GOOD][2],
        single.covariance(BAD), single.covariance(GOOD),
        single.correlation(BAD), single.correlation(GOOD),
        lim_b, lim_g,
    )


def limit_cv(single: MomentSet) -> tuple[float, float]:
    """Large-portfolio limit of the coefficient of variation, per state.

    sqrt(pair covariance) / E[V(0)]: the undiversifiable floor left by the
    shared market path once idiosyncratic risk has been averaged away.
    """
    out = []
    for state in (BAD, GOOD):
        ev = single.expected_value(state)
        if ev <= 0.0:
            raise ValidationError(
                "limit CV undefined for nonpositive expected value "
                f"(state {state}: {ev:.6g})"
            )
        cov = single.covariance(state)
        require(cov >= -1e-9 * max(single.variance(state), 1.0),
                f"state {state}: pair covariance is negative")
        out.append(float(np.sqrt(max(cov, 0.0))) / ev)
    return out[0], out[1]
