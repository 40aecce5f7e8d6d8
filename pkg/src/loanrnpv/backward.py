"""Backward recursion on conditional moments, bypassing event probabilities.

R(h) is the value at time h of the payments still to be received from a
loan alive at h, given the market state at h.  Stepping from h to h-1
conditions on what happens during month h: default (recovery on the
exposure), prepayment (charged exposure), or survival (the instalment plus
the next conditional value, mixed over the possible next states).  One
pass from maturity to 0 produces E[R], E[R^2] and, for two loans sharing
the market path with conditionally independent exits, E[R1*R2].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .behavior import HazardModel, RecoveryModel
from .market import BAD, GOOD, MarketModel
from .schedule import DiscountSpec, LoanSpec
from .validation import check_horizon


@dataclass(frozen=True)
class MomentSet:
    """Conditional moments of the received-payment value per market state.

    `first`/`second` are E[R] and E[R^2]; `cross` is E[R1*R2] for an
    exchangeable pair.  Values refer to time 0 unless produced by
    `terminal_moments`, which reports the maturity-1 seed values.
    """

    principal: float
    first_bad: float
    first_good: float
    second_bad: float
    second_good: float
    cross_bad: float
    cross_good: float

    def first(self, state: str) -> float:
        return self.first_bad if state == BAD else self.first_good

    def second(self, state: str) -> float:
        return self.second_bad if state == BAD else self.second_good

    def cross(self, state: str) -> float:
        return self.cross_bad if state == BAD else self.cross_good

    def expected_value(self, state: str) -> float:
        """E[V(0)]: expected net result after funding the principal."""
        return self.first(state) - self.principal

    def variance(self, state: str) -> float:
        return self.second(state) - self.first(state) ** 2

    def sd(self, state: str) -> float:
        return float(np.sqrt(max(self.variance(state), 0.0)))

    def covariance(self, state: str) -> float:
        """Cov between the values of two loans sharing the market path."""
        return self.cross(state) - self.first(state) ** 2

    def correlation(self, state: str) -> float:
        return self.covariance(state) / self.variance(state)


def terminal_moments(loan: LoanSpec, discount: DiscountSpec,
                     hazards: HazardModel, recovery: RecoveryModel) -> MomentSet:
    """Seed values at time term-1: one period left, default or final payment.

    The cross moment factorizes because, given the state, the two loans'
    final-month outcomes and recoveries are independent.
    """
    n = loan.term
    check_horizon(n, ("hazards", hazards.term), ("recovery", recovery.term))
    v = discount.factor
    r_n = float(loan.instalments[n - 1])
    vals = {}
    for state, lam, mean_z, second_z in (
        (BAD, hazards.default_bad[n - 1], recovery.mean_bad[n - 1],
         recovery.second_bad[n - 1]),
        (GOOD, hazards.default_good[n - 1], recovery.mean_good[n - 1],
         recovery.second_good[n - 1]),
    ):
        m1 = v * (lam * r_n * mean_z + (1.0 - lam) * r_n)
        m2 = v * v * (lam * r_n * r_n * second_z + (1.0 - lam) * r_n * r_n)
        cross = (v * r_n) ** 2 * (lam * mean_z + 1.0 - lam) ** 2
        vals[state] = (float(m1), float(m2), float(cross))
    return MomentSet(loan.principal, vals[BAD][0], vals[GOOD][0],
                     vals[BAD][1], vals[GOOD][1], vals[BAD][2], vals[GOOD][2])


def _backward_pass(loan: LoanSpec, discount: DiscountSpec, market: MarketModel,
                   hazards: HazardModel, recovery: RecoveryModel) -> MomentSet:
    """Advance all six moment streams from maturity down to time 0."""
    n = loan.term
    check_horizon(n, ("hazards", hazards.term), ("recovery", recovery.term),
                  ("market persistence", market.horizon))
    v = discount.factor
    v2 = v * v
    phi = loan.exposure_profile().tolist()
    r = loan.instalments.tolist()
    gam = loan.prepay_charge.tolist()
    lam = (hazards.default_bad.tolist(), hazards.default_good.tolist())
    mu = (hazards.prepay_bad.tolist(), hazards.prepay_good.tolist())
    persist = (market.persist_bad.tolist(), market.persist_good.tolist())
    mean_z = (recovery.mean_bad.tolist(), recovery.mean_good.tolist())
    second_z = (recovery.second_bad.tolist(), recovery.second_good.tolist())

    seed = terminal_moments(loan, discount, hazards, recovery)
    m1 = [seed.first_bad, seed.first_good]
    m2 = [seed.second_bad, seed.second_good]
    cross = [seed.cross_bad, seed.cross_good]

    for h in range(n - 1, 0, -1):
        i = h - 1
        ph = phi[i]
        rh = r[i]
        new_m1 = [0.0, 0.0]
        new_m2 = [0.0, 0.0]
        new_cross = [0.0, 0.0]
        for s in (0, 1):
            o = 1 - s
            lam_s = lam[s][i]
            mu_s = mu[s][i]
            stay = persist[s][i]
            survive = 1.0 - lam_s - mu_s
            exit_mean = lam_s * ph * mean_z[s][i] + mu_s * gam[i] * ph
            cont_mean = rh + stay * m1[s] + (1.0 - stay) * m1[o]
            new_m1[s] = v * (exit_mean + survive * cont_mean)
            new_m2[s] = v2 * (
                lam_s * ph * ph * second_z[s][i]
                + mu_s * gam[i] * gam[i] * ph * ph
                + survive * (rh * rh
                             + stay * (2.0 * rh * m1[s] + m2[s])
                             + (1.0 - stay) * (2.0 * rh * m1[o] + m2[o]))
            )
            mixed_mean = stay * m1[s] + (1.0 - stay) * m1[o]
            new_cross[s] = v2 * (
                exit_mean * exit_mean
                + 2.0 * survive * exit_mean * cont_mean
                + survive * survive * (rh * rh + 2.0 * rh * mixed_mean
                                       + stay * cross[s] + (1.0 - stay) * cross[o])
            )
        m1, m2, cross = new_m1, new_m2, new_cross

    return MomentSet(loan.principal, m1[0], m1[1], m2[0], m2[1], cross[0], cross[1])


def backward_first_two_moments(loan: LoanSpec, discount: DiscountSpec,
                               market: MarketModel, hazards: HazardModel,
                               recovery: RecoveryModel) -> MomentSet:
    """E[R(0)], E[R(0)^2] (and the pair cross moment) per initial state."""
    return _backward_pass(loan, discount, market, hazards, recovery)


def backward_cross_moment(loan: LoanSpec, discount: DiscountSpec,
                          market: MarketModel, hazards: HazardModel,
                          recovery: RecoveryModel) -> tuple[float, float]:
    """E[R1(0)*R2(0)] for an exchangeable pair, per initial state (B, G)."""
    moments = _backward_pass(loan, discount, market, hazards, recovery)
    return moments.cross_bad, moments.cross_good
