"""Probability method: at-risk recursions, exit-event distribution, moments.

A loan that is still alive at time h with the market in a given state is
"at risk" there.  Propagating the at-risk mass forward month by month
yields the probability of every exit event (default per state, prepayment,
regular completion), from which the first two moments of the discounted
result follow by direct summation over that finite distribution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .behavior import HazardModel, RecoveryModel
from .market import BAD, GOOD, MarketModel
from .schedule import DiscountSpec, LoanSpec
from .validation import ConsistencyError, check_horizon, require

MASS_TOL = 1e-9


@dataclass(frozen=True)
class AtRiskTable:
    """P(alive at time h, market in state column) for each initial state.

    Rows h = 0..term-1; columns (B, G).  Row 0 is the indicator of the
    initial state: the loan is surely alive at time 0 in the known state.
    """

    start_bad: np.ndarray
    start_good: np.ndarray

    def block(self, initial_state: str) -> np.ndarray:
        return self.start_bad if initial_state == BAD else self.start_good

    @property
    def term(self) -> int:
        return int(self.start_bad.shape[0])


def compute_at_risk(loan: LoanSpec, market: MarketModel,
                    hazards: HazardModel) -> AtRiskTable:
    """At-risk probabilities for h = 0..term-1, both initial states.

    One month's update: mass alive in a state survives that month's exit
    intensities, then moves with the transition probabilities in force at
    the month's end.
    """
    n = loan.term
    check_horizon(n, ("hazards", hazards.term),
                  ("market persistence", market.horizon))
    lam_b = hazards.default_bad.tolist()
    lam_g = hazards.default_good.tolist()
    mu_b = hazards.prepay_bad.tolist()
    mu_g = hazards.prepay_good.tolist()
    b = market.persist_bad.tolist()
    g = market.persist_good.tolist()

    blocks = []
    for s0 in (0, 1):
        table = np.empty((n, 2))
        q_b, q_g = (1.0, 0.0) if s0 == 0 else (0.0, 1.0)
        table[0] = (q_b, q_g)
        for h in range(1, n):
            keep_b = q_b * (1.0 - lam_b[h - 1] - mu_b[h - 1])
            keep_g = q_g * (1.0 - lam_g[h - 1] - mu_g[h - 1])
            q_b = keep_b * b[h - 1] + keep_g * (1.0 - g[h - 1])
            q_g = keep_g * g[h - 1] + keep_b * (1.0 - b[h - 1])
            table[h] = (q_b, q_g)
        blocks.append(table)
    return AtRiskTable(blocks[0], blocks[1])


@dataclass(frozen=True)
class EventBlock:
    """Exit-event probabilities for one initial state.

    default_bad[h-1] / default_good[h-1]: default at month h with the
    market bad/good during that month; prepay[h-1]: prepayment at month
    h <= term-1 (state marginalized); regular: full repayment at maturity.
    """

    regular: float
    default_bad: np.ndarray
    default_good: np.ndarray
    prepay: np.ndarray

    @property
    def total_mass(self) -> float:
        return float(self.regular + self.default_bad.sum()
                     + self.default_good.sum() + self.prepay.sum())

    @property
    def atom_count(self) -> int:
        """Number of events in the exit partition, regular repayment included."""
        return int(self.default_bad.size + self.default_good.size
                   + self.prepay.size + 1)


@dataclass(frozen=True)
class EventDistribution:
    start_bad: EventBlock
    start_good: EventBlock

    def block(self, initial_state: str) -> EventBlock:
        return self.start_bad if initial_state == BAD else self.start_good


def event_probabilities(at_risk: AtRiskTable, hazards: HazardModel) -> EventDistribution:
    """Exit-event distribution from the at-risk table; mass must close to 1."""
    n = at_risk.term
    require(hazards.term == n, "hazards: term differs from at-risk table")
    blocks = {}
    for s0, name in ((BAD, "start_bad"), (GOOD, "start_good")):
        q = at_risk.block(s0)
        p_def_b = q[:, 0] * hazards.default_bad
        p_def_g = q[:, 1] * hazards.default_good
        p_pre = (q[:, 0] * hazards.prepay_bad + q[:, 1] * hazards.prepay_good)[: n - 1]
        p_reg = float(q[n - 1, 0] * (1.0 - hazards.default_bad[n - 1])
                      + q[n - 1, 1] * (1.0 - hazards.default_good[n - 1]))
        block = EventBlock(p_reg, p_def_b, p_def_g, p_pre)
        residual = abs(block.total_mass - 1.0)
        if residual > MASS_TOL:
            raise ConsistencyError(
                f"exit-event mass for initial state {s0} off unity by {residual:.3e}"
            )
        blocks[name] = block
    return EventDistribution(blocks["start_bad"], blocks["start_good"])


@dataclass(frozen=True)
class RnpvMoments:
    """First two raw moments of the net result V(0) per initial state."""

    first_bad: float
    second_bad: float
    first_good: float
    second_good: float

    def first(self, state: str) -> float:
        return self.first_bad if state == BAD else self.first_good

    def second(self, state: str) -> float:
        return self.second_bad if state == BAD else self.second_good

    def variance(self, state: str) -> float:
        return self.second(state) - self.first(state) ** 2

    def sd(self, state: str) -> float:
        return float(np.sqrt(max(self.variance(state), 0.0)))


def moments_forward(loan: LoanSpec, discount: DiscountSpec,
                    distribution: EventDistribution,
                    recovery: RecoveryModel) -> RnpvMoments:
    """E[V(0)] and E[V(0)^2] by summing over the exit-event distribution.

    A default at month h pays the instalments already collected plus the
    discounted random recovery on the exposure; squaring that branch uses
    E[(c + dZ)^2] = c^2 + 2cd E[Z] + d^2 E[Z^2].  Prepayment and regular
    branches are deterministic given the event.
    """
    n = loan.term
    check_horizon(n, ("recovery moments", recovery.term))
    v = discount.factor
    w = loan.principal
    vpow = v ** np.arange(n + 1, dtype=np.float64)
    paid = np.concatenate(([0.0], np.cumsum(loan.instalments * vpow[1:])))
    phi = loan.exposure_profile()
    disc_expo = vpow[1:] * phi                     # d_h for h = 1..n
    base = paid[:n] - w                            # c_h for h = 1..n
    charge = loan.prepay_charge

    out = {}
    for state in (BAD, GOOD):
        block = distribution.block(state)
        m1 = block.regular * (paid[n] - w)
        m2 = block.regular * (paid[n] - w) ** 2
        for lam_probs, mean_z, second_z in (
            (block.default_bad, recovery.mean_bad, recovery.second_bad),
            (block.default_good, recovery.mean_good, recovery.second_good),
        ):
            m1 += float(np.sum(lam_probs * (base + disc_expo * mean_z)))
            m2 += float(np.sum(lam_probs * (base * base
                                            + 2.0 * base * disc_expo * mean_z
                                            + disc_expo * disc_expo * second_z)))
        pre_val = base[: n - 1] + disc_expo[: n - 1] * charge[: n - 1]
        m1 += float(np.sum(block.prepay * pre_val))
        m2 += float(np.sum(block.prepay * pre_val * pre_val))
        out[state] = (m1, m2)
    return RnpvMoments(out[BAD][0], out[BAD][1], out[GOOD][0], out[GOOD][1])

