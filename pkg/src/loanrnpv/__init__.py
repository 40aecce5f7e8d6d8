"""Loan profitability under regime-dependent default and prepayment risk.

Computes the first two moments of the random net present value of a loan,
and of portfolios of exchangeable loans, with competing default/prepayment
intensities driven by a two-state Markov chain of credit-market conditions.
Three routes are provided and cross-checked: a forward probability method,
a backward recursion on conditional moments, and a Monte Carlo simulator.
"""
from .backward import (MomentSet, backward_cross_moment,
                       backward_first_two_moments, terminal_moments)
from .behavior import (HazardModel, RecoveryModel, beta_from_moments,
                       beta_raw_moments, recovery_moments, sample_recovery)
from .forward import (AtRiskTable, EventBlock, EventDistribution, RnpvMoments,
                      compute_at_risk, event_probabilities, moments_forward)
from .market import (BAD, GOOD, STATES, MarketModel, expected_sojourn,
                     sample_path, transition_matrix)
from .montecarlo import (PairSimResult, SimConfig, SingleSimResult,
                         active_backend, event_frequencies, simulate_pair,
                         simulate_single, warm_up)
from .portfolio import PortfolioStats, limit_cv, portfolio_moments
from .schedule import (DiscountSpec, LoanSpec, certain_npv, exposure_at_default,
                       solve_internal_rate)
from .validation import ConsistencyError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "AtRiskTable", "BAD", "ConsistencyError", "DiscountSpec", "EventBlock",
    "EventDistribution", "GOOD", "HazardModel", "LoanSpec", "MarketModel",
    "MomentSet", "PairSimResult", "PortfolioStats", "RecoveryModel",
    "RnpvMoments", "STATES", "SimConfig", "SingleSimResult", "ValidationError",
    "active_backend", "backward_cross_moment", "backward_first_two_moments",
    "beta_from_moments", "beta_raw_moments", "certain_npv", "compute_at_risk",
    "event_frequencies", "event_probabilities", "expected_sojourn",
    "exposure_at_default", "limit_cv", "moments_forward", "portfolio_moments",
    "recovery_moments", "sample_path", "sample_recovery", "simulate_pair",
    "simulate_single", "solve_internal_rate", "terminal_moments",
    "transition_matrix", "warm_up",
]
