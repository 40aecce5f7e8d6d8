"""Shared kernel-input preparation for the simulation backends."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .behavior import HazardModel, RecoveryModel
from .market import MarketModel, STATE_INDEX
from .schedule import DiscountSpec, LoanSpec
from .validation import ValidationError, check_horizon

KIND_REGULAR = 0
KIND_DEFAULT = 1
KIND_PREPAY = 2


class KernelInputs(NamedTuple):
    """Flat, contiguous model arrays consumed by both simulation backends.

    State-indexed arrays use row 0 = bad, row 1 = good; month h lives at
    column h-1.  `beta_a` rows may carry the -1 point-mass sentinel with
    the constant recovery stored in `beta_b`.
    """

    n: int
    principal: float
    initial_state: int
    lam: np.ndarray       # (2, n) default intensities
    mu: np.ndarray        # (2, n) prepayment intensities, 0 at maturity
    persist: np.ndarray   # (2, n) persistence probabilities
    beta_a: np.ndarray    # (2, n)
    beta_b: np.ndarray    # (2, n)
    ann: np.ndarray       # (n+1,) discounted instalment prefix sums
    vpow: np.ndarray      # (n+1,) powers of the monthly discount factor
    phi: np.ndarray       # (n,) exposure profile
    gam: np.ndarray       # (n,) prepayment charges


def build_kernel_inputs(loan: LoanSpec, discount: DiscountSpec,
                        market: MarketModel, hazards: HazardModel,
                        recovery: RecoveryModel) -> KernelInputs:
    n = loan.term
    check_horizon(n, ("hazards", hazards.term), ("recovery", recovery.term),
                  ("market persistence", market.horizon))
    if not recovery.has_distribution:
        raise ValidationError("sampling requires a distributional family "
                              "(recovery model carries moments only)")
    vpow = discount.factor ** np.arange(n + 1, dtype=np.float64)
    ann = np.concatenate(([0.0], np.cumsum(loan.instalments * vpow[1:])))
    lam = np.ascontiguousarray(
        np.stack([hazards.default_bad[:n], hazards.default_good[:n]]))
    mu = np.ascontiguousarray(
        np.stack([hazards.prepay_bad[:n], hazards.prepay_good[:n]]))
    persist = np.ascontiguousarray(
        np.stack([market.persist_bad[:n], market.persist_good[:n]]))
    beta_a = np.ascontiguousarray(
        np.stack([recovery.beta_bad[:n, 0], recovery.beta_good[:n, 0]]))
    beta_b = np.ascontiguousarray(
        np.stack([recovery.beta_bad[:n, 1], recovery.beta_good[:n, 1]]))
    return KernelInputs(
        n=n,
        principal=float(loan.principal),
        initial_state=STATE_INDEX[market.initial_state],
        lam=lam, mu=mu, persist=persist,
        beta_a=beta_a, beta_b=beta_b,
        ann=np.ascontiguousarray(ann),
        vpow=np.ascontiguousarray(vpow),
        phi=np.ascontiguousarray(loan.exposure_profile()),
        gam=np.ascontiguousarray(loan.prepay_charge),
    )
