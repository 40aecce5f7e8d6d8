"""Contractual amortization plan: internal rate of return, exposure, risk-free NPV.

A loan pays out the principal at time 0 against a monthly instalment
schedule.  The contractual monthly rate is the internal rate of return
that reprices the schedule to the principal; the exposure at month h is
the contractual-rate present value of the instalments still unpaid at h.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import ValidationError, as_float_array, expand_to, require

IRR_REL_TOL = 1e-12


def solve_internal_rate(principal: float, instalments) -> float:
    """Monthly rate x with principal = sum of instalments discounted at x.

    Bracketed bisection on [0, 1]; the schedule NPV is strictly decreasing
    in the rate, so convergence is unconditional when a root exists.
    """
    r = as_float_array(instalments, "instalments")
    require(np.isfinite(principal) and principal > 0, "principal must be positive")
    total = float(r.sum())
    periods = np.arange(1, r.size + 1, dtype=np.float64)

    def npv(rate: float) -> float:
        return float(np.sum(r * (1.0 + rate) ** (-periods)))

    if abs(total - principal) <= IRR_REL_TOL * principal:
        return 0.0
    if total < principal:
        raise ValidationError(
            "no positive IRR: instalments total less than the principal"
        )
    lo, hi = 0.0, 1.0
    if npv(hi) > principal:
        raise ValidationError("no positive IRR: rate exceeds bracketing interval [0, 1]")
    # bisection with a secant (regula falsi) refinement step at the end
    f_lo, f_hi = npv(lo) - principal, npv(hi) - principal
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = npv(mid) - principal
        if f_mid > 0.0:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if hi - lo <= IRR_REL_TOL * max(lo, 1e-3):
            break
    if f_lo != f_hi:
        x = lo - f_lo * (hi - lo) / (f_hi - f_lo)
    else:
        x = 0.5 * (lo + hi)
    return float(min(max(x, lo), hi))


@dataclass(frozen=True)
class LoanSpec:
    """Principal, instalment schedule, prepayment charges and the solved rate.

    `prepay_charge[h-1]` multiplies the exposure repaid on prepayment at
    month h; the final entry is never used (no prepayment at maturity).
    """

    principal: float
    instalments: np.ndarray
    prepay_charge: np.ndarray = 1.0
    monthly_rate: float = field(default=None)  # solved when not supplied

    def __post_init__(self):
        inst = as_float_array(self.instalments, "instalments")
        require(bool(np.all(inst >= 0.0)), "instalments must be nonnegative")
        require(bool(np.any(inst > 0.0)), "at least one instalment must be positive")
        require(inst.size >= 1, "term must be at least one month")
        charge = expand_to(self.prepay_charge, inst.size, "prepay_charge")
        require(bool(np.all(charge >= 1.0)), "prepay_charge entries must be >= 1")
        object.__setattr__(self, "instalments", inst)
        object.__setattr__(self, "prepay_charge", charge)
        if self.monthly_rate is None:
            object.__setattr__(
                self, "monthly_rate", solve_internal_rate(self.principal, inst)
            )

    @classmethod
    def level(cls, principal: float, instalment: float, term: int,
              prepay_charge=1.0) -> "LoanSpec":
        require(term >= 1, "term must be at least one month")
        return cls(principal, np.full(int(term), float(instalment)), prepay_charge)

    @property
    def term(self) -> int:
        return int(self.instalments.size)

    @property
    def annual_rate(self) -> float:
        """Contractual rate compounded to an annual figure."""
        return (1.0 + self.monthly_rate) ** 12 - 1.0

    def exposure(self, h: int) -> float:
        return exposure_at_default(self, h)

    def exposure_profile(self) -> np.ndarray:
        """exposure(h) for h = 1..term as one array."""
        n = self.term
        j = np.arange(1, n + 1, dtype=np.float64)
        out = np.empty(n)
        for h in range(1, n + 1):
            tail = slice(h - 1, n)
            out[h - 1] = np.sum(
                self.instalments[tail] * (1.0 + self.monthly_rate) ** (-(j[tail] - h))
            )
        return out


def exposure_at_default(loan: LoanSpec, h: int) -> float:
    """Present value at the contractual rate of instalments due at h..term.

    Includes the instalment due at h itself; exposure(1) equals
    principal * (1 + monthly_rate) for an exactly-priced schedule.
    """
    n = loan.term
    if not 1 <= h <= n:
        raise IndexError(f"month {h} outside 1..{n}")
    j = np.arange(h, n + 1, dtype=np.float64)
    return float(np.sum(loan.instalments[h - 1:] * (1.0 + loan.monthly_rate) ** (-(j - h))))


@dataclass(frozen=True)
class DiscountSpec:
    """Valuation rate: annual figure, equivalent monthly rate, monthly factor."""

    annual_rate: float
    monthly_rate: float
    factor: float  # 1 / (1 + monthly_rate)

    @classmethod
    def from_annual(cls, annual_rate: float) -> "DiscountSpec":
        require(np.isfinite(annual_rate) and annual_rate >= 0.0,
                "annual discount rate must be nonnegative")
        monthly = (1.0 + annual_rate) ** (1.0 / 12.0) - 1.0
        return cls(annual_rate, monthly, 1.0 / (1.0 + monthly))

    @classmethod
    def from_monthly(cls, monthly_rate: float) -> "DiscountSpec":
        require(np.isfinite(monthly_rate) and monthly_rate >= 0.0,
                "monthly discount rate must be nonnegative")
        return cls((1.0 + monthly_rate) ** 12 - 1.0, monthly_rate,
                   1.0 / (1.0 + monthly_rate))


def certain_npv(loan: LoanSpec, discount: DiscountSpec) -> float:
    """Net present value earned if every instalment is paid on schedule."""
    n = loan.term
    j = np.arange(1, n + 1, dtype=np.float64)
    return float(np.sum(loan.instalments * ((1.0 + discount.monthly_rate) ** (-j)
                                            - (1.0 + loan.monthly_rate) ** (-j))))
