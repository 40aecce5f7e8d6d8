"""Borrower behavior: default/prepayment intensities and recovery rates.

Intensities are monthly exit probabilities conditioned on survival and on
the market state in force during the month.  Recovery rates on default are
described by their first two moments; a beta parameterization is attached
when the model must also be sampled.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market import BAD, GOOD, ensure_state
from .validation import ValidationError, as_float_array, expand_to, require


@dataclass(frozen=True)
class HazardModel:
    """Monthly default and prepayment intensities per market state.

    Prepayment at maturity is meaningless, so the last prepayment entry is
    forced to zero; constructors accept term-1 prepayment entries and pad.
    """

    default_bad: np.ndarray
    default_good: np.ndarray
    prepay_bad: np.ndarray
    prepay_good: np.ndarray

    def __post_init__(self):
        lam_b = as_float_array(self.default_bad, "default_bad")
        lam_g = as_float_array(self.default_good, "default_good")
        n = lam_b.size
        require(lam_g.size == n, "default_good: length differs from default_bad")
        mu_b = self._pad_prepay(self.prepay_bad, n, "prepay_bad")
        mu_g = self._pad_prepay(self.prepay_good, n, "prepay_good")
        for name, arr in (("default_bad", lam_b), ("default_good", lam_g),
                          ("prepay_bad", mu_b), ("prepay_good", mu_g)):
            require(bool(np.all((arr >= 0.0) & (arr <= 1.0))),
                    f"{name}: intensity out of [0,1]")
        for name, lam, mu in (("bad", lam_b, mu_b), ("good", lam_g, mu_g)):
            require(bool(np.all(lam + mu <= 1.0 + 1e-15)),
                    f"{name}-state intensities: default + prepayment exceeds 1")
        object.__setattr__(self, "default_bad", lam_b)
        object.__setattr__(self, "default_good", lam_g)
        object.__setattr__(self, "prepay_bad", mu_b)
        object.__setattr__(self, "prepay_good", mu_g)

    @staticmethod
    def _pad_prepay(values, n: int, name: str) -> np.ndarray:
        arr = as_float_array(values, name)
        if arr.size == 1:
            arr = np.full(n, arr[0])
            arr[n - 1] = 0.0
            return arr
        if arr.size == n - 1:
            return np.append(arr, 0.0)
        require(arr.size == n, f"{name}: expected {n - 1} or {n} entries, got {arr.size}")
        require(arr[n - 1] == 0.0, f"{name}: prepayment at maturity must be zero")
        return arr.copy()

    @classmethod
    def constant(cls, term: int, default_bad: float, default_good: float,
                 prepay_bad: float, prepay_good: float) -> "HazardModel":
        return cls(np.full(term, default_bad), np.full(term, default_good),
                   prepay_bad, prepay_good)

    @property
    def term(self) -> int:
        return int(self.default_bad.size)

    def default_rate(self, state: str, h: int) -> float:
        ensure_state(state)
        seq = self.default_bad if state == BAD else self.default_good
        return float(seq[h - 1])

    def prepay_rate(self, state: str, h: int) -> float:
        ensure_state(state)
        seq = self.prepay_bad if state == BAD else self.prepay_good
        return float(seq[h - 1])


def beta_from_moments(mean: float, sd: float) -> tuple[float, float]:
    """Beta shape parameters (a, b) matching a given mean and sd on [0,1]."""
    require(0.0 < mean < 1.0, "beta mean must lie strictly inside (0,1)")
    require(sd > 0.0, "beta sd must be positive")
    bound = mean * (1.0 - mean)
    if sd * sd >= bound:
        raise ValidationError(
            f"variance exceeds beta bound: sd^2 = {sd * sd:.6g} >= "
            f"mean*(1-mean) = {bound:.6g}"
        )
    k = bound / (sd * sd) - 1.0
    return mean * k, (1.0 - mean) * k


def beta_raw_moments(a: float, b: float) -> tuple[float, float]:
    """First two raw moments a/(a+b) and a(a+1)/((a+b)(a+b+1))."""
    require(a > 0.0 and b > 0.0, "beta parameters must be positive")
    mean = a / (a + b)
    second = (a + 1.0) * a / ((a + b + 1.0) * (a + b))
    return mean, second


@dataclass(frozen=True)
class RecoveryModel:
    """Per-state, per-month recovery moments E[Z] and E[Z^2].

    `beta_bad` / `beta_good` hold per-month (a, b) rows when the recovery
    distribution is known; the analytic engines never need them, only the
    simulator does.  A row (-1, z) marks a point mass at z (zero-sd case).
    """

    mean_bad: np.ndarray
    second_bad: np.ndarray
    mean_good: np.ndarray
    second_good: np.ndarray
    beta_bad: np.ndarray | None = None   # shape (term, 2)
    beta_good: np.ndarray | None = None

    def __post_init__(self):
        mb = as_float_array(self.mean_bad, "recovery mean_bad")
        n = mb.size
        sb = expand_to(self.second_bad, n, "recovery second_bad")
        mg = expand_to(self.mean_good, n, "recovery mean_good")
        sg = expand_to(self.second_good, n, "recovery second_good")
        for name, m, s in (("bad", mb, sb), ("good", mg, sg)):
            require(bool(np.all((m >= 0.0) & (m <= 1.0))),
                    f"recovery {name}: mean out of [0,1]")
            require(bool(np.all(s >= m * m - 1e-15)),
                    f"recovery {name}: second moment below mean^2 (negative variance)")
            require(bool(np.all(s <= m + 1e-15)),
                    f"recovery {name}: second moment above mean (support is [0,1])")
        object.__setattr__(self, "mean_bad", mb)
        object.__setattr__(self, "second_bad", sb)
        object.__setattr__(self, "mean_good", mg)
        object.__setattr__(self, "second_good", sg)
        for name, betas in (("beta_bad", self.beta_bad), ("beta_good", self.beta_good)):
            if betas is None:
                continue
            arr = np.asarray(betas, dtype=np.float64)
            require(arr.shape == (n, 2), f"{name}: expected shape ({n}, 2)")
            point = arr[:, 0] == -1.0
            require(bool(np.all((arr[~point] > 0.0))),
                    f"{name}: shape parameters must be positive")
            require(bool(np.all((arr[point, 1] >= 0.0) & (arr[point, 1] <= 1.0))),
                    f"{name}: point-mass value out of [0,1]")
            object.__setattr__(self, name, arr)

    @classmethod
    def from_moments(cls, term: int, bad: tuple[float, float],
                     good: tuple[float, float]) -> "RecoveryModel":
        """Build from (mean, sd) pairs, attaching matched beta parameters."""
        out = {}
        for label, (mean, sd) in (("bad", bad), ("good", good)):
            if sd == 0.0:
                moments = (np.full(term, mean), np.full(term, mean * mean))
                betas = np.tile([-1.0, mean], (term, 1))  # point mass
            else:
                a, b = beta_from_moments(mean, sd)
                moments = (np.full(term, mean), np.full(term, mean * mean + sd * sd))
                betas = np.tile([a, b], (term, 1))
            out[label] = (moments, betas)
        (mb, sb), beta_b = out["bad"]
        (mg, sg), beta_g = out["good"]
        return cls(mb, sb, mg, sg, beta_b, beta_g)

    @classmethod
    def from_beta(cls, term: int, bad: tuple[float, float],
                  good: tuple[float, float]) -> "RecoveryModel":
        m_b, s_b = beta_raw_moments(*bad)
        m_g, s_g = beta_raw_moments(*good)
        return cls(np.full(term, m_b), np.full(term, s_b),
                   np.full(term, m_g), np.full(term, s_g),
                   np.tile(bad, (term, 1)), np.tile(good, (term, 1)))

    @property
    def term(self) -> int:
        return int(self.mean_bad.size)

    @property
    def has_distribution(self) -> bool:
        return self.beta_bad is not None and self.beta_good is not None


def recovery_moments(model: RecoveryModel, state: str, h: int) -> tuple[float, float]:
    """(E[Z], E[Z^2]) for a default in `state` at month h."""
    ensure_state(state)
    if not 1 <= h <= model.term:
        raise IndexError(f"month {h} outside 1..{model.term}")
    if state == BAD:
        return float(model.mean_bad[h - 1]), float(model.second_bad[h - 1])
    return float(model.mean_good[h - 1]), float(model.second_good[h - 1])


def sample_recovery(model: RecoveryModel, state: str, h: int, seed: int,
                    size: int | None = None):
    """Beta-distributed recovery draw(s); requires the beta parameterization."""
    ensure_state(state)
    betas = model.beta_bad if state == BAD else model.beta_good
    if betas is None:
        raise ValidationError("sampling requires a distributional family "
                              "(recovery model carries moments only)")
    if not 1 <= h <= model.term:
        raise IndexError(f"month {h} outside 1..{model.term}")
    a, b = betas[h - 1]
    if a == -1.0:  # point mass
        return float(b) if size is None else np.full(size, b)
    rng = np.random.default_rng(seed)
    draw = rng.beta(a, b, size=size)
    return float(draw) if size is None else draw
