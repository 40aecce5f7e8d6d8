"""Monte Carlo oracle: simulate exits and recoveries along sampled paths.

The simulator realizes the exit-event distribution directly, providing a
statistically independent check on the analytic engines.  Replications are
driven by counter-based uniform streams, so a given seed yields the same
result regardless of thread count, chunking or backend invocation order.

The default backend is the numba kernel set; set LOANRNPV_BACKEND=numpy
(or pass backend="numpy") for the pure-numpy fallback.  A small benchmark
comparing the two lives in benchmarks/bench_mc.py.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _mc_numpy
from ._mc_common import KIND_DEFAULT, KIND_PREPAY, KIND_REGULAR, build_kernel_inputs
from ._rng import seed_hash
from .behavior import HazardModel, RecoveryModel
from .market import MarketModel
from .schedule import DiscountSpec, LoanSpec
from .validation import ValidationError, require

try:
    from . import _mc_numba
    NUMBA_AVAILABLE = _mc_numba.NUMBA_AVAILABLE
except ImportError:  # pragma: no cover
    _mc_numba = None
    NUMBA_AVAILABLE = False

ENV_BACKEND = "LOANRNPV_BACKEND"


def active_backend(override: str | None = None) -> str:
    """Resolve the simulation backend: explicit override, env flag, default."""
    choice = (override or os.environ.get(ENV_BACKEND, "auto")).lower()
    if choice in ("auto", ""):
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if choice == "numba":
        if not NUMBA_AVAILABLE:
            raise ValidationError("numba backend requested but numba is not installed")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValidationError(f"unknown simulation backend {choice!r}")


@dataclass(frozen=True)
class SimConfig:
    """Replication count, seed, and optional antithetic market paths."""

    replications: int
    seed: int
    antithetic: bool = False

    def __post_init__(self):
        require(self.replications >= 1, "replications must be at least 1")


@dataclass(frozen=True)
class SingleSimResult:
    """Sample moments of the net result for one loan, with standard errors.

    Exit records (month, kind, state in force) are kept per replication so
    event frequencies can be compared against analytic probabilities.
    """

    replications: int
    mean: float
    sd: float
    se_mean: float
    se_sd: float
    values: np.ndarray
    exit_times: np.ndarray
    exit_kinds: np.ndarray
    exit_states: np.ndarray


@dataclass(frozen=True)
class PairSimResult:
    """Sample covariance of two exchangeable loans sharing each path."""

    replications: int
    mean_1: float
    mean_2: float
    sd_1: float
    sd_2: float
    covariance: float
    se_mean: float
    se_sd: float
    se_covariance: float
    values_1: np.ndarray
    values_2: np.ndarray
    exit_times_1: np.ndarray
    exit_kinds_1: np.ndarray
    exit_states_1: np.ndarray


def _dispatch(cfg: SimConfig, inputs, pair: bool, backend: str | None) -> dict:
    name = active_backend(backend)
    hashed = seed_hash(cfg.seed)
    if name == "numba":
        return _mc_numba.simulate(hashed, cfg.replications, cfg.antithetic,
                                  inputs, pair)
    return _mc_numpy.simulate(hashed, cfg.replications, cfg.antithetic,
                              inputs, pair)


def _mean_sd_errors(values: np.ndarray) -> tuple[float, float, float, float]:
    n = values.size
    mean = float(values.mean())
    centered = values - mean
    m2 = float(np.mean(centered ** 2))
    m4 = float(np.mean(centered ** 4))
    sd = float(np.sqrt(m2))
    se_mean = sd / np.sqrt(n)
    # delta method on the sample sd; degenerate samples have zero error
    se_sd = float(np.sqrt(max(m4 - m2 * m2, 0.0) / (4.0 * m2 * n))) if m2 > 0 else 0.0
    return mean, sd, se_mean, se_sd


def simulate_single(loan: LoanSpec, discount: DiscountSpec, market: MarketModel,
                    hazards: HazardModel, recovery: RecoveryModel,
                    cfg: SimConfig, backend: str | None = None) -> SingleSimResult:
    """Sample the net result of one loan `cfg.replications` times."""
    inputs = build_kernel_inputs(loan, discount, market, hazards, recovery)
    raw = _dispatch(cfg, inputs, pair=False, backend=backend)
    mean, sd, se_mean, se_sd = _mean_sd_errors(raw["values_1"])
    return SingleSimResult(cfg.replications, mean, sd, se_mean, se_sd,
                           raw["values_1"], raw["times_1"], raw["kinds_1"],
                           raw["states_1"])


def simulate_pair(loan: LoanSpec, discount: DiscountSpec, market: MarketModel,
                  hazards: HazardModel, recovery: RecoveryModel,
                  cfg: SimConfig, backend: str | None = None) -> PairSimResult:
    """Sample two loans per replication: one market path, independent exits."""
    inputs = build_kernel_inputs(loan, discount, market, hazards, recovery)
    raw = _dispatch(cfg, inputs, pair=True, backend=backend)
    v1, v2 = raw["values_1"], raw["values_2"]
    mean_1, sd_1, se_mean, se_sd = _mean_sd_errors(v1)
    mean_2, sd_2, _, _ = _mean_sd_errors(v2)
    c1 = v1 - mean_1
    c2 = v2 - mean_2
    n = v1.size
    cov = float(np.mean(c1 * c2))
    se_cov = float(np.sqrt(max(np.mean((c1 * c2) ** 2) - cov * cov, 0.0) / n))
    return PairSimResult(cfg.replications, mean_1, mean_2, sd_1, sd_2, cov,
                         se_mean, se_sd, se_cov,
                         v1, v2, raw["times_1"], raw["kinds_1"], raw["states_1"])


def event_frequencies(result: SingleSimResult, term: int) -> dict[str, np.ndarray]:
    """Observed exit-event counts, keyed like the analytic distribution.

    Returns counts for default-in-bad / default-in-good by month (term,),
    prepayment by month (term-1,), and the regular-completion count.
    """
    kinds = result.exit_kinds
    times = result.exit_times
    states = result.exit_states
    def_mask = kinds == KIND_DEFAULT
    pre_mask = kinds == KIND_PREPAY
    months = np.arange(1, term + 1)
    default_bad = np.array([
        int(np.sum(def_mask & (states == 0) & (times == h))) for h in months])
    default_good = np.array([
        int(np.sum(def_mask & (states == 1) & (times == h))) for h in months])
    prepay = np.array([
        int(np.sum(pre_mask & (times == h))) for h in months[:-1]])
    regular = int(np.sum(kinds == KIND_REGULAR))
    return {"default_bad": default_bad, "default_good": default_good,
            "prepay": prepay, "regular": np.array([regular])}


def warm_up(backend: str | None = None) -> None:
    """Trigger kernel compilation so timed runs measure simulation only."""
    loan = LoanSpec.level(100.0, 30.0, 4)
    discount = DiscountSpec.from_annual(0.05)
    mkt = MarketModel.homogeneous("B", 0.9, 0.9, 4)
    hz = HazardModel.constant(4, 0.4, 0.3, 0.1, 0.1)
    rec = RecoveryModel.from_moments(4, (0.4, 0.2), (0.5, 0.2))
    cfg = SimConfig(replications=64, seed=7)
    simulate_single(loan, discount, mkt, hz, rec, cfg, backend=backend)
    simulate_pair(loan, discount, mkt, hz, rec, cfg, backend=backend)
