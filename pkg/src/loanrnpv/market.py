"""Two-state Markov chain of credit-market conditions.

States are "B" (bad) and "G" (good).  The state in force during month h
(the interval [h-1, h)) is the one reached at time h-1; a transition may
occur at each integer time.  Persistence probabilities may vary by month.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import ValidationError, as_float_array, expand_to, require

BAD = "B"
GOOD = "G"
STATES = (BAD, GOOD)
STATE_INDEX = {BAD: 0, GOOD: 1}


def ensure_state(state: str) -> str:
    require(state in STATES, f"state must be one of {STATES}, got {state!r}")
    return state


@dataclass(frozen=True)
class MarketModel:
    """Initial state plus monthly persistence probabilities of each state."""

    initial_state: str
    persist_bad: np.ndarray
    persist_good: np.ndarray

    def __post_init__(self):
        ensure_state(self.initial_state)
        b = as_float_array(self.persist_bad, "persist_bad")
        g = as_float_array(self.persist_good, "persist_good")
        for name, arr in (("persist_bad", b), ("persist_good", g)):
            require(bool(np.all((arr >= 0.0) & (arr <= 1.0))),
                    f"{name}: persistence probability out of [0,1]")
        object.__setattr__(self, "persist_bad", b)
        object.__setattr__(self, "persist_good", g)

    @classmethod
    def homogeneous(cls, initial_state: str, persist_bad: float,
                    persist_good: float, horizon: int) -> "MarketModel":
        return cls(initial_state,
                   expand_to(persist_bad, horizon, "persist_bad"),
                   expand_to(persist_good, horizon, "persist_good"))

    @property
    def horizon(self) -> int:
        return int(min(self.persist_bad.size, self.persist_good.size))


def transition_matrix(model: MarketModel, h: int) -> np.ndarray:
    """Row-stochastic one-step matrix for the move at time h, rows (B, G)."""
    if not 1 <= h <= model.horizon:
        raise IndexError(f"period {h} outside 1..{model.horizon}")
    b = model.persist_bad[h - 1]
    g = model.persist_good[h - 1]
    return np.array([[b, 1.0 - b], [1.0 - g, g]])


def expected_sojourn(model: MarketModel, state: str) -> float:
    """Mean consecutive months spent in `state` (homogeneous chains only)."""
    ensure_state(state)
    seq = model.persist_bad if state == BAD else model.persist_good
    if not np.all(seq == seq[0]):
        raise ValidationError(
            "expected sojourn is defined only for constant persistence sequences"
        )
    p = float(seq[0])
    if p >= 1.0:
        raise ValidationError("persistence of 1 gives an infinite expected sojourn")
    return 1.0 / (1.0 - p)


def sample_path(model: MarketModel, horizon: int, seed: int) -> np.ndarray:
    """States at times 0..horizon as indices (0 = B, 1 = G), fixed by `seed`."""
    require(horizon <= model.horizon,
            f"horizon {horizon} exceeds persistence coverage {model.horizon}")
    rng = np.random.default_rng(seed)
    u = rng.random(horizon)
    path = np.empty(horizon + 1, dtype=np.int8)
    state = STATE_INDEX[model.initial_state]
    path[0] = state
    for h in range(1, horizon + 1):
        persist = model.persist_bad[h - 1] if state == 0 else model.persist_good[h - 1]
        if u[h - 1] >= persist:
            state = 1 - state
        path[h] = state
    return path
