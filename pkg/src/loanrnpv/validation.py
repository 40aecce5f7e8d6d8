"""Shared input checks and error types."""
from __future__ import annotations

import numpy as np


class ValidationError(ValueError):
    """Raised when user-supplied model inputs are inconsistent or out of range."""


class ConsistencyError(RuntimeError):
    """Raised when an internal cross-check fails (e.g. probability mass off 1)."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    require(arr.ndim == 1, f"{name}: expected a scalar or 1-d sequence")
    require(bool(np.all(np.isfinite(arr))), f"{name}: entries must be finite")
    return arr


def expand_to(values, length: int, name: str) -> np.ndarray:
    """Broadcast a scalar to `length`, or validate a sequence of that length."""
    arr = as_float_array(values, name)
    if arr.size == 1:
        return np.full(length, arr[0])
    require(arr.size == length, f"{name}: expected {length} entries, got {arr.size}")
    return arr


def check_horizon(term: int, *lengths: tuple[str, int]) -> None:
    """All model sequences must cover the loan term."""
    for name, size in lengths:
        require(size >= term, f"{name}: covers {size} periods, loan term is {term}")
