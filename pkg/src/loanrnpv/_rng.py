"""Counter-based uniform streams (splitmix64 finalizer over key + counter).

Every (replication, purpose) pair owns an independent stream addressed by
a 64-bit key; draw j of a stream is a pure function of (key, j).  Random
access means simulation lanes never contend for generator state, so
results are independent of chunking, thread count and evaluation order.

Scalar helpers work on plain Python ints (numpy scalar arithmetic warns on
wraparound); vectorized helpers operate on uint64 arrays, which wrap
silently.  The numba kernels re-implement the same mixing inline.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
UNIT_SCALE = 1.0 / 9007199254740992.0  # 2**-53

# stream purposes within one replication
TAG_MARKET = 0
TAG_EXIT_1 = 1
TAG_EXIT_2 = 2
TAG_RECOVERY_1 = 3
TAG_RECOVERY_2 = 4
STREAMS_PER_REP = 8


def mix64_int(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_A) & MASK64
    z = ((z ^ (z >> 27)) * MIX_B) & MASK64
    return z ^ (z >> 31)


def seed_hash(seed: int) -> int:
    """One-time hash of the user seed shared by all streams of a run."""
    return mix64_int((int(seed) & MASK64) + GOLDEN)


def stream_key_int(hashed_seed: int, stream: int) -> int:
    return mix64_int(hashed_seed ^ mix64_int((stream & MASK64) + GOLDEN))


def uniform_int(key: int, pos: int) -> float:
    """Draw `pos` of the stream at `key`, strictly inside (0, 1)."""
    z = mix64_int((key + (pos * GOLDEN)) & MASK64)
    return ((z >> 11) + 0.5) * UNIT_SCALE


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_A)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_B)
    return z ^ (z >> np.uint64(31))


def stream_keys(hashed_seed: int, streams: np.ndarray) -> np.ndarray:
    """Vectorized `stream_key_int` for a uint64 array of stream ids."""
    inner = _mix64_array(streams + np.uint64(GOLDEN))
    return _mix64_array(np.uint64(hashed_seed) ^ inner)


def uniforms_at(keys: np.ndarray, pos) -> np.ndarray:
    """Vectorized draw at position(s) `pos` of each stream in `keys`.

    `pos` is a nonnegative int scalar or an int64 array matching `keys`.
    """
    if np.isscalar(pos):
        offset = np.uint64((pos * GOLDEN) & MASK64)
        z = _mix64_array(keys + offset)
    else:
        z = _mix64_array(keys + pos.astype(np.uint64) * np.uint64(GOLDEN))
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * UNIT_SCALE
