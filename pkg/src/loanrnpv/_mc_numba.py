"""Numba simulation kernels: one scalar lane per replication, prange across.

Each lane addresses its uniforms by (stream key, position) exactly like the
numpy backend, and writes only its own output slots, so results do not
depend on the number of threads.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range

from ._mc_common import KIND_DEFAULT, KIND_PREPAY, KIND_REGULAR, KernelInputs
from ._rng import (GOLDEN, MIX_A, MIX_B, STREAMS_PER_REP, TAG_EXIT_1,
                   TAG_EXIT_2, TAG_MARKET, TAG_RECOVERY_1, TAG_RECOVERY_2,
                   UNIT_SCALE)

_GOLDEN = np.uint64(GOLDEN)
_MIX_A = np.uint64(MIX_A)
_MIX_B = np.uint64(MIX_B)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _S30)) * _MIX_A
    z = (z ^ (z >> _S27)) * _MIX_B
    return z ^ (z >> _S31)


@njit(cache=True)
def _stream_key(hashed_seed, stream):
    return _mix64(hashed_seed ^ _mix64(stream + _GOLDEN))


@njit(cache=True)
def _uniform(key, pos):
    z = _mix64(key + np.uint64(pos) * _GOLDEN)
    return (np.float64(z >> _S11) + 0.5) * UNIT_SCALE


@njit(cache=True)
def _gamma_mt(key, pos, a):
    """Marsaglia-Tsang for shape a >= 1; returns (draw, next position)."""
    d = a - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    while True:
        x = 0.0
        v = 0.0
        while True:
            u1 = _uniform(key, pos)
            u2 = _uniform(key, pos + 1)
            pos += 2
            x = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
            v = (1.0 + c * x) ** 3
            if v > 0.0:
                break
        u3 = _uniform(key, pos)
        pos += 1
        if u3 < 1.0 - 0.0331 * x ** 4:
            return d * v, pos
        if np.log(u3) < 0.5 * x * x + d * (1.0 - v + np.log(v)):
            return d * v, pos


@njit(cache=True)
def _gamma_draw(key, pos, a):
    if a < 1.0:
        g, pos = _gamma_mt(key, pos, a + 1.0)
        u = _uniform(key, pos)
        pos += 1
        return g * u ** (1.0 / a), pos
    return _gamma_mt(key, pos, a)


@njit(cache=True)
def _beta_draw(key, a, b):
    if a == -1.0:  # point mass
        return b
    ga, pos = _gamma_draw(key, 0, a)
    gb, _ = _gamma_draw(key, pos, b)
    return ga / (ga + gb)


@njit(cache=True)
def _run_lane(hashed_seed, rep, antithetic, pair_slot, n, s0, w,
              lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
              values, times, kinds, states):
    """Simulate one loan lane; `pair_slot` picks the exit/recovery streams."""
    rep_u = np.uint64(rep)
    market_rep = rep_u >> np.uint64(1) if antithetic else rep_u
    mirror = antithetic and (rep % 2 == 1)
    per = np.uint64(STREAMS_PER_REP)
    key_m = _stream_key(np.uint64(hashed_seed), market_rep * per
                        + np.uint64(TAG_MARKET))
    tag_exit = TAG_EXIT_2 if pair_slot == 2 else TAG_EXIT_1
    tag_rec = TAG_RECOVERY_2 if pair_slot == 2 else TAG_RECOVERY_1
    key_e = _stream_key(np.uint64(hashed_seed), rep_u * per + np.uint64(tag_exit))

    state = s0
    for h in range(1, n + 1):
        i = h - 1
        u = _uniform(key_e, i)
        lam_h = lam[state, i]
        mu_h = mu[state, i]
        if u < lam_h:
            key_r = _stream_key(np.uint64(hashed_seed),
                                rep_u * per + np.uint64(tag_rec))
            z = _beta_draw(key_r, beta_a[state, i], beta_b[state, i])
            values[rep] = ann[i] + vpow[h] * z * phi[i] - w
            times[rep] = h
            kinds[rep] = KIND_DEFAULT
            states[rep] = state
            return
        if u < lam_h + mu_h:
            values[rep] = ann[i] + vpow[h] * gam[i] * phi[i] - w
            times[rep] = h
            kinds[rep] = KIND_PREPAY
            states[rep] = state
            return
        if h < n:
            um = _uniform(key_m, i)
            if mirror:
                um = 1.0 - um
            if um >= persist[state, i]:
                state = 1 - state
    values[rep] = ann[n] - w
    times[rep] = n
    kinds[rep] = KIND_REGULAR
    states[rep] = state


@njit(cache=True, parallel=True)
def _run_single(hashed_seed, reps, antithetic, n, s0, w,
                lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
                values, times, kinds, states):
    for rep in prange(reps):
        _run_lane(hashed_seed, rep, antithetic, 1, n, s0, w,
                  lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
                  values, times, kinds, states)


@njit(cache=True, parallel=True)
def _run_pair(hashed_seed, reps, antithetic, n, s0, w,
              lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
              values_1, times_1, kinds_1, states_1,
              values_2, times_2, kinds_2, states_2):
    for rep in prange(reps):
        _run_lane(hashed_seed, rep, antithetic, 1, n, s0, w,
                  lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
                  values_1, times_1, kinds_1, states_1)
        _run_lane(hashed_seed, rep, antithetic, 2, n, s0, w,
                  lam, mu, persist, beta_a, beta_b, ann, vpow, phi, gam,
                  values_2, times_2, kinds_2, states_2)


def simulate(hashed_seed: int, reps: int, antithetic: bool,
             inputs: KernelInputs, pair: bool) -> dict:
    """Backend entry point with the same contract as the numpy version."""
    out = {
        "values_1": np.empty(reps), "times_1": np.empty(reps, np.int32),
        "kinds_1": np.empty(reps, np.int8), "states_1": np.empty(reps, np.int8),
    }
    args = (np.uint64(hashed_seed), reps, antithetic, inputs.n,
            inputs.initial_state, inputs.principal,
            inputs.lam, inputs.mu, inputs.persist,
            inputs.beta_a, inputs.beta_b,
            inputs.ann, inputs.vpow, inputs.phi, inputs.gam)
    if not pair:
        _run_single(*args, out["values_1"], out["times_1"],
                    out["kinds_1"], out["states_1"])
        return out
    out.update({
        "values_2": np.empty(reps), "times_2": np.empty(reps, np.int32),
        "kinds_2": np.empty(reps, np.int8), "states_2": np.empty(reps, np.int8),
    })
    _run_pair(*args,
              out["values_1"], out["times_1"], out["kinds_1"], out["states_1"],
              out["values_2"], out["times_2"], out["kinds_2"], out["states_2"])
    return out
