"""Pure-numpy simulation backend, vectorized across replications.

Mirrors the numba kernels draw for draw: every uniform is addressed by
(stream key, position), so chunking and evaluation order cannot change
the result.  Beta recoveries are sampled after the exit sweep, only for
the lanes that defaulted.
"""
from __future__ import annotations

import numpy as np

from ._mc_common import KIND_DEFAULT, KIND_PREPAY, KIND_REGULAR, KernelInputs
from ._rng import (STREAMS_PER_REP, TAG_EXIT_1, TAG_EXIT_2, TAG_MARKET,
                   TAG_RECOVERY_1, TAG_RECOVERY_2, stream_keys, uniforms_at)

CHUNK = 1 << 16


def _gamma_batch(keys: np.ndarray, pos: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Marsaglia-Tsang gamma draws with per-lane stream positions.

    Shapes a < 1 use the boost Gamma(a+1) * U^(1/a).  `pos` advances in
    place so several calls on the same streams stay sequential.
    """
    boost = a < 1.0
    a_eff = np.where(boost, a + 1.0, a)
    d = a_eff - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(keys.size)
    need = np.ones(keys.size, dtype=bool)
    while np.any(need):
        idx = np.nonzero(need)[0]
        u1 = uniforms_at(keys[idx], pos[idx])
        u2 = uniforms_at(keys[idx], pos[idx] + 1)
        pos[idx] += 2
        x = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        v = (1.0 + c[idx] * x) ** 3
        valid = v > 0.0
        vidx = idx[valid]
        u3 = uniforms_at(keys[vidx], pos[vidx])
        pos[vidx] += 1
        xv = x[valid]
        vv = v[valid]
        dv = d[vidx]
        accept = u3 < 1.0 - 0.0331 * xv ** 4
        hard = ~accept
        if np.any(hard):
            accept[hard] = (np.log(u3[hard])
                            < 0.5 * xv[hard] ** 2
                            + dv[hard] * (1.0 - vv[hard] + np.log(vv[hard])))
        hit = vidx[accept]
        out[hit] = dv[accept] * vv[accept]
        need[hit] = False
    if np.any(boost):
        u = uniforms_at(keys[boost], pos[boost])
        pos[boost] += 1
        out[boost] *= u ** (1.0 / a[boost])
    return out


def _beta_batch(keys: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Beta draws from per-lane streams; honors the point-mass sentinel."""
    z = np.empty(keys.size)
    point = a == -1.0
    z[point] = b[point]
    live = ~point
    if np.any(live):
        keys_live = keys[live]
        pos_live = np.zeros(keys_live.size, dtype=np.int64)
        ga = _gamma_batch(keys_live, pos_live, a[live])
        gb = _gamma_batch(keys_live, pos_live, b[live])
        z[live] = ga / (ga + gb)
    return z


def _sweep_exits(keys_exit, alive, state, h, inputs, values, times, kinds, states):
    """One month's exit draws for one loan over a chunk of lanes."""
    i = h - 1
    u = uniforms_at(keys_exit, i)
    lam_h = inputs.lam[state, i]
    mu_h = inputs.mu[state, i]
    defaulted = alive & (u < lam_h)
    prepaid = alive & ~defaulted & (u < lam_h + mu_h)
    for mask, kind in ((defaulted, KIND_DEFAULT), (prepaid, KIND_PREPAY)):
        times[mask] = h
        kinds[mask] = kind
        states[mask] = state[mask]
    values[prepaid] = (inputs.ann[i] + inputs.vpow[h] * inputs.gam[i]
                       * inputs.phi[i] - inputs.principal)
    alive &= ~(defaulted | prepaid)


def _resolve_defaults(hashed_seed, rep, tag, inputs, values, times, kinds, states):
    """Sample recoveries and fill values for lanes that defaulted."""
    mask = kinds == KIND_DEFAULT
    if not np.any(mask):
        return
    streams = rep[mask] * np.uint64(STREAMS_PER_REP) + np.uint64(tag)
    keys = stream_keys(hashed_seed, streams)
    st = states[mask].astype(np.int64)
    hh = times[mask].astype(np.int64)
    z = _beta_batch(keys, inputs.beta_a[st, hh - 1], inputs.beta_b[st, hh - 1])
    values[mask] = (inputs.ann[hh - 1] + inputs.vpow[hh] * z * inputs.phi[hh - 1]
                    - inputs.principal)


def simulate(hashed_seed: int, reps: int, antithetic: bool,
             inputs: KernelInputs, pair: bool, chunk: int = CHUNK) -> dict:
    """Run `reps` replications; returns per-lane values and exit records."""
    n = inputs.n
    out = {
        "values_1": np.empty(reps), "times_1": np.empty(reps, np.int32),
        "kinds_1": np.empty(reps, np.int8), "states_1": np.empty(reps, np.int8),
    }
    if pair:
        out.update({
            "values_2": np.empty(reps), "times_2": np.empty(reps, np.int32),
            "kinds_2": np.empty(reps, np.int8), "states_2": np.empty(reps, np.int8),
        })
    for lo in range(0, reps, chunk):
        hi = min(lo + chunk, reps)
        rep = np.arange(lo, hi, dtype=np.uint64)
        size = hi - lo
        market_rep = (rep >> np.uint64(1)) if antithetic else rep
        mirror = (rep & np.uint64(1)).astype(bool) if antithetic else None
        keys_m = stream_keys(
            hashed_seed,
            market_rep * np.uint64(STREAMS_PER_REP) + np.uint64(TAG_MARKET))
        keys_e1 = stream_keys(
            hashed_seed, rep * np.uint64(STREAMS_PER_REP) + np.uint64(TAG_EXIT_1))
        keys_e2 = stream_keys(
            hashed_seed,
            rep * np.uint64(STREAMS_PER_REP) + np.uint64(TAG_EXIT_2)) if pair else None

        state = np.full(size, inputs.initial_state, dtype=np.int64)
        alive_1 = np.ones(size, dtype=bool)
        v1 = np.zeros(size)
        t1 = np.zeros(size, np.int32)
        k1 = np.full(size, KIND_REGULAR, np.int8)
        s1 = np.zeros(size, np.int8)
        if pair:
            alive_2 = np.ones(size, dtype=bool)
            v2 = np.zeros(size)
            t2 = np.zeros(size, np.int32)
            k2 = np.full(size, KIND_REGULAR, np.int8)
            s2 = np.zeros(size, np.int8)

        for h in range(1, n + 1):
            _sweep_exits(keys_e1, alive_1, state, h, inputs, v1, t1, k1, s1)
            if pair:
                _sweep_exits(keys_e2, alive_2, state, h, inputs, v2, t2, k2, s2)
            if h < n:
                um = uniforms_at(keys_m, h - 1)
                if antithetic:
                    um[mirror] = 1.0 - um[mirror]
                stay = um < inputs.persist[state, h - 1]
                state = np.where(stay, state, 1 - state)

        final = inputs.ann[n] - inputs.principal
        for alive, v, t, s in (((alive_1, v1, t1, s1),)
                               + (((alive_2, v2, t2, s2),) if pair else ())):
            v[alive] = final
            t[alive] = n
            s[alive] = state[alive]

        _resolve_defaults(hashed_seed, rep, TAG_RECOVERY_1, inputs, v1, t1, k1, s1)
        out["values_1"][lo:hi] = v1
        out["times_1"][lo:hi] = t1
        out["kinds_1"][lo:hi] = k1
        out["states_1"][lo:hi] = s1
        if pair:
            _resolve_defaults(hashed_seed, rep, TAG_RECOVERY_2, inputs, v2, t2, k2, s2)
            out["values_2"][lo:hi] = v2
            out["times_2"][lo:hi] = t2
            out["kinds_2"][lo:hi] = k2
            out["states_2"][lo:hi] = s2
    return out

