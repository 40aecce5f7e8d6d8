"""Brute-force oracles: literal enumeration over market paths and exits.

Everything here is written directly from the model definition with plain
sums and products, independent of the package's recursion code, and is
only feasible for short loans (paths grow as 2^(term-1)).
"""
from __future__ import annotations

import itertools

import numpy as np


def exposure_rollup(instalments, monthly_rate):
    """Exposure profile built by discounting backwards one month at a time."""
    n = len(instalments)
    phi = np.empty(n)
    phi[n - 1] = instalments[n - 1]
    for h in range(n - 1, 0, -1):
        phi[h - 1] = instalments[h - 1] + phi[h] / (1.0 + monthly_rate)
    return phi


class ScenarioArrays:
    """Plain-array view of one scenario, as the oracles consume it."""

    def __init__(self, instalments, monthly_rate, principal, monthly_discount,
                 persist_bad, persist_good, lam_bad, lam_good, mu_bad, mu_good,
                 charge, mean_z, second_z, initial_state):
        self.r = np.asarray(instalments, dtype=float)
        self.n = len(self.r)
        self.x = monthly_rate
        self.w = principal
        self.v = 1.0 / (1.0 + monthly_discount)
        self.persist = (np.asarray(persist_bad, float), np.asarray(persist_good, float))
        self.lam = (np.asarray(lam_bad, float), np.asarray(lam_good, float))
        self.mu = (np.asarray(mu_bad, float), np.asarray(mu_good, float))
        self.charge = np.asarray(charge, float)
        self.mean_z = (float(mean_z[0]), float(mean_z[1]))
        self.second_z = (float(second_z[0]), float(second_z[1]))
        self.s0 = initial_state  # 0 bad, 1 good
        self.phi = exposure_rollup(self.r, self.x)
        self.paid = np.concatenate(
            ([0.0], np.cumsum(self.r * self.v ** np.arange(1, self.n + 1))))

    @classmethod
    def from_models(cls, loan, discount, market, hazards, recovery):
        from loanrnpv.market import STATE_INDEX
        return cls(loan.instalments, loan.monthly_rate, loan.principal,
                   discount.monthly_rate,
                   market.persist_bad[:loan.term], market.persist_good[:loan.term],
                   hazards.default_bad, hazards.default_good,
                   hazards.prepay_bad, hazards.prepay_good,
                   loan.prepay_charge,
                   (recovery.mean_bad[0], recovery.mean_good[0]),
                   (recovery.second_bad[0], recovery.second_good[0]),
                   STATE_INDEX[market.initial_state])


def market_paths(sc: ScenarioArrays):
    """All (path, probability) pairs; path[h-1] is the state during month h."""
    for tail in itertools.product((0, 1), repeat=sc.n - 1):
        path = (sc.s0,) + tail
        prob = 1.0
        for h in range(1, sc.n):
            prev, cur = path[h - 1], path[h]
            stay = sc.persist[prev][h - 1]
            prob *= stay if cur == prev else 1.0 - stay
        yield path, prob


def exit_atoms(sc: ScenarioArrays, path):
    """(probability, payoff mean, payoff second moment) per exit event.

    Payoffs are for the received-payment value R(0) (no principal netting);
    recovery enters through its first two moments.
    """
    atoms = []
    survival = 1.0
    for h in range(1, sc.n + 1):
        s = path[h - 1]
        lam = sc.lam[s][h - 1]
        mu = sc.mu[s][h - 1] if h < sc.n else 0.0
        c = sc.paid[h - 1]
        d = sc.v ** h * sc.phi[h - 1]
        atoms.append((survival * lam,
                      c + d * sc.mean_z[s],
                      c * c + 2.0 * c * d * sc.mean_z[s] + d * d * sc.second_z[s]))
        if h < sc.n:
            val = c + d * sc.charge[h - 1]
            atoms.append((survival * mu, val, val * val))
        survival *= 1.0 - lam - mu
    full = sc.paid[sc.n]
    atoms.append((survival, full, full * full))
    return atoms


def single_moments(sc: ScenarioArrays):
    """(E[R(0)], E[R(0)^2]) by exhaustive path x exit enumeration."""
    m1 = m2 = mass = 0.0
    for path, p_path in market_paths(sc):
        for p_exit, mean, second in exit_atoms(sc, path):
            m1 += p_path * p_exit * mean
            m2 += p_path * p_exit * second
            mass += p_path * p_exit
    assert abs(mass - 1.0) < 1e-12
    return m1, m2


def pair_cross_moment(sc: ScenarioArrays):
    """E[R1(0) R2(0)]: per path the loans are independent, so the product
    of conditional means integrates over the path distribution."""
    cross = 0.0
    for path, p_path in market_paths(sc):
        conditional_mean = sum(p * mean for p, mean, _ in exit_atoms(sc, path))
        cross += p_path * conditional_mean * conditional_mean
    return cross


def portfolio_second_moment(sc: ScenarioArrays, size: int):
    """E[(R_1(0) + ... + R_size(0))^2] by literal joint enumeration.

    Every tuple of exit events across the loans is visited; within a tuple
    the payoff moments multiply (conditional independence given the path).
    """
    total = 0.0
    for path, p_path in market_paths(sc):
        atoms = exit_atoms(sc, path)
        for combo in itertools.product(range(len(atoms)), repeat=size):
            prob = p_path
            for k in combo:
                prob *= atoms[k][0]
            if prob == 0.0:
                continue
            second = 0.0
            for i, k_i in enumerate(combo):
                second += atoms[k_i][2]
                for j, k_j in enumerate(combo):
                    if j != i:
                        second += atoms[k_i][1] * atoms[k_j][1]
            total += prob * second
    return total


def event_probability_table(sc: ScenarioArrays):
    """Exit-event probabilities by path enumeration, keyed like the engine."""
    default_bad = np.zeros(sc.n)
    default_good = np.zeros(sc.n)
    prepay = np.zeros(max(sc.n - 1, 0))
    regular = 0.0
    for path, p_path in market_paths(sc):
        survival = 1.0
        for h in range(1, sc.n + 1):
            s = path[h - 1]
            lam = sc.lam[s][h - 1]
            mu = sc.mu[s][h - 1] if h < sc.n else 0.0
            if s == 0:
                default_bad[h - 1] += p_path * survival * lam
            else:
                default_good[h - 1] += p_path * survival * lam
            if h < sc.n:
                prepay[h - 1] += p_path * survival * mu
            survival *= 1.0 - lam - mu
        regular += p_path * survival
    return {"default_bad": default_bad, "default_good": default_good,
            "prepay": prepay, "regular": regular}
