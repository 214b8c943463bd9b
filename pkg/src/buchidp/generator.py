"""Seeded random chains for sweeps, fixtures, and the acceptance suite.

Everything is driven by the package PRNG, so a (seed, size, density,
accepting fraction) tuple names the same chain in every run and on every
platform.
"""
from __future__ import annotations

import numpy as np

from . import rng
from .model import McModel, mc_from_matrix


def random_chain(
    seed: int,
    num_states: int,
    density: float = 0.35,
    accepting_fraction: float = 0.3,
) -> McModel:
    """One random row-stochastic chain.

    Each state gets 1 + U{0..floor(density*(n-1))} distinct successors with
    integer weights 1..8, normalized; each state is accepting with the
    given probability.  Weights bounded away from zero keep the minimum
    positive transition probability healthy for contraction experiments.
    """
    if num_states < 1:
        raise ValueError("need at least one state")
    gen = rng.XorShift64Star(rng.mix64(seed))
    n = num_states

    def randint(k: int) -> int:
        return int(gen.next_u64() % k)

    extra_max = int(density * (n - 1) + 0.5)
    P = np.zeros((n, n))
    for s in range(n):
        d = 1 + (randint(extra_max + 1) if extra_max > 0 else 0)
        pool = list(range(n))
        for i in range(d):
            j = i + randint(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        weights = np.array([1 + randint(8) for _ in range(d)], dtype=float)
        P[s, pool[:d]] = weights / weights.sum()
    accepting = {s for s in range(n) if gen.next_unit() < accepting_fraction}
    return mc_from_matrix(P, accepting, initial=0)


def chain_suite(
    seed: int,
    count: int,
    min_states: int = 2,
    max_states: int = 12,
    density: float = 0.35,
    accepting_fraction: float = 0.3,
):
    """Deterministic family of chains with sizes cycling through the range."""
    span = max_states - min_states + 1
    for i in range(count):
        yield random_chain(
            rng.mix64(rng.mix64(seed) + i),
            min_states + i % span,
            density=density,
            accepting_fraction=accepting_fraction,
        )
