"""Small, fully specified 64-bit PRNG used by the Monte Carlo estimator
and the random-chain generator.

Everything here is defined over uint64 arithmetic (mod 2**64) so any
language can reproduce the streams byte for byte.

Seed mixing (splitmix64 finalizer)::

    mix64(x):
        x = (x + 0x9E3779B97F4A7C15) mod 2**64
        x = ((x XOR (x >> 30)) * 0xBF58476D1CE4E5B9) mod 2**64
        x = ((x XOR (x >> 27)) * 0x94D049BB133111EB) mod 2**64
        return x XOR (x >> 31)

Stream update (xorshift64*), state must be nonzero::

    next(state):
        state ^= state >> 12
        state ^= (state << 25) mod 2**64
        state ^= state >> 27
        output = (state * 0x2545F4914F6CDD1D) mod 2**64

Uniform draw in [0, 1): ``(output >> 11) * 2**-53``.

Sub-stream derivation: the state of the stream for start state ``s``,
episode ``e`` under user seed ``q`` is ``mix64(mix64(mix64(q) + s) + e)``
(0 is replaced by 0x9E3779B97F4A7C15).  Streams for distinct episodes are
therefore independent of scheduling order.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MUL1 = 0xBF58476D1CE4E5B9
_SM_MUL2 = 0x94D049BB133111EB
_XS_MUL = 0x2545F4914F6CDD1D


def mix64(x: int) -> int:
    """splitmix64 finalizer on a single value."""
    x = (x + _SM_GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * _SM_MUL1) & MASK64
    x = ((x ^ (x >> 27)) * _SM_MUL2) & MASK64
    return x ^ (x >> 31)


def stream_state(seed: int, start: int, episode: int) -> int:
    """Initial xorshift64* state for (seed, start state, episode index)."""
    s = mix64(mix64(mix64(seed & MASK64) + start) + episode)
    return s if s != 0 else _SM_GAMMA


class XorShift64Star:
    """Scalar generator; the vectorized twin below must match it exactly."""

    def __init__(self, state: int):
        self.state = state & MASK64 or _SM_GAMMA

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x = (x ^ (x << 25)) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * _XS_MUL) & MASK64

    def next_unit(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def stream_states(seed: int, start: int, episodes: int) -> np.ndarray:
    """uint64 array of initial states for episodes 0..episodes-1."""
    e = np.arange(episodes, dtype=np.uint64)
    x = _mix64_vec(np.uint64(mix64(mix64(seed & MASK64) + start)) + e)
    x[x == 0] = np.uint64(_SM_GAMMA)
    return x


def _mix64_vec(x: np.ndarray) -> np.ndarray:
    x = x + np.uint64(_SM_GAMMA)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_SM_MUL1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_SM_MUL2)
    return x ^ (x >> np.uint64(31))


def next_unit_vec(state: np.ndarray) -> np.ndarray:
    """Advance a uint64 state array in place; returns uniforms in [0, 1)."""
    x = state
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[:] = x
    out = x * np.uint64(_XS_MUL)
    return (out >> np.uint64(11)).astype(np.float64) * 2.0**-53
