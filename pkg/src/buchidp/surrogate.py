"""Two-discount surrogate reward and the dynamic-programming machinery
built on it: reduced transition system, Bellman update, iterate traces,
and the exact value function via direct linear solve.

Matrices over the reduced state space (accepting block first, then the
remaining rejecting states outside rejecting BSCCs) are dense ndarrays up
to DENSE_LIMIT states and CSR above that.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionMismatch, EmptySystem, SingularSystem
from .graph import ContractionParams, StatePartition
from .model import McModel

DENSE_LIMIT = 4096


@dataclass(frozen=True)
class SurrogateParams:
    """Discount pair: gamma_b on accepting states, gamma elsewhere.

    Requires 0 < gamma_b < gamma <= 1; the accepting-state reward is
    1 - gamma_b.
    """

    gamma_b: float
    gamma: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.gamma_b < self.gamma <= 1.0):
            raise ValueError(
                f"need 0 < gamma_b < gamma <= 1, got gamma_b={self.gamma_b}, gamma={self.gamma}"
            )

    @property
    def reward(self) -> float:
        return 1.0 - self.gamma_b


@dataclass(frozen=True)
class ReducedSystem:
    """Transition matrix T over accepting + remaining states, its
    discount-scaled counterpart H, and the reward vector."""

    t_matrix: np.ndarray | sp.csr_matrix
    h_matrix: np.ndarray | sp.csr_matrix
    reward: np.ndarray
    m: int
    order: tuple[int, ...]
    params: SurrogateParams

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def n_prime(self) -> int:
        return self.size - self.m


@dataclass
class DpTrace:
    """Value iterates U_0..U_k and, when a reference vector is supplied,
    the sup-norm errors against it."""

    iterates: list[np.ndarray]
    sup_errors: list[float] | None = None

    @property
    def k_max(self) -> int:
        return len(self.iterates) - 1


def surrogate_reward(
    partition: StatePartition, params: SurrogateParams
) -> tuple[np.ndarray, np.ndarray]:
    """Per-state reward and discount over the full state space.

    reward(s) = 1 - gamma_b on accepting states, 0 elsewhere;
    discount(s) = gamma_b on accepting states, gamma elsewhere.
    """
    n = partition.m + partition.n_prime + len(partition.rejecting_bscc_states)
    reward = np.zeros(n)
    discount = np.full(n, params.gamma)
    b = list(partition.b_states)
    reward[b] = params.reward
    discount[b] = params.gamma_b
    return reward, discount


def build_reduced_system(
    mc: McModel, partition: StatePartition, params: SurrogateParams
) -> ReducedSystem:
    """Assemble T and H = diag(gamma_b .. gamma) T over the reduced order.

    Rows of T sum to one minus the one-step probability of falling into a
    rejecting BSCC.  Raises EmptySystem when every state sits in a
    rejecting BSCC (the value function is identically zero, nothing to
    iterate).
    """
    order = partition.ordering
    if not order:
        raise EmptySystem("all states belong to rejecting BSCCs")
    m = partition.m
    idx = np.array(order, dtype=int)
    T = mc.transition[np.ix_(idx, idx)].copy()
    scale = np.full(len(order), params.gamma)
    scale[:m] = params.gamma_b
    H = scale[:, None] * T
    reward = np.zeros(len(order))
    reward[:m] = params.reward
    if len(order) > DENSE_LIMIT:
        T = sp.csr_matrix(T)
        H = sp.csr_matrix(H)
    return ReducedSystem(
        t_matrix=T, h_matrix=H, reward=reward, m=m, order=order, params=params
    )


def bellman_update(u: np.ndarray, sys: ReducedSystem) -> np.ndarray:
    """One application of U -> reward + H U."""
    u = np.asarray(u, dtype=float)
    if u.shape != (sys.size,):
        raise DimensionMismatch(f"value vector has shape {u.shape}, system size {sys.size}")
    return sys.reward + sys.h_matrix @ u


def run_dp(
    sys: ReducedSystem, k_max: int, reference: np.ndarray | None = None
) -> DpTrace:
    """Iterate the Bellman update k_max times from the zero vector.

    When ``reference`` is given, records the sup-norm distance of every
    iterate from it.
    """
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != (sys.size,):
            raise DimensionMismatch(
                f"reference has shape {reference.shape}, system size {sys.size}"
            )
    u = np.zeros(sys.size)
    iterates = [u]
    for _ in range(k_max):
        u = bellman_update(u, sys)
        iterates.append(u)
    sup_errors = None
    if reference is not None:
        sup_errors = [float(np.abs(v - reference).max()) for v in iterates]
    return DpTrace(iterates=iterates, sup_errors=sup_errors)


def solve_value(sys: ReducedSystem) -> np.ndarray:
    """Exact fixed point of the Bellman update: solve (I - H) V = reward.

    LU with partial pivoting; the system is nonsingular whenever the
    partition is correct, so rank deficiency is surfaced as
    SingularSystem rather than patched over.  Entries are clamped to
    [0, 1] to strip solver-level rounding.
    """
    n = sys.size
    try:
        if sp.issparse(sys.h_matrix):
            A = sp.identity(n, format="csc") - sys.h_matrix.tocsc()
            v = spla.spsolve(A, sys.reward)
        else:
            v = np.linalg.solve(np.eye(n) - sys.h_matrix, sys.reward)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(v)):
        raise SingularSystem("solver returned non-finite entries")
    return np.clip(v, 0.0, 1.0)


def expand_values(partition: StatePartition, reduced: np.ndarray) -> np.ndarray:
    """Value vector over the full state space: zeros on rejecting BSCCs."""
    n = partition.m + partition.n_prime + len(partition.rejecting_bscc_states)
    full = np.zeros(n)
    full[list(partition.ordering)] = reduced
    return full


def k_max_for_tolerance(
    tol: float, params: SurrogateParams, cp: ContractionParams
) -> int:
    """A-priori iteration count guaranteeing sup error <= tol.

    Sound because the value function is bounded by 1: gamma^k for
    gamma < 1, and the multi-step constant c = 1 - (1-gamma_b) eps^n'
    applied every n'+1 steps for gamma = 1.
    """
    if not (0.0 < tol):
        raise ValueError("tolerance must be positive")
    if tol >= 1.0:
        return 0
    if params.gamma < 1.0:
        return math.ceil(math.log(tol) / math.log(params.gamma))
    c = 1.0 - params.reward * cp.epsilon**cp.n_prime
    if c >= 1.0:
        raise ValueError(
            "contraction constant rounds to 1 (epsilon^n' underflow); "
            "use an explicit iteration count"
        )
    return (cp.n_prime + 1) * math.ceil(math.log(tol) / math.log(c))
