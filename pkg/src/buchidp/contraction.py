"""Multi-step contraction machinery: H-power norms, the theoretical
constant c = 1 - (1-gamma_b) eps^n', and the certified error-bound
sequence c^floor(k/N).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CertificateViolation, DimensionMismatch
from .graph import ContractionParams
from .surrogate import ReducedSystem, SurrogateParams

CERT_TOL = 1e-12


@dataclass(frozen=True)
class ContractionCertificate:
    """Empirical vs theoretical contraction data for one reduced system.

    ``step_n`` is the certified multi-step horizon (n'+1 when gamma = 1,
    1 otherwise); ``empirical_norms[k-1]`` holds the sup-norm of the k-th
    matrix power for k = 1..step_n.
    """

    epsilon: float
    n_prime: int
    step_n: int
    c_theoretical: float
    empirical_norms: tuple[float, ...]
    first_contractive_step: int

    @property
    def norm_at_step_n(self) -> float:
        return self.empirical_norms[-1]


def _inf_norm(mat) -> float:
    if sp.issparse(mat):
        return float(abs(mat).sum(axis=1).max())
    return float(np.abs(mat).sum(axis=1).max())


def matrix_power_inf_norm(h, k: int) -> float:
    """Sup norm (max absolute row sum) of the k-th power, k >= 1.

    Repeated multiplication, no eigendecomposition; callers never need
    powers beyond n'+1.
    """
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"matrix has shape {h.shape}, expected square")
    if k < 1:
        raise DimensionMismatch(f"power must be >= 1, got {k}")
    acc = h
    for _ in range(k - 1):
        acc = acc @ h
    return _inf_norm(acc)


def certify(
    sys: ReducedSystem, params: SurrogateParams, cp: ContractionParams
) -> ContractionCertificate:
    """Build the contraction certificate for one system.

    gamma < 1 needs no multi-step argument: the one-step norm is already
    below gamma, so a degenerate certificate (N=1, c=gamma) is returned.
    For gamma = 1 the (n'+1)-step norm is checked against
    c = 1 - (1-gamma_b) eps^n'; exceeding it by more than CERT_TOL means
    a bug somewhere upstream, raised as CertificateViolation.
    """
    if params.gamma < 1.0:
        norm1 = _inf_norm(sys.h_matrix)
        return ContractionCertificate(
            epsilon=cp.epsilon,
            n_prime=cp.n_prime,
            step_n=1,
            c_theoretical=params.gamma,
            empirical_norms=(norm1,),
            first_contractive_step=1,
        )
    step_n = cp.n_prime + 1
    norms = []
    acc = None
    for _ in range(step_n):
        acc = sys.h_matrix if acc is None else acc @ sys.h_matrix
        norms.append(_inf_norm(acc))
    c = 1.0 - params.reward * cp.epsilon**cp.n_prime
    if norms[-1] > c + CERT_TOL:
        raise CertificateViolation(
            f"||H^{step_n}||_inf = {norms[-1]!r} exceeds c = {c!r}"
        )
    first = next((k + 1 for k, v in enumerate(norms) if v < 1.0), step_n)
    return ContractionCertificate(
        epsilon=cp.epsilon,
        n_prime=cp.n_prime,
        step_n=step_n,
        c_theoretical=c,
        empirical_norms=tuple(norms),
        first_contractive_step=first,
    )


def bound_sequence(
    cert: ContractionCertificate, k_max: int, v_norm: float = 1.0
) -> np.ndarray:
    """Guaranteed error envelope b[k] = c^floor(k/N) * v_norm, k = 0..k_max."""
    k = np.arange(k_max + 1)
    return cert.c_theoretical ** (k // cert.step_n) * v_norm


def discounted_path_probability(
    sys: ReducedSystem, src: int, dst: int, steps: int
) -> float:
    """Entry (src, dst) of the steps-th power of H, by path enumeration.

    Sums over every length-``steps`` path in the reduced system the
    product of transition probabilities, discounting each step by gamma_b
    when it departs an accepting state and by gamma otherwise.  Exponential
    in ``steps``; meant as an independent cross-check on small systems,
    never as the production code path.
    """
    n = sys.size
    if not (0 <= src < n and 0 <= dst < n):
        raise DimensionMismatch(f"states ({src}, {dst}) out of range for size {n}")
    if steps < 1:
        raise DimensionMismatch(f"steps must be >= 1, got {steps}")
    T = sys.t_matrix.toarray() if sp.issparse(sys.t_matrix) else sys.t_matrix
    gamma_b, gamma = sys.params.gamma_b, sys.params.gamma

    def walk(state: int, remaining: int) -> float:
        if remaining == 0:
            return 1.0 if state == dst else 0.0
        g = gamma_b if state < sys.m else gamma
        total = 0.0
        for nxt in range(n):
            p = T[state, nxt]
            if p > 0.0:
                total += g * p * walk(nxt, remaining - 1)
        return total

    return walk(src, steps)
