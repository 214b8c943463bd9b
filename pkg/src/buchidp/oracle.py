"""Ground-truth references for the DP core, with deliberately disjoint
failure modes: classical reachability to accepting BSCCs (graph + linear
solve), and a seeded Monte Carlo estimator that scores truncated returns
without ever looking at the graph structure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import SingularSystem
from .graph import BsccReport, classify_bsccs, partition_states
from .model import McModel
from .surrogate import SurrogateParams, build_reduced_system, expand_values, solve_value


@dataclass(frozen=True)
class ReachabilityResult:
    """Probability, per state, of reaching the union of accepting BSCCs."""

    probabilities: np.ndarray
    target: frozenset[int]


@dataclass(frozen=True)
class McEstimate:
    """Empirical mean truncated return per start state, plus the sample
    variance used to size statistical tolerances."""

    means: np.ndarray
    variances: np.ndarray
    episodes: int
    horizon: int
    seed: int


@dataclass(frozen=True)
class DpOracleComparison:
    value: np.ndarray
    p_sat: np.ndarray
    per_state_gap: np.ndarray
    sup_gap: float
    tol: float
    passed: bool


def _backward_closure(P: np.ndarray, seed_states: set[int]) -> np.ndarray:
    """Boolean mask of states from which ``seed_states`` is reachable."""
    n = P.shape[0]
    adj = P > 0.0
    reach = np.zeros(n, dtype=bool)
    frontier = sorted(seed_states)
    reach[frontier] = True
    while frontier:
        mask = np.zeros(n, dtype=bool)
        mask[frontier] = True
        preds = np.nonzero(adj[:, mask].any(axis=1) & ~reach)[0]
        reach[preds] = True
        frontier = preds.tolist()
    return reach


def satisfaction_probability(mc: McModel, report: BsccReport) -> ReachabilityResult:
    """Probability of visiting accepting states infinitely often.

    Equals the probability of reaching an accepting BSCC.  States that
    cannot reach one get 0; states from which no rejecting BSCC is
    reachable get 1 (almost surely every path lands in some BSCC); the
    rest solve the standard linear system over the undetermined block.
    """
    P = mc.transition
    n = mc.num_states
    target: set[int] = set()
    for comp in report.accepting_bsccs:
        target |= comp
    rejecting: set[int] = set()
    for comp in report.rejecting_bsccs:
        rejecting |= comp

    can_reach_target = _backward_closure(P, target) if target else np.zeros(n, bool)
    can_reach_rejecting = (
        _backward_closure(P, rejecting) if rejecting else np.zeros(n, bool)
    )
    p = np.zeros(n)
    one = ~can_reach_rejecting & can_reach_target
    zero = ~can_reach_target
    p[one] = 1.0
    undetermined = np.nonzero(~one & ~zero)[0]
    if undetermined.size:
        Q = P[np.ix_(undetermined, undetermined)]
        b = P[np.ix_(undetermined, np.nonzero(one)[0])].sum(axis=1)
        try:
            x = np.linalg.solve(np.eye(undetermined.size) - Q, b)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from exc
        p[undetermined] = np.clip(x, 0.0, 1.0)
    return ReachabilityResult(probabilities=p, target=frozenset(target))


def estimate_satisfaction(
    mc: McModel,
    params: SurrogateParams,
    episodes: int,
    horizon: int,
    seed: int,
) -> McEstimate:
    """Mean truncated return over seeded sample paths, per start state.

    Each episode accumulates sum_i R(s_i) * prod_{j<i} Gamma(s_j) along a
    simulated path of ``horizon`` transitions (so horizon+1 reward terms).
    Episode e from start state s uses the PRNG stream derived from
    (seed, s, e) — see the rng module — which makes the result
    reproducible bit for bit and independent of scheduling.  Means are
    exact sums (math.fsum) divided by the episode count.
    """
    if episodes < 1 or horizon < 1:
        raise ValueError("episodes and horizon must be >= 1")
    P = mc.transition
    n = mc.num_states
    reward = np.zeros(n)
    discount = np.full(n, params.gamma)
    acc = sorted(mc.accepting)
    reward[acc] = params.reward
    discount[acc] = params.gamma_b
    cum = np.cumsum(P, axis=1)
    cum[:, -1] = 1.0

    means = np.zeros(n)
    variances = np.zeros(n)
    for start in range(n):
        state = rng.stream_states(seed, start, episodes)
        s = np.full(episodes, start, dtype=np.intp)
        g = np.zeros(episodes)
        w = np.ones(episodes)
        for i in range(horizon + 1):
            g += w * reward[s]
            w *= discount[s]
            if i < horizon:
                u = rng.next_unit_vec(state)
                s = (cum[s] > u[:, None]).argmax(axis=1)
        total = math.fsum(g.tolist())
        means[start] = total / episodes
        if episodes > 1:
            sq = math.fsum(((g - means[start]) ** 2).tolist())
            variances[start] = sq / (episodes - 1)
    return McEstimate(
        means=means,
        variances=variances,
        episodes=episodes,
        horizon=horizon,
        seed=seed,
    )


def dp_vs_oracle_report(
    mc: McModel, params: SurrogateParams, tol: float
) -> DpOracleComparison:
    """Solve the surrogate value function and compare it, state by state,
    against the reachability oracle."""
    report = classify_bsccs(mc)
    partition = partition_states(mc, report)
    p_sat = satisfaction_probability(mc, report).probabilities
    if partition.ordering:
        sys = build_reduced_system(mc, partition, params)
        value = expand_values(partition, solve_value(sys))
    else:
        value = np.zeros(mc.num_states)
    gap = np.abs(value - p_sat)
    sup = float(gap.max()) if gap.size else 0.0
    return DpOracleComparison(
        value=value,
        p_sat=p_sat,
        per_state_gap=gap,
        sup_gap=sup,
        tol=tol,
        passed=sup <= tol,
    )
