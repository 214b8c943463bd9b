"""Structural analysis of an induced chain: SCCs, bottom SCCs, the
accepting/rejecting split, and the parameters feeding the convergence
certificate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoTransitions
from .model import McModel


@dataclass(frozen=True)
class BsccReport:
    sccs: tuple[frozenset[int], ...]
    bsccs: tuple[frozenset[int], ...]
    accepting_bsccs: tuple[frozenset[int], ...]
    rejecting_bsccs: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class StatePartition:
    """Three-way split of the state space.

    ``b_states``: accepting states.  ``rejecting_bscc_states``: every state
    of every BSCC that contains no accepting state.  ``remaining``: all
    other rejecting states (transient ones, plus rejecting states inside
    accepting BSCCs).  Each block is sorted ascending; matrices use the
    ordering b_states + remaining.
    """

    b_states: tuple[int, ...]
    rejecting_bscc_states: tuple[int, ...]
    remaining: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.b_states)

    @property
    def n_prime(self) -> int:
        return len(self.remaining)

    @property
    def ordering(self) -> tuple[int, ...]:
        return self.b_states + self.remaining


@dataclass(frozen=True)
class ContractionParams:
    epsilon: float
    n_prime: int


def _successors(P: np.ndarray) -> list[np.ndarray]:
    return [np.nonzero(P[s] > 0.0)[0] for s in range(P.shape[0])]


def scc_decompose(mc: McModel) -> list[frozenset[int]]:
    """Strongly connected components of {(s, s') : P(s, s') > 0}.

    Iterative single-pass Tarjan with an explicit work stack, so deep
    chains cannot hit the recursion limit.  Components come out in
    reverse-topological order: every edge leaving a component points to a
    component emitted earlier.
    """
    n = mc.num_states
    succ = _successors(mc.transition)
    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    components: list[frozenset[int]] = []

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(succ[v]):
                w = int(succ[v][pi])
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
            if work:
                parent, _ = work[-1]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return components


def classify_bsccs(mc: McModel) -> BsccReport:
    """Label each SCC bottom/non-bottom and each BSCC accepting/rejecting.

    A BSCC is an SCC with no edge leaving its state set; it is accepting
    iff it contains at least one accepting state.
    """
    P = mc.transition
    sccs = scc_decompose(mc)
    bsccs = []
    for comp in sccs:
        members = sorted(comp)
        outside = np.ones(mc.num_states, dtype=bool)
        outside[members] = False
        if not (P[members][:, outside] > 0.0).any():
            bsccs.append(comp)
    accepting = tuple(c for c in bsccs if c & mc.accepting)
    rejecting = tuple(c for c in bsccs if not (c & mc.accepting))
    return BsccReport(
        sccs=tuple(sccs),
        bsccs=tuple(bsccs),
        accepting_bsccs=accepting,
        rejecting_bsccs=rejecting,
    )


def partition_states(mc: McModel, report: BsccReport) -> StatePartition:
    """Split S into accepting states, rejecting-BSCC states, and the rest."""
    n = mc.num_states
    b = sorted(mc.accepting)
    rej: set[int] = set()
    for comp in report.rejecting_bsccs:
        rej |= comp
    rest = [s for s in range(n) if s not in mc.accepting and s not in rej]
    return StatePartition(
        b_states=tuple(b),
        rejecting_bscc_states=tuple(sorted(rej)),
        remaining=tuple(rest),
    )


def contraction_params(mc: McModel, partition: StatePartition) -> ContractionParams:
    """Minimum positive transition probability and the remaining-block size."""
    P = mc.transition
    positive = P[P > 0.0]
    if positive.size == 0:
        raise NoTransitions("transition matrix has no positive entry")
    return ContractionParams(
        epsilon=float(positive.min()),
        n_prime=partition.n_prime,
    )
