"""Core domain types: MDPs with a Büchi acceptance set, memoryless
policies, and the Markov chains they induce.

States and actions are dense integer indices.  Name tables are optional
and only used for display and diagnostics; all numerics run on indices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PolicyInvalid

ROW_SUM_TOL = 1e-9


def _frozen_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MdpModel:
    """Finite MDP with an accepting state set.

    ``rows[(s, a)]`` is the full-length transition row for action ``a``
    enabled in state ``s``; pairs absent from ``rows`` are disabled.
    """

    num_states: int
    actions: tuple[tuple[int, ...], ...]
    rows: dict[tuple[int, int], np.ndarray]
    initial: int
    accepting: frozenset[int]
    state_names: tuple[str, ...] | None = None
    action_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "rows", {sa: _frozen_array(row) for sa, row in self.rows.items()}
        )

    def state_name(self, s: int) -> str:
        return self.state_names[s] if self.state_names else f"s{s}"

    def action_name(self, a: int) -> str:
        return self.action_names[a] if self.action_names else f"a{a}"

    @property
    def single_action(self) -> bool:
        """True when every state has exactly one enabled action."""
        return all(len(acts) == 1 for acts in self.actions)


@dataclass(frozen=True)
class Policy:
    """Memoryless deterministic policy: one chosen action per state."""

    choice: tuple[int, ...]


@dataclass(frozen=True)
class McModel:
    """Markov chain with an accepting state set; ``transition`` is the
    row-stochastic matrix."""

    transition: np.ndarray
    initial: int
    accepting: frozenset[int]
    state_names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "transition", _frozen_array(self.transition))

    @property
    def num_states(self) -> int:
        return self.transition.shape[0]

    def state_name(self, s: int) -> str:
        return self.state_names[s] if self.state_names else f"s{s}"


def validate_mdp(model: MdpModel) -> list[str]:
    """Check every structural invariant; returns one message per violation.

    An empty list means the model is well-formed.  Violations are data,
    not exceptions: callers decide whether to reject.
    """
    bad = []
    n = model.num_states
    if n <= 0:
        bad.append("model has no states")
        return bad
    if len(model.actions) != n:
        bad.append(f"actions table has {len(model.actions)} entries for {n} states")
        return bad
    if not (0 <= model.initial < n):
        bad.append(f"initial state {model.initial} out of range")
    for s in model.accepting:
        if not (0 <= s < n):
            bad.append(f"accepting state {s} out of range")
    for s in range(n):
        if not model.actions[s]:
            bad.append(f"deadlock: state {model.state_name(s)} has no enabled action")
    for (s, a), row in model.rows.items():
        loc = f"({model.state_name(s)}, {model.action_name(a)})"
        if a not in model.actions[s]:
            bad.append(f"transition row for disabled action {loc}")
            continue
        if row.shape != (n,):
            bad.append(f"row {loc} has shape {row.shape}, expected ({n},)")
            continue
        if (row < 0).any() or (row > 1).any():
            bad.append(f"row {loc} has entries outside [0, 1]")
        total = float(row.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            bad.append(f"row {loc} sums to {total!r}, not 1")
    for s in range(n):
        for a in model.actions[s]:
            if (s, a) not in model.rows:
                bad.append(
                    f"enabled action ({model.state_name(s)}, {model.action_name(a)})"
                    " has no transition row"
                )
    return bad


def validate_mc(mc: McModel) -> list[str]:
    """Row-stochasticity and range checks for an induced chain."""
    bad = []
    P = mc.transition
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        bad.append(f"transition matrix has shape {P.shape}, expected square")
        return bad
    n = P.shape[0]
    if not (0 <= mc.initial < n):
        bad.append(f"initial state {mc.initial} out of range")
    for s in mc.accepting:
        if not (0 <= s < n):
            bad.append(f"accepting state {s} out of range")
    if (P < 0).any():
        bad.append("negative transition probability")
    for s in range(n):
        total = float(P[s].sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            bad.append(f"row {mc.state_name(s)} sums to {total!r}, not 1")
    return bad


def apply_policy(model: MdpModel, policy: Policy) -> McModel:
    """Induce the chain that follows ``policy`` in every state.

    Raises PolicyInvalid if the policy is not total or picks a disabled
    action; the accepting set and initial state carry over unchanged.
    """
    n = model.num_states
    if len(policy.choice) != n:
        raise PolicyInvalid(
            f"policy covers {len(policy.choice)} of {n} states"
        )
    P = np.zeros((n, n))
    for s in range(n):
        a = policy.choice[s]
        if a not in model.actions[s]:
            raise PolicyInvalid(
                f"action {model.action_name(a)} not enabled in state {model.state_name(s)}"
            )
        P[s] = model.rows[(s, a)]
    return McModel(
        transition=P,
        initial=model.initial,
        accepting=model.accepting,
        state_names=model.state_names,
    )


def trivial_policy(model: MdpModel) -> Policy:
    """The unique policy of a single-action model (chain written as MDP)."""
    if not model.single_action:
        raise PolicyInvalid("model has states with more than one action")
    return Policy(choice=tuple(acts[0] for acts in model.actions))


def mc_from_matrix(P, accepting, initial: int = 0, state_names=None) -> McModel:
    """Convenience constructor used by tests and generators."""
    return McModel(
        transition=np.asarray(P, dtype=float),
        initial=initial,
        accepting=frozenset(accepting),
        state_names=tuple(state_names) if state_names else None,
    )


def mdp_from_chain(mc: McModel) -> MdpModel:
    """Wrap a chain as the equivalent one-action MDP (e.g. for serialization)."""
    n = mc.num_states
    return MdpModel(
        num_states=n,
        actions=tuple((0,) for _ in range(n)),
        rows={(s, 0): mc.transition[s] for s in range(n)},
        initial=mc.initial,
        accepting=mc.accepting,
        state_names=mc.state_names or tuple(f"s{i}" for i in range(n)),
        action_names=("a",),
    )
