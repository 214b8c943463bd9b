"""Line-oriented text formats for models, policies, and trace CSVs.

Model grammar (``#`` starts a comment, tokens are whitespace-separated)::

    mdp | mc                      first significant line
    initial: <state>
    accepting: [<state> ...]      optional; empty list allowed
    t <s> <a> <s'> <p>            mdp transition
    t <s> <s'> <p>                mc transition

States and actions are implicitly declared on first use, in order of
appearance.  Policy files hold one ``<state> <action>`` pair per line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch, ModelSemanticError, ModelSyntaxError
from .model import MdpModel, Policy
from .surrogate import DpTrace

ROW_SUM_TOL = 1e-9
# Rows whose sum is already this close to 1 are kept verbatim, which makes
# parse(serialize(model)) an exact identity instead of drifting by one ulp
# per round trip.
RENORM_DEADBAND = 1e-13

_TOKEN = re.compile(r"\S+")


@dataclass
class ModelDocument:
    """Raw parse of a model file, before index resolution and validation."""

    kind: str
    initial_name: str | None = None
    accepting_names: list[str] = field(default_factory=list)
    # (line number, source state, action or None, target state, probability)
    transitions: list[tuple[int, str, str | None, str, float]] = field(
        default_factory=list
    )
    state_order: list[str] = field(default_factory=list)
    action_order: list[str] = field(default_factory=list)


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(stripped)]
        if tokens:
            yield lineno, tokens


def _parse_probability(token: str, lineno: int, col: int) -> float:
    try:
        p = float(token)
    except ValueError:
        raise ModelSyntaxError(f"bad probability literal {token!r}", lineno, col)
    if not np.isfinite(p):
        raise ModelSemanticError(f"probability {token!r} is not finite", lineno, col)
    if not (0.0 <= p <= 1.0):
        raise ModelSemanticError(f"probability {p!r} outside [0, 1]", lineno, col)
    return p


def parse_document(text: str) -> ModelDocument:
    """Tokenize and structure a model file without resolving names."""
    lines = _significant_lines(text)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise ModelSyntaxError("empty model file: expected 'mdp' or 'mc'")
    if len(tokens) != 1 or tokens[0][0] not in ("mdp", "mc"):
        raise ModelSyntaxError(
            "first line must be exactly 'mdp' or 'mc'", lineno, tokens[0][1]
        )
    doc = ModelDocument(kind=tokens[0][0])
    seen_states: set[str] = set()
    seen_actions: set[str] = set()

    def touch_state(name: str):
        if name not in seen_states:
            seen_states.add(name)
            doc.state_order.append(name)

    def touch_action(name: str):
        if name not in seen_actions:
            seen_actions.add(name)
            doc.action_order.append(name)

    saw_accepting = False
    for lineno, tokens in lines:
        head, col = tokens[0]
        if head == "initial:":
            if len(tokens) != 2:
                raise ModelSyntaxError("expected 'initial: <state>'", lineno, col)
            if doc.initial_name is not None:
                raise ModelSemanticError("duplicate initial declaration", lineno, col)
            doc.initial_name = tokens[1][0]
            touch_state(tokens[1][0])
        elif head == "accepting:":
            if saw_accepting:
                raise ModelSemanticError("duplicate accepting declaration", lineno, col)
            saw_accepting = True
            for name, _ in tokens[1:]:
                doc.accepting_names.append(name)
                touch_state(name)
        elif head == "t":
            want = 5 if doc.kind == "mdp" else 4
            if len(tokens) != want:
                raise ModelSyntaxError(
                    f"{doc.kind} transition needs {want - 1} fields after 't'",
                    lineno,
                    col,
                )
            if doc.kind == "mdp":
                (src, _), (act, _), (dst, _), (ptok, pcol) = tokens[1:]
                touch_state(src)
                touch_action(act)
                touch_state(dst)
                doc.transitions.append(
                    (lineno, src, act, dst, _parse_probability(ptok, lineno, pcol))
                )
            else:
                (src, _), (dst, _), (ptok, pcol) = tokens[1:]
                touch_state(src)
                touch_state(dst)
                doc.transitions.append(
                    (lineno, src, None, dst, _parse_probability(ptok, lineno, pcol))
                )
        else:
            raise ModelSyntaxError(f"unknown directive {head!r}", lineno, col)
    if doc.initial_name is None:
        raise ModelSemanticError("missing 'initial:' declaration")
    return doc


def parse_model(text: str) -> MdpModel:
    """Parse a model file into a validated MdpModel.

    Markov-chain files come back as one-action MDPs sharing a single
    synthetic action.  Rows whose sums miss 1 by more than 1e-9 are
    rejected; smaller misses are renormalized.
    """
    doc = parse_document(text)
    state_index = {name: i for i, name in enumerate(doc.state_order)}
    if doc.kind == "mc":
        action_names = ("a",)
        action_index = {"a": 0}
    else:
        action_names = tuple(doc.action_order)
        action_index = {name: i for i, name in enumerate(doc.action_order)}
    n = len(doc.state_order)

    rows: dict[tuple[int, int], np.ndarray] = {}
    seen_triples: set[tuple[int, int, int]] = set()
    for lineno, src, act, dst, p in doc.transitions:
        s = state_index[src]
        a = action_index[act] if act is not None else 0
        d = state_index[dst]
        if (s, a, d) in seen_triples:
            raise ModelSemanticError(
                f"duplicate transition {src} "
                + (f"{act} " if act is not None else "")
                + f"{dst}",
                lineno,
            )
        seen_triples.add((s, a, d))
        row = rows.setdefault((s, a), np.zeros(n))
        row[d] = p

    for (s, a), row in rows.items():
        total = float(row.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            name = doc.state_order[s]
            act = f", action {action_names[a]}" if doc.kind == "mdp" else ""
            raise ModelSemanticError(
                f"outgoing probabilities of state {name}{act} sum to {total!r}"
            )
        if abs(total - 1.0) > RENORM_DEADBAND:
            rows[(s, a)] = row / total

    actions = tuple(
        tuple(sorted(a for (s, a) in rows if s == state)) for state in range(n)
    )
    for s in range(n):
        if not actions[s]:
            raise ModelSemanticError(
                f"state {doc.state_order[s]} has no outgoing transition (deadlock)"
            )
    accepting = frozenset(state_index[name] for name in doc.accepting_names)
    return MdpModel(
        num_states=n,
        actions=actions,
        rows=rows,
        initial=state_index[doc.initial_name],
        accepting=accepting,
        state_names=tuple(doc.state_order),
        action_names=action_names,
    )


def parse_policy(text: str, model: MdpModel) -> Policy:
    """Parse one '<state> <action>' pair per line into a total policy."""
    state_index = {model.state_name(s): s for s in range(model.num_states)}
    action_index = {
        model.action_name(a): a for acts in model.actions for a in acts
    }
    choice: dict[int, int] = {}
    for lineno, tokens in _significant_lines(text):
        if len(tokens) != 2:
            raise ModelSyntaxError(
                "expected '<state> <action>'", lineno, tokens[0][1]
            )
        (sname, scol), (aname, acol) = tokens
        if sname not in state_index:
            raise ModelSemanticError(f"unknown state {sname!r}", lineno, scol)
        if aname not in action_index:
            raise ModelSemanticError(f"unknown action {aname!r}", lineno, acol)
        s, a = state_index[sname], action_index[aname]
        if s in choice:
            raise ModelSemanticError(f"state {sname} assigned twice", lineno, scol)
        if a not in model.actions[s]:
            raise ModelSemanticError(
                f"action {aname} not enabled in state {sname}", lineno, acol
            )
        choice[s] = a
    missing = [model.state_name(s) for s in range(model.num_states) if s not in choice]
    if missing:
        raise ModelSemanticError(
            "policy not total: missing " + ", ".join(missing)
        )
    return Policy(choice=tuple(choice[s] for s in range(model.num_states)))


def serialize_model(model: MdpModel) -> str:
    """Inverse of parse_model; shortest-round-trip floats keep the
    composition an exact identity."""
    lines = [("mc" if model.single_action and model.action_names == ("a",) else "mdp")]
    kind = lines[0]
    lines.append(f"initial: {model.state_name(model.initial)}")
    lines.append(
        "accepting: " + " ".join(model.state_name(s) for s in sorted(model.accepting))
    )
    for (s, a), row in sorted(model.rows.items()):
        for d in np.nonzero(row)[0]:
            p = repr(float(row[d]))
            if kind == "mc":
                lines.append(f"t {model.state_name(s)} {model.state_name(int(d))} {p}")
            else:
                lines.append(
                    f"t {model.state_name(s)} {model.action_name(a)} "
                    f"{model.state_name(int(d))} {p}"
                )
    return "\n".join(lines) + "\n"


def emit_trace_csv(trace: DpTrace, bound) -> str:
    """CSV with header k,sup_error,bound; 17 significant digits so a
    reader recovers every float bit for bit."""
    if not trace.iterates or trace.sup_errors is None:
        raise LengthMismatch("trace is empty or carries no sup errors")
    bound = list(bound)
    if len(bound) != len(trace.sup_errors):
        raise LengthMismatch(
            f"{len(trace.sup_errors)} trace rows but {len(bound)} bound values"
        )
    out = ["k,sup_error,bound"]
    for k, (err, b) in enumerate(zip(trace.sup_errors, bound)):
        out.append(f"{k},{err:.17g},{float(b):.17g}")
    return "\n".join(out) + "\n"
