"""Command-line front end.

Subcommands: check, trace, bound, bsccs, oracle, mc, sweep.  Reports go
to stdout (or --out); diagnostics go to stderr only.  Exit codes: 0 ok,
2 unparseable input or bad usage, 3 violated invariant or certificate,
4 unwritable output.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .contraction import bound_sequence, certify
from .errors import BuchiDpError, CertificateViolation, EmptySystem, ParseError
from .graph import classify_bsccs, contraction_params, partition_states
from .model import McModel, apply_policy, trivial_policy, validate_mdp
from .oracle import dp_vs_oracle_report, estimate_satisfaction, satisfaction_probability
from .parser import emit_trace_csv, parse_model, parse_policy
from .surrogate import (
    DpTrace,
    SurrogateParams,
    build_reduced_system,
    expand_values,
    k_max_for_tolerance,
    run_dp,
    solve_value,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_OUTPUT = 4


@dataclass
class RunConfig:
    model_path: str
    policy_path: str | None = None
    gamma_b: float = 0.99
    gamma: float = 1.0
    k_max: int | None = None
    tol: float | None = None
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.k_max is not None and self.tol is not None:
            raise ValueError("supply exactly one of --k-max / --tol")

    @property
    def params(self) -> SurrogateParams:
        return SurrogateParams(gamma_b=self.gamma_b, gamma=self.gamma)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load_chain(config: RunConfig) -> McModel:
    with open(config.model_path, encoding="utf-8") as fh:
        model = parse_model(fh.read())
    bad = validate_mdp(model)
    if bad:
        raise BuchiDpError("; ".join(bad))
    if config.policy_path is not None:
        with open(config.policy_path, encoding="utf-8") as fh:
            policy = parse_policy(fh.read(), model)
    elif model.single_action:
        policy = trivial_policy(model)
    else:
        raise ParseError(
            "model has states with several actions; supply --policy"
        )
    return apply_policy(model, policy)


def _try_load(config: RunConfig):
    """(chain, 0) on success, (None, exit code) with the diagnostic printed."""
    try:
        return _load_chain(config), EXIT_OK
    except (ParseError, OSError, ValueError) as exc:
        return None, _fail(EXIT_PARSE, str(exc))
    except BuchiDpError as exc:
        return None, _fail(EXIT_INVARIANT, str(exc))


def _write_out(config: RunConfig, text: str) -> int:
    if config.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(EXIT_OUTPUT, f"cannot write {config.out}: {exc}")
    return EXIT_OK


def _pipeline(mc: McModel, params: SurrogateParams):
    report = classify_bsccs(mc)
    partition = partition_states(mc, report)
    cp = contraction_params(mc, partition)
    return report, partition, cp


def cmd_check(config: RunConfig) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    params = config.params
    report, partition, cp = _pipeline(mc, params)
    lines = []
    lines.append(
        f"states: {mc.num_states}  accepting: {len(partition.b_states)}  "
        f"rejecting-bscc: {len(partition.rejecting_bscc_states)}  "
        f"remaining: {partition.n_prime}"
    )
    p_sat = satisfaction_probability(mc, report).probabilities
    try:
        sys_ = build_reduced_system(mc, partition, params)
        value = expand_values(partition, solve_value(sys_))
        cert = certify(sys_, params, cp)
        lines.append(
            f"certificate: N={cert.step_n} c={cert.c_theoretical!r} "
            f"epsilon={cert.epsilon!r} n'={cert.n_prime} "
            f"first_contractive_step={cert.first_contractive_step}"
        )
    except EmptySystem:
        value = np.zeros(mc.num_states)
        lines.append("certificate: none (all states in rejecting BSCCs; value = 0)")
    except CertificateViolation as exc:
        print("\n".join(lines))
        return _fail(EXIT_INVARIANT, str(exc))
    gap = np.abs(value - p_sat)
    sup_gap = float(gap.max()) if gap.size else 0.0
    lines.append(f"sup gap |V - P_sat|: {sup_gap!r}")
    lines.append(f"{'state':<12}{'V':<22}{'P_sat':<22}gap")
    for s in range(mc.num_states):
        lines.append(
            f"{mc.state_name(s):<12}{float(value[s])!r:<22}"
            f"{float(p_sat[s])!r:<22}{float(gap[s])!r}"
        )
    print("\n".join(lines))
    residual = np.abs(p_sat - mc.transition @ p_sat)[
        (p_sat > 0.0) & (p_sat < 1.0)
    ]
    if residual.size and residual.max() > 1e-9:
        return _fail(EXIT_INVARIANT, f"reachability residual {residual.max()!r}")
    return EXIT_OK


def _trace_and_bound(mc: McModel, config: RunConfig):
    params = config.params
    report, partition, cp = _pipeline(mc, params)
    try:
        sys_ = build_reduced_system(mc, partition, params)
    except EmptySystem:
        k_max = config.k_max if config.k_max is not None else 0
        trace = DpTrace(
            iterates=[np.zeros(0)] * (k_max + 1), sup_errors=[0.0] * (k_max + 1)
        )
        return trace, [0.0] * (k_max + 1)
    value = solve_value(sys_)
    if config.k_max is not None:
        k_max = config.k_max
    else:
        k_max = k_max_for_tolerance(config.tol, params, cp)
    trace = run_dp(sys_, k_max, reference=value)
    cert = certify(sys_, params, cp)
    bounds = bound_sequence(cert, k_max, v_norm=float(np.abs(value).max()))
    return trace, bounds


def cmd_trace(config: RunConfig) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    if config.k_max is None and config.tol is None:
        return _fail(EXIT_PARSE, "trace needs --k-max or --tol")
    try:
        trace, bounds = _trace_and_bound(mc, config)
    except CertificateViolation as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    return _write_out(config, emit_trace_csv(trace, bounds))


def cmd_bound(config: RunConfig) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    params = config.params
    _, partition, cp = _pipeline(mc, params)
    try:
        sys_ = build_reduced_system(mc, partition, params)
        cert = certify(sys_, params, cp)
    except EmptySystem:
        print("no certificate: all states in rejecting BSCCs; value = 0")
        return EXIT_OK
    except CertificateViolation as exc:
        return _fail(EXIT_INVARIANT, str(exc))
    norms = " ".join(repr(v) for v in cert.empirical_norms)
    print(f"N = {cert.step_n}")
    print(f"c = {cert.c_theoretical!r}")
    print(f"epsilon = {cert.epsilon!r}")
    print(f"n' = {cert.n_prime}")
    print(f"first contractive step = {cert.first_contractive_step}")
    print(f"||H^k|| for k=1..N: {norms}")
    if config.out is not None:
        k_max = config.k_max if config.k_max is not None else 3 * cert.step_n
        bounds = bound_sequence(cert, k_max)
        rows = ["k,bound"] + [f"{k},{float(b):.17g}" for k, b in enumerate(bounds)]
        return _write_out(config, "\n".join(rows) + "\n")
    return EXIT_OK


def cmd_bsccs(config: RunConfig, as_json: bool) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    report = classify_bsccs(mc)
    partition = partition_states(mc, report)
    if as_json:
        for comp in report.bsccs:
            print(
                json.dumps(
                    {
                        "states": [mc.state_name(s) for s in sorted(comp)],
                        "accepting": comp in report.accepting_bsccs,
                    },
                    sort_keys=True,
                )
            )
        return EXIT_OK
    print(f"sccs: {len(report.sccs)}  bsccs: {len(report.bsccs)}")
    for comp in report.bsccs:
        kind = "accepting" if comp in report.accepting_bsccs else "rejecting"
        names = " ".join(mc.state_name(s) for s in sorted(comp))
        print(f"  {kind}: {{{names}}}")
    print(
        "partition: B={%s}  rejecting-bscc={%s}  remaining={%s}"
        % (
            " ".join(mc.state_name(s) for s in partition.b_states),
            " ".join(mc.state_name(s) for s in partition.rejecting_bscc_states),
            " ".join(mc.state_name(s) for s in partition.remaining),
        )
    )
    return EXIT_OK


def cmd_oracle(config: RunConfig, as_json: bool, tol: float) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    comparison = dp_vs_oracle_report(mc, config.params, tol)
    if as_json:
        print(
            json.dumps(
                {
                    "states": [mc.state_name(s) for s in range(mc.num_states)],
                    "value": comparison.value.tolist(),
                    "p_sat": comparison.p_sat.tolist(),
                    "sup_gap": comparison.sup_gap,
                    "tol": comparison.tol,
                    "passed": comparison.passed,
                },
                sort_keys=True,
            )
        )
    else:
        print(f"{'state':<12}{'V':<22}{'P_sat':<22}gap")
        for s in range(mc.num_states):
            print(
                f"{mc.state_name(s):<12}{float(comparison.value[s])!r:<22}"
                f"{float(comparison.p_sat[s])!r:<22}{float(comparison.per_state_gap[s])!r}"
            )
        verdict = "pass" if comparison.passed else "FAIL"
        print(f"sup gap {comparison.sup_gap!r} vs tol {tol!r}: {verdict}")
    return EXIT_OK if comparison.passed else EXIT_INVARIANT


def cmd_mc(config: RunConfig, episodes: int, horizon: int | None) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    if horizon is None:
        horizon = 100 * mc.num_states
    est = estimate_satisfaction(mc, config.params, episodes, horizon, config.seed)
    print(f"episodes={est.episodes} horizon={est.horizon} seed={est.seed}")
    print(f"{'state':<12}{'mean':<22}variance")
    for s in range(mc.num_states):
        print(
            f"{mc.state_name(s):<12}{float(est.means[s])!r:<22}"
            f"{float(est.variances[s])!r}"
        )
    return EXIT_OK


def cmd_sweep(config: RunConfig, gamma_b_list: list[float]) -> int:
    mc, code = _try_load(config)
    if mc is None:
        return code
    rows = ["gamma_b,sup_gap"]
    for gb in gamma_b_list:
        try:
            params = SurrogateParams(gamma_b=gb, gamma=config.gamma)
        except ValueError as exc:
            return _fail(EXIT_PARSE, str(exc))
        comparison = dp_vs_oracle_report(mc, params, tol=1.0)
        rows.append(f"{gb:.17g},{comparison.sup_gap:.17g}")
    return _write_out(config, "\n".join(rows) + "\n")


def _add_common(p: argparse.ArgumentParser, *, needs_iter: bool = False):
    p.add_argument("model", help="model file (.mdp)")
    p.add_argument("--policy", default=None, help="policy file (.pol)")
    p.add_argument("--gamma-b", type=float, default=0.99)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    if needs_iter:
        p.add_argument("--k-max", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)


def _config(args) -> RunConfig:
    return RunConfig(
        model_path=args.model,
        policy_path=args.policy,
        gamma_b=args.gamma_b,
        gamma=args.gamma,
        k_max=getattr(args, "k_max", None),
        tol=getattr(args, "tol", None),
        seed=args.seed,
        out=args.out,
    )


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="buchidp",
        description="Satisfaction probability of Büchi objectives on Markov "
        "chains via surrogate-reward dynamic programming.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("check", help="full pipeline report"))
    _add_common(sub.add_parser("trace", help="error-vs-bound CSV"), needs_iter=True)
    _add_common(sub.add_parser("bound", help="contraction certificate"), needs_iter=True)
    p = sub.add_parser("bsccs", help="SCC/BSCC report")
    _add_common(p)
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("oracle", help="DP value vs reachability oracle")
    _add_common(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--cmp-tol", type=float, default=1e-6)
    p = sub.add_parser("mc", help="Monte Carlo estimate")
    _add_common(p)
    p.add_argument("--episodes", type=int, default=10000)
    p.add_argument("--horizon", type=int, default=None)
    p = sub.add_parser("sweep", help="gap vs gamma_b CSV")
    _add_common(p)
    p.add_argument(
        "--gamma-b-values",
        required=True,
        help="comma-separated list, e.g. 0.9,0.99,0.999",
    )

    args = ap.parse_args(argv)
    try:
        config = _config(args)
        config.params  # reject a bad discount pair before any file IO
    except ValueError as exc:
        return _fail(EXIT_PARSE, str(exc))

    if args.command == "check":
        return cmd_check(config)
    if args.command == "trace":
        return cmd_trace(config)
    if args.command == "bound":
        return cmd_bound(config)
    if args.command == "bsccs":
        return cmd_bsccs(config, args.json)
    if args.command == "oracle":
        return cmd_oracle(config, args.json, args.cmp_tol)
    if args.command == "mc":
        return cmd_mc(config, args.episodes, args.horizon)
    if args.command == "sweep":
        try:
            values = [float(v) for v in args.gamma_b_values.split(",") if v]
        except ValueError as exc:
            return _fail(EXIT_PARSE, str(exc))
        return cmd_sweep(config, values)
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
