"""End-to-end acceptance checks, one test per numbered criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one
``criterion N: PASS/FAIL`` line each.  Every tolerance is pinned here;
the random-chain families are fully determined by the seeds below.
"""
import math
from dataclasses import dataclass

import numpy as np
import pytest

from buchidp.contraction import bound_sequence, certify, matrix_power_inf_norm
from buchidp.errors import CertificateViolation, EmptySystem
from buchidp.generator import chain_suite
from buchidp.graph import classify_bsccs, contraction_params, partition_states
from buchidp.model import mc_from_matrix
from buchidp.oracle import (
    dp_vs_oracle_report,
    estimate_satisfaction,
    satisfaction_probability,
)
from buchidp.surrogate import (
    SurrogateParams,
    build_reduced_system,
    expand_values,
    run_dp,
    solve_value,
)

GAMMA1_SEED = 20240809
GAMMA1_COUNT = 200
GAMMA_LT1_SEED = 77
GAMMA_LT1_COUNT = 100
MC_SEED = 20240809


def report(num: int, label: str, ok: bool):
    print(f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'}")


def case_study_system(gamma_b=0.99):
    mc = mc_from_matrix(
        [[0, 1, 0], [1, 0, 0], [0, 1, 0]],
        accepting={0},
        initial=2,
        state_names=("sa", "sb", "sc"),
    )
    partition = partition_states(mc, classify_bsccs(mc))
    cp = contraction_params(mc, partition)
    params = SurrogateParams(gamma_b=gamma_b, gamma=1.0)
    return mc, cp, params, build_reduced_system(mc, partition, params)


@dataclass
class DpInstance:
    gamma_b: float
    gamma: float
    n_prime: int
    iterates: list
    sup_errors: list
    bounds: np.ndarray
    cert: object
    excess_vs_c: float


def run_instance(mc, gamma_b, gamma, k_cap=None):
    report_ = classify_bsccs(mc)
    partition = partition_states(mc, report_)
    cp = contraction_params(mc, partition)
    params = SurrogateParams(gamma_b=gamma_b, gamma=gamma)
    try:
        sys_ = build_reduced_system(mc, partition, params)
    except EmptySystem:
        return None
    if k_cap is None:
        k_cap = min(500, 5 * (cp.n_prime + 1) * math.ceil(1 / (1 - gamma_b)))
    value = solve_value(sys_)
    trace = run_dp(sys_, k_cap, reference=value)
    cert = certify(sys_, params, cp)
    v_norm = float(np.abs(value).max())
    if gamma < 1.0:
        bounds = gamma ** np.arange(k_cap + 1) * v_norm
    else:
        bounds = bound_sequence(cert, k_cap, v_norm=v_norm)
    return DpInstance(
        gamma_b=gamma_b,
        gamma=gamma,
        n_prime=cp.n_prime,
        iterates=trace.iterates,
        sup_errors=trace.sup_errors,
        bounds=bounds,
        cert=cert,
        excess_vs_c=cert.norm_at_step_n - cert.c_theoretical,
    )


@pytest.fixture(scope="module")
def gamma1_instances():
    out = []
    chains = chain_suite(GAMMA1_SEED, GAMMA1_COUNT, min_states=2, max_states=12)
    for i, mc in enumerate(chains):
        gb = 0.9 if i % 2 == 0 else 0.99
        inst = run_instance(mc, gb, 1.0)
        if inst is not None:
            out.append(inst)
    return out


@pytest.fixture(scope="module")
def gamma_lt1_instances():
    out = []
    chains = chain_suite(GAMMA_LT1_SEED, GAMMA_LT1_COUNT, min_states=2, max_states=12)
    for i, mc in enumerate(chains):
        g = 0.9 if i % 2 == 0 else 0.99
        inst = run_instance(mc, 0.8 * g, g, k_cap=200)
        if inst is not None:
            out.append(inst)
    return out


@pytest.fixture(scope="module")
def gadget():
    return mc_from_matrix(
        [[0, 0.5, 0.5], [0, 1, 0], [0, 0, 1]],
        accepting={1},
        initial=0,
        state_names=("s0", "s1", "s2"),
    )


@pytest.fixture(scope="module")
def gadget_estimate(gadget):
    params = SurrogateParams(gamma_b=0.9, gamma=1.0)
    return estimate_satisfaction(
        gadget, params, episodes=100_000, horizon=200, seed=MC_SEED
    )


def test_criterion_1_case_study_error_vectors():
    _, _, _, sys_ = case_study_system()
    value = solve_value(sys_)
    trace = run_dp(sys_, 3, reference=value)
    expected = {
        1: (0.99, 1.0, 1.0),
        2: (0.99, 0.99, 1.0),
        3: (0.9801, 0.99, 0.99),
    }
    worst = max(
        abs(abs(trace.iterates[k][i] - value[i]) - expected[k][i])
        for k in expected
        for i in range(3)
    )
    ok = worst <= 1e-12
    report(1, "case-study error vectors", ok)
    assert ok, f"max deviation {worst}"


def test_criterion_2_case_study_norms_and_certificate():
    _, cp, params, sys_ = case_study_system()
    norms = [matrix_power_inf_norm(sys_.h_matrix, k) for k in (1, 2, 3)]
    cert = certify(sys_, params, cp)
    ok = (
        abs(norms[0] - 1.0) <= 1e-12
        and abs(norms[1] - 1.0) <= 1e-12
        and abs(norms[2] - 0.99) <= 1e-12
        and cert.step_n == 3
        and abs(cert.c_theoretical - 0.99) <= 1e-12
        and cert.epsilon == 1.0
        and cert.n_prime == 2
    )
    report(2, "case-study norms and certificate", ok)
    assert ok, (norms, cert)


def test_criterion_3_bound_domination_gamma_one(gamma1_instances):
    _, cp, params, sys_ = case_study_system()
    value = solve_value(sys_)
    trace = run_dp(sys_, 60, reference=value)
    cert = certify(sys_, params, cp)
    bounds = bound_sequence(cert, 60, v_norm=float(np.abs(value).max()))
    worst = max(e - b for e, b in zip(trace.sup_errors, bounds))
    for inst in gamma1_instances:
        worst = max(
            worst,
            max(e - b for e, b in zip(inst.sup_errors, inst.bounds)),
        )
    ok = worst <= 1e-10 and len(gamma1_instances) > 150
    report(3, "certified bound domination, gamma = 1", ok)
    assert ok, f"worst excess {worst} over {len(gamma1_instances)} systems"


def test_criterion_4_bound_gamma_below_one(gamma_lt1_instances):
    worst = max(
        max(e - b for e, b in zip(inst.sup_errors, inst.bounds))
        for inst in gamma_lt1_instances
    )
    ok = worst <= 1e-10 and len(gamma_lt1_instances) > 75
    report(4, "one-step bound, gamma < 1", ok)
    assert ok, f"worst excess {worst} over {len(gamma_lt1_instances)} systems"


def test_criterion_5_certificate_validity(gamma1_instances):
    # certify() raises CertificateViolation on any breach, so merely
    # having built every instance already counts the violations: zero.
    worst = max(inst.excess_vs_c for inst in gamma1_instances)
    ok = worst <= 1e-12
    report(5, "multi-step certificate validity", ok)
    assert ok, f"worst ||H^(n'+1)|| - c = {worst}"


def test_criterion_6_oracle_equivalence_paired_monotone():
    chains = chain_suite(GAMMA1_SEED, GAMMA1_COUNT, min_states=2, max_states=12)
    worst_pairing = -np.inf
    worst_zero = 0.0
    for mc in chains:
        tight = dp_vs_oracle_report(mc, SurrogateParams(0.999), tol=1.0)
        wide = dp_vs_oracle_report(mc, SurrogateParams(0.9), tol=1.0)
        worst_pairing = max(worst_pairing, tight.sup_gap - wide.sup_gap)
        rejecting = partition_states(mc, classify_bsccs(mc)).rejecting_bscc_states
        for s in rejecting:
            worst_zero = max(worst_zero, abs(tight.value[s]), abs(wide.value[s]))
    ok = worst_pairing <= 1e-12 and worst_zero <= 1e-12
    report(6, "oracle equivalence, paired gamma_b monotonicity", ok)
    assert ok, (worst_pairing, worst_zero)


def test_criterion_7_monotone_iterates(gamma1_instances, gamma_lt1_instances):
    ok = True
    for inst in gamma1_instances + gamma_lt1_instances:
        for k in range(len(inst.iterates) - 1):
            if not (inst.iterates[k + 1] >= inst.iterates[k]).all():
                ok = False
            if inst.sup_errors[k + 1] > inst.sup_errors[k] + 1e-12:
                ok = False
    report(7, "monotone iterates, nonincreasing errors", ok)
    assert ok


def test_criterion_8_branch_gadget_ground_truth(gadget, gadget_estimate):
    p_sat = satisfaction_probability(gadget, classify_bsccs(gadget)).probabilities
    comparison = dp_vs_oracle_report(gadget, SurrogateParams(0.999), tol=1e-6)
    mc_err = abs(gadget_estimate.means[0] - 0.5)
    ok = (
        abs(p_sat[0] - 0.5) <= 1e-12
        and abs(comparison.value[0] - 0.5) <= 1e-6
        and comparison.sup_gap <= 1e-6
        and mc_err <= 0.01
    )
    report(8, "branch gadget ground truth", ok)
    assert ok, (p_sat[0], comparison.sup_gap, mc_err)


def test_criterion_9_determinism(gadget, gadget_estimate, tmp_path):
    params = SurrogateParams(gamma_b=0.9, gamma=1.0)
    rerun = estimate_satisfaction(
        gadget, params, episodes=100_000, horizon=200, seed=MC_SEED
    )
    mc_identical = (
        rerun.means.tobytes() == gadget_estimate.means.tobytes()
        and rerun.variances.tobytes() == gadget_estimate.variances.tobytes()
    )
    from buchidp.cli import main

    chain = tmp_path / "chain.mdp"
    chain.write_text(
        "mc\ninitial: sc\naccepting: sa\nt sa sb 1\nt sb sa 1\nt sc sb 1\n"
    )
    out1, out2 = tmp_path / "t1.csv", tmp_path / "t2.csv"
    code1 = main(["trace", str(chain), "--k-max", "40", "--out", str(out1)])
    code2 = main(["trace", str(chain), "--k-max", "40", "--out", str(out2)])
    csv_identical = (
        code1 == 0 and code2 == 0 and out1.read_bytes() == out2.read_bytes()
    )
    ok = mc_identical and csv_identical
    report(9, "bit-for-bit determinism", ok)
    assert ok, (mc_identical, csv_identical)
