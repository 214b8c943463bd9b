"""Satisfaction probabilities of Büchi objectives on finite Markov chains
(and MDPs under a fixed memoryless policy), computed by dynamic programming
on a two-discount surrogate reward and verified against classical
reachability analysis.
"""

from .contraction import (
    ContractionCertificate,
    bound_sequence,
    certify,
    discounted_path_probability,
    matrix_power_inf_norm,
)
from .errors import (
    BuchiDpError,
    CertificateViolation,
    DimensionMismatch,
    EmptySystem,
    LengthMismatch,
    ModelSemanticError,
    ModelSyntaxError,
    NoTransitions,
    ParseError,
    PolicyInvalid,
    SingularSystem,
)
from .generator import chain_suite, random_chain
from .graph import (
    BsccReport,
    ContractionParams,
    StatePartition,
    classify_bsccs,
    contraction_params,
    partition_states,
    scc_decompose,
)
from .model import (
    McModel,
    MdpModel,
    Policy,
    apply_policy,
    mc_from_matrix,
    trivial_policy,
    validate_mc,
    validate_mdp,
)
from .oracle import (
    DpOracleComparison,
    McEstimate,
    ReachabilityResult,
    dp_vs_oracle_report,
    estimate_satisfaction,
    satisfaction_probability,
)
from .parser import (
    ModelDocument,
    emit_trace_csv,
    parse_document,
    parse_model,
    parse_policy,
    serialize_model,
)
from .surrogate import (
    DpTrace,
    ReducedSystem,
    SurrogateParams,
    bellman_update,
    build_reduced_system,
    expand_values,
    k_max_for_tolerance,
    run_dp,
    solve_value,
    surrogate_reward,
)

__version__ = "0.1.0"
