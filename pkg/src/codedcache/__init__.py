"""Low-subpacketization coded caching from linear block codes.

Build a generator matrix (or a residue codeword source) whose consecutive
column windows are full rank, turn its codewords into a resolvable design,
place subfiles by block membership, and deliver with all-but-one XOR
equations grouped by recovery sets.  The package certifies the column
property, generates and simulates the delivery byte-exactly, transposes
equation-subfile matrices into complementary-memory schemes, and compares
operating points against the classical single-cache-point scheme.
"""

from .analysis import (
    CandidateEntry,
    ComparisonRow,
    compare,
    comparison_csv,
    comparison_json,
    construct_candidate_set,
    k_max_for_budget,
    memory_sharing_bound,
    mn_metrics,
    replay_route,
    scaling_exponent,
    spc_family_exponent,
    spc_family_gap,
)
from .caching import (
    CachingScheme,
    DeliveryPlan,
    EqSubfileMatrix,
    Equation,
    MatrixScheme,
    RecoverySetGraph,
    SimulationReport,
    byte_stream,
    code_point_metrics,
    equation_subfile_matrix,
    expected_delta,
    generate_delivery,
    placement,
    recovery_set_graph,
    render_equation,
    scheme_from_eq_subfile,
    scheme_metrics,
    simulate,
    simulate_matrix,
    verify_lemma4,
)
from .codes import (
    CcpCertificate,
    CrtCodewordSource,
    GeneratorMatrix,
    Provenance,
    WindowCheck,
    build_claim5,
    build_claim6,
    build_claim9,
    build_crt_cyclic,
    build_cyclic,
    build_mds,
    build_spc,
    ccp_windows,
    check_ccp,
    check_ccp_cyclic_shortcut,
    cyclic_search_space,
    extend_ccp,
    kron_identity,
    least_z,
    search_cyclic_generators,
)
from .design import (
    CodewordMatrix,
    ResolvableDesign,
    block_intersection,
    codeword_matrix,
    incidence_csv,
    incidence_matrix,
    resolvable_design,
    verify_resolvable,
)
from .errors import (
    CodedCacheError,
    DecodeFailure,
    DomainError,
    IncompleteDemands,
    InvalidAlpha,
    Lemma4Violated,
    NoFeasibleK,
    NonIntegralCachePoint,
    NoSolutionInRange,
    SchemeFileError,
)
from .gf import Matrix, ScalarDomain, mat_det_is_unit, mat_rank, mat_solve, natural_domain
from .schemefile import load_scheme, save_scheme, scheme_from_dict, scheme_to_dict

__version__ = "0.1.0"

__all__ = [
    "CachingScheme",
    "CandidateEntry",
    "CcpCertificate",
    "CodedCacheError",
    "CodewordMatrix",
    "ComparisonRow",
    "CrtCodewordSource",
    "DecodeFailure",
    "DeliveryPlan",
    "DomainError",
    "EqSubfileMatrix",
    "Equation",
    "GeneratorMatrix",
    "IncompleteDemands",
    "InvalidAlpha",
    "Lemma4Violated",
    "Matrix",
    "MatrixScheme",
    "NoFeasibleK",
    "NonIntegralCachePoint",
    "NoSolutionInRange",
    "Provenance",
    "RecoverySetGraph",
    "ResolvableDesign",
    "ScalarDomain",
    "SchemeFileError",
    "SimulationReport",
    "WindowCheck",
    "block_intersection",
    "build_claim5",
    "build_claim6",
    "build_claim9",
    "build_crt_cyclic",
    "build_cyclic",
    "build_mds",
    "build_spc",
    "byte_stream",
    "ccp_windows",
    "check_ccp",
    "check_ccp_cyclic_shortcut",
    "code_point_metrics",
    "codeword_matrix",
    "compare",
    "comparison_csv",
    "comparison_json",
    "construct_candidate_set",
    "cyclic_search_space",
    "equation_subfile_matrix",
    "expected_delta",
    "extend_ccp",
    "generate_delivery",
    "incidence_csv",
    "incidence_matrix",
    "k_max_for_budget",
    "kron_identity",
    "least_z",
    "load_scheme",
    "mat_det_is_unit",
    "mat_rank",
    "mat_solve",
    "memory_sharing_bound",
    "mn_metrics",
    "natural_domain",
    "placement",
    "recovery_set_graph",
    "render_equation",
    "replay_route",
    "resolvable_design",
    "save_scheme",
    "scaling_exponent",
    "scheme_from_dict",
    "scheme_from_eq_subfile",
    "scheme_metrics",
    "scheme_to_dict",
    "search_cyclic_generators",
    "simulate",
    "simulate_matrix",
    "spc_family_exponent",
    "spc_family_gap",
    "verify_lemma4",
    "verify_resolvable",
]
