"""Random subgraph-pair model, exact alignment search, and the
information-theoretic margins that predict when alignment succeeds.

The package splits into graphs (exact combinatorial primitives), model
(the generative sampler and pair bundles), solver (alignment enumeration
and the exhaustive posterior oracle), analysis (closed-form margins,
bounds and region labels), experiments (seeded Monte Carlo campaigns),
and cli (the ``subalign`` executable).
"""

from ._version import __version__
from .analysis import (
    EntropyGap,
    ExpectedCopies,
    MarginGap,
    Margins,
    RegionLabel,
    StructuralEntropyBounds,
    TightnessAdvisory,
    atypicality_bound,
    binary_entropy,
    classify_region,
    converse_entropy_gap,
    default_typicality_eps,
    exact_structural_entropy,
    expected_copy_count,
    log_binomial,
    margin_gap,
    margins,
    rigidity_margin,
    structural_entropy_bounds,
    tightness_advisory,
    typicality_check,
)
from .errors import CapExceeded
from .experiments import (
    ChernoffReport,
    ExpectationReport,
    PointFailure,
    RigidityReport,
    SolverCaps,
    SweepSpec,
    TrialOutcome,
    TrialStats,
    batch_copy_counts,
    recovery_trial,
    run_point,
    run_sweep,
    validate_chernoff,
    validate_expectation,
    validate_rigidity,
)
from .graphs import (
    Graph,
    VertexBijection,
    aut_count,
    complete_graph,
    cycle_graph,
    distinct_relabeling_count,
    empty_graph,
    find_isomorphism,
    format_edge_list,
    is_isomorphic,
    is_rigid,
    named_graph,
    parse_edge_list,
    path_graph,
)
from .model import (
    ModelParams,
    SubgraphPair,
    anonymize,
    complement_pair,
    format_pair,
    load_pair,
    parse_pair,
    sample_er,
    sample_pair,
    save_pair,
    verify_pair,
)
from .solver import (
    AlignmentCandidate,
    CopyCount,
    PosteriorOracle,
    RecoveryVerdict,
    SolveResult,
    count_induced_copies,
    enumerate_alignments,
    judge_recovery,
    map_posterior_oracle,
)

__all__ = [
    "__version__",
    "CapExceeded",
    # graphs
    "Graph",
    "VertexBijection",
    "empty_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "named_graph",
    "parse_edge_list",
    "format_edge_list",
    "is_isomorphic",
    "find_isomorphism",
    "aut_count",
    "is_rigid",
    "distinct_relabeling_count",
    # model
    "ModelParams",
    "SubgraphPair",
    "sample_er",
    "sample_pair",
    "anonymize",
    "verify_pair",
    "complement_pair",
    "format_pair",
    "parse_pair",
    "save_pair",
    "load_pair",
    # solver
    "AlignmentCandidate",
    "SolveResult",
    "enumerate_alignments",
    "CopyCount",
    "count_induced_copies",
    "PosteriorOracle",
    "map_posterior_oracle",
    "RecoveryVerdict",
    "judge_recovery",
    # analysis
    "binary_entropy",
    "Margins",
    "margins",
    "RegionLabel",
    "classify_region",
    "TightnessAdvisory",
    "tightness_advisory",
    "ExpectedCopies",
    "expected_copy_count",
    "typicality_check",
    "default_typicality_eps",
    "atypicality_bound",
    "StructuralEntropyBounds",
    "structural_entropy_bounds",
    "EntropyGap",
    "converse_entropy_gap",
    "MarginGap",
    "margin_gap",
    "rigidity_margin",
    "exact_structural_entropy",
    "log_binomial",
    # experiments
    "SolverCaps",
    "SweepSpec",
    "TrialStats",
    "TrialOutcome",
    "PointFailure",
    "recovery_trial",
    "run_point",
    "run_sweep",
    "batch_copy_counts",
    "ExpectationReport",
    "validate_expectation",
    "ChernoffReport",
    "validate_chernoff",
    "RigidityReport",
    "validate_rigidity",
]
