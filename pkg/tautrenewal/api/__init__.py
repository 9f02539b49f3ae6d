"""A set of classes and functions for taut strings in Brownian tubes.

The toolkit is split into sections. There's a section for paths and
penalties, a section for the taut string solver and its oracle,
a section for h-extrema, and a section for renewal sampling and
the estimators built on it.
"""
from .config import (
    DEFAULT_ORACLE_SETTINGS,
    DEFAULT_TOLERANCES,
    OracleSettings,
    Tolerances,
)
from .enum import TautEnum
from .error import (
    ArgumentErrorCodes,
    ConvergenceError,
    DegenerateVarianceError,
    InvalidArgumentError,
    TautError,
    UnsupportedError,
)
from .extrema import (
    CrossingSkeleton,
    ExtremumKind,
    HExtremaDecomposition,
    crossing_skeleton,
    decompose,
    free_knot_energy_bound,
    free_knot_interpolant,
    label_violations,
    lemma_gap_bound,
)
from .internal import Stream
from .oracle import kkt_violations, qp_oracle
from .pagination import PathPage, chain_pages, join_pages
from .pathkit import (
    QUADRATIC,
    PenaltyKind,
    PenaltySpec,
    PiecewiseLinearPath,
    energy,
    generate_brownian,
    read_path_csv,
    sup_distance,
    uniform_grid,
    write_path_csv,
)
from .renewal import (
    AnscombeConfig,
    AnscombeReport,
    BlockBoundaryReport,
    CltReport,
    EstimatorReport,
    FreeKnotReport,
    Law,
    LawKind,
    MomentStabilityReport,
    PairLaw,
    PairLawKind,
    RenewalSample,
    TheoremReport,
    VerificationStatus,
    anscombe_simulate,
    block_boundary_check,
    block_minimizer,
    clt_experiment,
    estimate,
    free_knot_domination,
    moment_stability,
    read_samples_csv,
    sample_renewal,
    verify_theorem_main,
    write_samples_csv,
    write_statistics_csv,
)
from .stats import KsResult, SummaryStats, covariance, ks_normality, summarize
from .tautstring import (
    BoundaryCondition,
    BoundaryKind,
    InvarianceReport,
    Knot,
    Side,
    TautStringResult,
    TubeProblem,
    endpoint_forcing_gap,
    flat_free_string,
    knot_points,
    solve,
    verify_penalty_invariance,
)
