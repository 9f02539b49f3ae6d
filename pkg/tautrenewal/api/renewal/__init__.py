"""
Block minimizers, renewal sampling of ``(τ, 𝓔)`` pairs, the energy-rate
estimators and their central limit experiments.
"""
from .anscombe import (
    AnscombeConfig,
    AnscombeReport,
    Law,
    PairLaw,
    PairMoments,
    anscombe_simulate,
    sigma_bar_components,
    sigma_bar_sq,
)
from .blocks import (
    BlockBoundaryReport,
    FreeKnotReport,
    TheoremReport,
    block_boundary_check,
    block_minimizer,
    free_knot_domination,
    verify_theorem_main,
)
from .enums import LawKind, PairLawKind, VerificationStatus
from .sampling import (
    CltReport,
    EstimatorReport,
    MomentStabilityReport,
    RenewalSample,
    clt_experiment,
    estimate,
    limit_variance,
    moment_stability,
    read_samples_csv,
    sample_renewal,
    write_samples_csv,
    write_statistics_csv,
)
