from enum_tools import document_enum

from ..enum import TautEnum


@document_enum
class VerificationStatus(TautEnum):
    """Outcome of a numerical verification."""

    Passed = "pass"  # doc: All compared quantities agree within tolerance.
    Failed = "fail"  # doc: Some compared quantity exceeds the tolerance.
    NotApplicable = "not-applicable"  # doc: Preconditions don't hold for this input.


@document_enum
class LawKind(TautEnum):
    """Distribution family of a synthetic renewal variable."""

    Exponential = "exponential"  # doc: Parameter: mean.
    Gaussian = "gaussian"  # doc: Parameters: mean, standard deviation.
    Gamma = "gamma"  # doc: Parameters: shape, scale.
    Uniform = "uniform"  # doc: Parameters: low, high.


@document_enum
class PairLawKind(TautEnum):
    """Dependence between reward X and duration τ."""

    Independent = "independent"  # doc: X and τ drawn independently.
    LinearCorrelated = "linear-correlated"  # doc: X affine in τ plus Gaussian noise.
    Identical = "identical"  # doc: X equals τ.
