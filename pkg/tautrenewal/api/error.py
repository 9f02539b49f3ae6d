"""This section documents exceptions the toolkit can raise.

Those are exceptions a caller can expect if the toolkit is used in correct way.
If argument types are ignored, there's no guarantees:
other exceptions (``TypeError``, numpy errors) can surface.

Numerical experiments that are merely *not applicable* (for example,
the global-versus-block check on a path with too few h-extrema) are not errors.
They are reported through :class:`~tautrenewal.api.VerificationStatus`.

Some exceptions have ``code`` property. It allows to determine the concrete error.
"""
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional

from enum_tools import document_enum

from .enum import TautEnum


class TautError(Exception):
    """Base exception used by the toolkit.

    If it's not of one of subclasses (see below), means unexpected error,
    for example a result that violates an internal consistency check.
    """

    def __init__(self, message: str, ex: Optional[Exception] = None):
        if ex and str(ex) != "":
            message = f"{message}: {ex}"
        super().__init__(message)
        self._ex = ex


@document_enum
class ArgumentErrorCodes(TautEnum):
    """Possible error codes of :class:`InvalidArgumentError`."""

    NonPositive = "NonPositive"
    """A quantity that must be strictly positive is not (h, T, dt, ...)."""
    InvalidPath = "InvalidPath"
    """Path has fewer than two points or a non-increasing time grid."""
    GridMismatch = "GridMismatch"
    """Paths were expected to share a time grid but don't."""
    InfeasibleBoundary = "InfeasibleBoundary"
    """Fixed boundary value lies outside the tube."""
    NotStrictlyConvex = "NotStrictlyConvex"
    """Penalty is not strictly convex (power exponent must exceed 1)."""
    IndexOutOfRange = "IndexOutOfRange"
    """Requested block or extremum index is not realized."""
    TooFewSamples = "TooFewSamples"
    """Operation requires more samples or replicates."""
    EmptySample = "EmptySample"
    """Sample is empty."""
    NegativeTolerance = "NegativeTolerance"
    """Tolerance must be non-negative."""
    MismatchedSkeleton = "MismatchedSkeleton"
    """Crossing skeleton was not derived from the given path."""
    InvalidLaw = "InvalidLaw"
    """Distribution or penalty parameters are outside their admissible range."""
    LengthMismatch = "LengthMismatch"
    """Paired samples have different lengths."""
    MissingField = "MissingField"
    """Document lacks a required field."""
    UnreadableFile = "UnreadableFile"
    """Input file is missing or can't be opened."""
    MalformedCell = "MalformedCell"
    """CSV cell is not a number."""
    UnexpectedExponent = "UnexpectedExponent"
    """Exponent given to a penalty kind that takes none."""
    StepExceedsHorizon = "StepExceedsHorizon"
    """Grid step is larger than the time horizon."""


class InvalidArgumentError(TautError, ValueError):
    """Invalid argument passed to an operation. Retry will never work.

    Derives from :class:`ValueError` as well,
    so generic callers can catch it without importing the toolkit.
    """

    def __init__(self, code: ArgumentErrorCodes, message: str) -> None:
        super().__init__(f"invalid argument, code: {code.value}, message: {message}")
        self._code = code

    @property
    def code(self) -> ArgumentErrorCodes:
        """Error code."""
        return self._code


class UnsupportedError(TautError):
    """Operation does not support an instance of this size."""


class ConvergenceError(TautError):
    """Iterative solver stopped at its iteration cap.

    Diagnostics describe the last accepted iterate.
    """

    def __init__(self, message: str, diagnostics: Dict[str, Any]) -> None:
        super().__init__(f"{message}, diagnostics: {diagnostics}")
        self._diagnostics = dict(diagnostics)

    @property
    def diagnostics(self) -> Dict[str, Any]:
        """Iteration count, objective and projected-gradient norm at stop."""
        return self._diagnostics


class DegenerateVarianceError(TautError):
    """Limit variance of a central limit statement is not positive.

    Standardized statistics can't be formed.
    """

    def __init__(self, name: str, value: float) -> None:
        super().__init__(f"degenerate variance: {name} = {value!r}")
        self._value = value

    @property
    def value(self) -> float:
        """Offending variance value."""
        return self._value


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise InvalidArgumentError(
            ArgumentErrorCodes.NonPositive, f"{name} must be positive, got {value!r}"
        )


def _require_tolerance(value: float) -> None:
    if value < 0:
        raise InvalidArgumentError(
            ArgumentErrorCodes.NegativeTolerance,
            f"tolerance must be non-negative, got {value!r}",
        )


@contextmanager
def _reading_csv(file: Any) -> Iterator[None]:
    # Turns I/O and number parsing failures into argument errors.
    try:
        yield
    except OSError as exp:
        raise InvalidArgumentError(
            ArgumentErrorCodes.UnreadableFile, f"can't read {file}: {exp}"
        ) from exp
    except (ValueError, IndexError) as exp:
        if isinstance(exp, InvalidArgumentError):
            raise
        raise InvalidArgumentError(
            ArgumentErrorCodes.MalformedCell, f"malformed CSV {file}: {exp}"
        ) from exp
