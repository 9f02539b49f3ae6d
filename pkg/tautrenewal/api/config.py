from typing import Optional

import numpy as np

from .error import ArgumentErrorCodes, InvalidArgumentError, _require_tolerance


class Tolerances:
    """Numerical tolerances shared by solvers and checks.

    Args:
        knot: Relative contact tolerance. A grid point is a knot when the
            string is within ``knot·(1 + max|w|)`` of a tube boundary.
        agreement: Sup-distance under which two minimizers are
            considered equal.
        energy: Absolute slack of energy comparisons.
        oracle: Projected-gradient norm at which the oracle stops.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Negative tolerance, or zero oracle tolerance.
    Usage:
        >>> # Defaults.
        >>> Tolerances()
        >>> # Looser agreement, everything else default.
        >>> Tolerances(agreement=1e-5)
    """

    def __init__(
        self,
        *,
        knot: float = 1e-9,
        agreement: float = 1e-6,
        energy: float = 1e-8,
        oracle: float = 1e-10,
    ):
        for value in (knot, agreement, energy, oracle):
            _require_tolerance(value)
        if oracle == 0:
            raise InvalidArgumentError(
                ArgumentErrorCodes.NegativeTolerance,
                "oracle tolerance must be positive",
            )
        self.knot = knot
        self.agreement = agreement
        self.energy = energy
        self.oracle = oracle

    def __repr__(self) -> str:
        return (
            f"Tolerances(knot={self.knot!r}, agreement={self.agreement!r}, "
            f"energy={self.energy!r}, oracle={self.oracle!r})"
        )

    def knot_tolerance(self, values: np.ndarray) -> float:
        """Absolute contact tolerance for a path with these values."""
        return self.knot * (1.0 + float(np.max(np.abs(values))))


class OracleSettings:
    """Projected Newton oracle configuration.

    Args:
        max_iterations: Iteration cap.
        armijo: Sufficient decrease constant of the line search.
        shrink: Backtracking factor.
        initial_step: First trial step of every line search.
        max_grid: Largest grid the oracle accepts.
        min_step: Backtracking gives up below this step.
    """

    def __init__(
        self,
        *,
        max_iterations: int = 10**7,
        armijo: float = 1e-4,
        shrink: float = 0.5,
        initial_step: float = 1.0,
        max_grid: int = 512,
        min_step: Optional[float] = 1e-30,
    ):
        if max_iterations < 1 or max_grid < 2:
            raise InvalidArgumentError(
                ArgumentErrorCodes.NonPositive,
                "max_iterations must be positive and max_grid at least 2",
            )
        if not (0 < armijo < 1 and 0 < shrink < 1 and initial_step > 0):
            raise InvalidArgumentError(
                ArgumentErrorCodes.NonPositive,
                "armijo and shrink must lie in (0, 1), initial_step must be positive",
            )
        self.max_iterations = max_iterations
        self.armijo = armijo
        self.shrink = shrink
        self.initial_step = initial_step
        self.max_grid = max_grid
        self.min_step = min_step or 0.0


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_ORACLE_SETTINGS = OracleSettings()
