import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from ..config import DEFAULT_ORACLE_SETTINGS, DEFAULT_TOLERANCES, OracleSettings
from ..error import (
    ArgumentErrorCodes,
    ConvergenceError,
    InvalidArgumentError,
    UnsupportedError,
    _require_positive,
)
from ..pathkit import PenaltySpec
from ..tautstring import TautStringResult, TubeProblem

logger = logging.getLogger(__name__)

Observer = Callable[[int, float], None]

# Objective changes below this many ulps of the objective are rounding noise.
_ROUNDING_ULPS = 64
# Relative floor of the Newton damping.
_DAMPING_FLOOR = 1e-14


class _Objective:
    # Σ c((x[i+1] − x[i]) / gap[i]) · gap[i] with its gradient and Hessian.
    def __init__(self, gaps: np.ndarray, penalty: PenaltySpec):
        self._gaps = gaps
        self._penalty = penalty

    def _slopes(self, x: np.ndarray) -> np.ndarray:
        return np.diff(x) / self._gaps

    def value(self, x: np.ndarray) -> float:
        return float(np.dot(self._penalty(self._slopes(x)), self._gaps))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        flux = self._penalty.derivative(self._slopes(x))
        grad = np.zeros_like(x)
        grad[:-1] -= flux
        grad[1:] += flux
        return grad

    def hessian(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Main diagonal and sub-diagonal of the tridiagonal Hessian."""
        weights = self._penalty.curvature(self._slopes(x)) / self._gaps
        diagonal = np.zeros_like(x)
        diagonal[:-1] += weights
        diagonal[1:] += weights
        return diagonal, -weights


def _projected_gradient(
    x: np.ndarray, grad: np.ndarray, lower: np.ndarray, upper: np.ndarray
) -> np.ndarray:
    return x - np.clip(x - grad, lower, upper)


def _newton_direction(
    grad: np.ndarray,
    diagonal: np.ndarray,
    sub: np.ndarray,
    clamped: np.ndarray,
    damping: float,
) -> Optional[np.ndarray]:
    # Damped Newton step on the free coordinates, clamped ones stay put.
    free = np.flatnonzero(~clamped)
    direction = np.zeros_like(grad)
    if free.size == 0:
        return direction
    band = np.zeros((2, free.size))
    band[0] = diagonal[free] + damping
    # Free neighbours are coupled by the segment between them.
    band[1, :-1] = np.where(np.diff(free) == 1, sub[free[:-1]], 0.0)
    try:
        direction[free] = -solveh_banded(band, grad[free], lower=True)
    except (LinAlgError, ValueError):
        return None
    if not clamped.any():
        # The energy is invariant under constant shifts.
        direction -= direction.mean()
    return direction


def kkt_violations(
    x: np.ndarray,
    grad: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    tolerance: float,
) -> List[int]:
    """Coordinates violating the box-constrained optimality conditions.

    A coordinate is fine when its partial derivative is at most
    ``10·tolerance`` in magnitude, or when it sits (within ``tolerance``)
    on a bound that blocks the descent direction.
    """
    small = np.abs(grad) <= 10.0 * tolerance
    at_lower = (x - lower <= tolerance) & (grad >= 0)
    at_upper = (upper - x <= tolerance) & (grad <= 0)
    pinned = lower == upper
    return [int(i) for i in np.flatnonzero(~(small | at_lower | at_upper | pinned))]


def _accept(
    objective: float,
    trial: float,
    slope: float,
    armijo: float,
    moved: np.ndarray,
    trial_grad: np.ndarray,
) -> bool:
    if slope < 0 and trial <= objective + armijo * slope:
        return True
    # Near the optimum the decrease drowns in rounding, fall back to the
    # sign of the directional derivative at the trial point.
    noise = _ROUNDING_ULPS * np.spacing(max(abs(objective), 1.0))
    return abs(trial - objective) <= noise and float(np.dot(trial_grad, moved)) <= 0


def qp_oracle(
    problem: TubeProblem,
    penalty: PenaltySpec,
    tolerance: Optional[float] = None,
    settings: OracleSettings = DEFAULT_ORACLE_SETTINGS,
    observer: Optional[Observer] = None,
) -> TautStringResult:
    """Minimize the energy of one penalty by projected Newton descent.

    Every grid value is a variable boxed to ``[w − h/2, w + h/2]``,
    fixed ends are boxed to their value. Iterates start at the clamped
    tube midline. Coordinates on a bound with the gradient pushing outwards
    are clamped, the others take a damped Newton step on the tridiagonal
    Hessian. The step is projected onto the box and backtracked from
    ``settings.initial_step`` until the Armijo condition holds. When the
    Newton step fails, a projected gradient step is backtracked instead.

    Iteration stops when the sup-norm of the projected gradient is at most
    ``tolerance`` and the projected Newton step moves no coordinate by more
    than ``tolerance``. The second condition matters for penalties with
    vanishing curvature, such as ``power(4)`` on flat pieces, where a small
    gradient is far from a small error.

    Args:
        problem: Tube problem with at most ``settings.max_grid`` points.
        penalty: Strictly convex penalty.
        tolerance: Projected-gradient tolerance,
            :attr:`Tolerances.oracle` by default.
        settings: Line search and size limits.
        observer: Called with ``(iteration, objective)``
            after every accepted step.
    Returns:
        The minimizer, its knots and its energy for ``penalty``.
    Raises:
        :class:`~tautrenewal.api.error.UnsupportedError`: Grid too large.
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Penalty not strictly convex or non-positive tolerance.
        :class:`~tautrenewal.api.error.ConvergenceError`:
            Iteration cap reached or line search stalled.
    """
    tolerance = DEFAULT_TOLERANCES.oracle if tolerance is None else tolerance
    _require_positive("oracle tolerance", tolerance)
    if not penalty.strictly_convex:
        raise InvalidArgumentError(
            ArgumentErrorCodes.NotStrictlyConvex,
            f"penalty {penalty} is not strictly convex",
        )
    size = len(problem.path)
    if size > settings.max_grid:
        raise UnsupportedError(
            f"oracle accepts at most {settings.max_grid} grid points, got {size}"
        )

    lower, upper = problem.bounds()
    pinned = lower == upper
    scale = 1.0 + float(max(np.max(np.abs(lower)), np.max(np.abs(upper))))
    step_tolerance = max(tolerance, _ROUNDING_ULPS * float(np.spacing(scale)) * size)
    objective_fn = _Objective(problem.path.gaps(), penalty)
    x = np.clip(problem.path.values, lower, upper)
    grad = objective_fn.gradient(x)
    objective = objective_fn.value(x)

    iteration = 0
    while True:
        norm = float(np.max(np.abs(_projected_gradient(x, grad, lower, upper))))
        diagonal, sub = objective_fn.hessian(x)
        direction: Optional[np.ndarray] = np.zeros_like(x)
        if norm > 0:
            clamped = pinned | ((x <= lower) & (grad > 0)) | ((x >= upper) & (grad < 0))
            damping = norm + _DAMPING_FLOOR * float(np.max(diagonal))
            direction = _newton_direction(grad, diagonal, sub, clamped, damping)
        reach = (
            float(np.max(np.abs(np.clip(x + direction, lower, upper) - x)))
            if direction is not None
            else np.inf
        )
        if norm <= tolerance and reach <= step_tolerance:
            break
        if iteration >= settings.max_iterations:
            raise ConvergenceError(
                "oracle reached its iteration cap",
                {"iterations": iteration, "objective": objective, "pgNorm": norm},
            )
        accepted = False
        if direction is not None:
            x_new, grad_new, objective_new, accepted = _line_search(
                objective_fn, x, grad, objective, direction, lower, upper, settings
            )
        if not accepted:
            fallback = -grad / (float(np.max(diagonal)) + norm)
            x_new, grad_new, objective_new, accepted = _line_search(
                objective_fn, x, grad, objective, fallback, lower, upper, settings
            )
        if not accepted:
            if norm <= 10.0 * tolerance:
                logger.warning(
                    "oracle line search stalled at pg norm %.3g, accepting", norm
                )
                break
            raise ConvergenceError(
                "oracle line search stalled",
                {"iterations": iteration, "objective": objective, "pgNorm": norm},
            )
        x, grad, objective = x_new, grad_new, objective_new
        iteration += 1
        if observer is not None:
            observer(iteration, objective)

    violations = kkt_violations(x, grad, lower, upper, tolerance)
    if violations:
        logger.warning("oracle KKT check failed at %d coordinates", len(violations))
    logger.debug(
        "oracle %s on %d points: %d iterations, pg norm %.3g",
        penalty,
        size,
        iteration,
        norm,
    )
    string = problem.path.with_values(x)
    return TautStringResult(problem, string, None, {penalty: objective})


def _line_search(
    objective_fn: _Objective,
    x: np.ndarray,
    grad: np.ndarray,
    objective: float,
    direction: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    settings: OracleSettings,
) -> Tuple[np.ndarray, np.ndarray, float, bool]:
    step = settings.initial_step
    while step >= settings.min_step:
        x_new = np.clip(x + step * direction, lower, upper)
        moved = x_new - x
        if not np.any(moved):
            break
        objective_new = objective_fn.value(x_new)
        grad_new = objective_fn.gradient(x_new)
        slope = float(np.dot(grad, moved))
        if _accept(objective, objective_new, slope, settings.armijo, moved, grad_new):
            return x_new, grad_new, objective_new, True
        step *= settings.shrink
    return x, grad, objective, False
