import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_TOLERANCES, Tolerances
from ..error import (
    ArgumentErrorCodes,
    InvalidArgumentError,
    _require_positive,
    _require_tolerance,
)
from ..extrema import decompose
from ..internal import JsonObjectView, write_rows
from ..internal.csvio import PathLike
from ..pathkit import (
    QUADRATIC,
    PenaltySpec,
    PiecewiseLinearPath,
    energy,
    sup_distance,
)
from .enums import BoundaryKind, Side
from .sweep import taut_vertices

logger = logging.getLogger(__name__)

Knot = Tuple[int, Side]

# Relative slack admitted when checking a fixed end against the tube.
_FEASIBILITY_SLACK = 1e-12


@dataclass(frozen=True)
class BoundaryCondition:
    """End conditions of a tube problem.

    Args:
        left: String value at the first grid point, :data:`None` if free.
        right: String value at the last grid point, :data:`None` if free.
    Usage:
        >>> BoundaryCondition.fixed(0.0, 2.0)
        >>> BoundaryCondition.free()
        >>> # Pinned start, free end.
        >>> BoundaryCondition(left=0.0)
    """

    left: Optional[float] = None
    right: Optional[float] = None

    @classmethod
    def fixed(cls, left: float, right: float) -> "BoundaryCondition":
        return cls(float(left), float(right))

    @classmethod
    def free(cls) -> "BoundaryCondition":
        return cls()

    @property
    def left_kind(self) -> BoundaryKind:
        return BoundaryKind.Free if self.left is None else BoundaryKind.Fixed

    @property
    def right_kind(self) -> BoundaryKind:
        return BoundaryKind.Free if self.right is None else BoundaryKind.Fixed


def _admit(name: str, value: Optional[float], level: float, half: float):
    if value is None:
        return None
    slack = _FEASIBILITY_SLACK * (1.0 + abs(level) + half)
    if not abs(value - level) <= half + slack:
        raise InvalidArgumentError(
            ArgumentErrorCodes.InfeasibleBoundary,
            f"{name} value {value!r} is outside the tube "
            f"[{level - half!r}, {level + half!r}]",
        )
    return min(max(float(value), level - half), level + half)


class TubeProblem:
    """Minimization of ``∫ c(φ')`` over paths within ``h/2`` of ``w``.

    Args:
        path: Driving path ``w``.
        width: Tube width ``h``.
        boundary: End conditions, both ends free by default.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Non-positive width or a fixed end outside the tube.
    Note:
        Fixed end values within rounding distance of the tube boundary
        are snapped onto it.
    """

    def __init__(
        self,
        path: PiecewiseLinearPath,
        width: float,
        boundary: Optional[BoundaryCondition] = None,
    ):
        _require_positive("width", width)
        boundary = boundary or BoundaryCondition()
        half = 0.5 * width
        values = path.values
        self._path = path
        self._width = float(width)
        self._boundary = BoundaryCondition(
            _admit("left", boundary.left, float(values[0]), half),
            _admit("right", boundary.right, float(values[-1]), half),
        )

    @property
    def path(self) -> PiecewiseLinearPath:
        return self._path

    @property
    def width(self) -> float:
        return self._width

    @property
    def boundary(self) -> BoundaryCondition:
        return self._boundary

    @property
    def lower(self) -> np.ndarray:
        """Lower tube boundary ``w − h/2``."""
        return self._path.values - 0.5 * self._width

    @property
    def upper(self) -> np.ndarray:
        """Upper tube boundary ``w + h/2``."""
        return self._path.values + 0.5 * self._width

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        """Box constraints per grid point, fixed ends collapsed to their value."""
        lower, upper = self.lower, self.upper
        for index, value in ((0, self._boundary.left), (-1, self._boundary.right)):
            if value is not None:
                lower[index] = upper[index] = value
        return lower, upper


class TautStringResult:
    """Minimizer of a tube problem.

    The string shares the grid of the problem's path.
    Knots are detected with the default contact tolerance
    when none are given.
    Energies are stored for the penalties requested at solve time,
    :meth:`energy` computes any other one on demand.
    """

    def __init__(
        self,
        problem: TubeProblem,
        string: PiecewiseLinearPath,
        knots: Optional[List[Knot]],
        energies: Dict[PenaltySpec, float],
    ):
        self._problem = problem
        self._string = string
        if knots is None:
            knots = _contacts(
                string.values,
                problem.lower,
                problem.upper,
                DEFAULT_TOLERANCES.knot_tolerance(problem.path.values),
            )
        self._knots = knots
        self._energies = energies

    @property
    def problem(self) -> TubeProblem:
        return self._problem

    @property
    def string(self) -> PiecewiseLinearPath:
        """The minimizer φ."""
        return self._string

    @property
    def knots(self) -> List[Knot]:
        """Grid indices where the string touches the tube, by index."""
        return list(self._knots)

    @property
    def energies(self) -> Dict[PenaltySpec, float]:
        return dict(self._energies)

    @property
    def boundary_values(self) -> Tuple[float, float]:
        values = self._string.values
        return float(values[0]), float(values[-1])

    def energy(self, penalty: PenaltySpec) -> float:
        if penalty not in self._energies:
            self._energies[penalty] = energy(self._string, penalty)
        return self._energies[penalty]

    def write_csv(self, file: PathLike) -> None:
        """Write the result as CSV ``t,w,string,lower,upper,knot_side``."""
        sides = {index: side.value for index, side in self._knots}
        lower, upper = self._problem.lower, self._problem.upper
        path = self._problem.path
        rows = (
            (t, w, s, lo, up, sides.get(i, "-"))
            for i, (t, w, s, lo, up) in enumerate(
                zip(
                    path.times.tolist(),
                    path.values.tolist(),
                    self._string.values.tolist(),
                    lower.tolist(),
                    upper.tolist(),
                )
            )
        )
        write_rows(file, ("t", "w", "string", "lower", "upper", "knot_side"), rows)


def _contacts(
    string: np.ndarray, lower: np.ndarray, upper: np.ndarray, tolerance: float
) -> List[Knot]:
    to_upper = np.abs(string - upper)
    to_lower = np.abs(string - lower)
    knots: List[Knot] = []
    for i in np.flatnonzero((to_upper <= tolerance) | (to_lower <= tolerance)):
        side = Side.Upper if to_upper[i] <= to_lower[i] else Side.Lower
        knots.append((int(i), side))
    return knots


def solve(
    problem: TubeProblem,
    penalties: Iterable[PenaltySpec] = (QUADRATIC,),
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> TautStringResult:
    """Solve a tube problem.

    The taut string minimizes ``Σ c(slope)·gap`` for every convex ``c``
    at once, so no penalty is needed to find it. ``penalties`` only
    selects the energies stored in the result.
    Runs in time linear in the grid size.

    Args:
        problem: Tube problem.
        penalties: Energies to evaluate.
        tolerances: ``knot`` sets the contact tolerance of the knot list.
    Returns:
        The string, its knots and energies.
    """
    path = problem.path
    lower, upper = problem.lower, problem.upper
    boundary = problem.boundary
    vertex_times, vertex_levels = taut_vertices(
        path.times.tolist(),
        lower.tolist(),
        upper.tolist(),
        boundary.left,
        boundary.right,
    )
    values = np.clip(np.interp(path.times, vertex_times, vertex_levels), lower, upper)
    if boundary.left is not None:
        values[0] = boundary.left
    if boundary.right is not None:
        values[-1] = boundary.right
    string = path.with_values(values)
    knots = _contacts(values, lower, upper, tolerances.knot_tolerance(path.values))
    energies = {penalty: energy(string, penalty) for penalty in penalties}
    logger.debug(
        "taut string on %d points: %d vertices, %d knots",
        len(path),
        len(vertex_times),
        len(knots),
    )
    return TautStringResult(problem, string, knots, energies)


def knot_points(
    result: TautStringResult, tolerance: Optional[float] = None
) -> List[Knot]:
    """Grid indices where the string is within ``tolerance`` of the tube.

    Endpoints are included. Each index is labeled with the nearer boundary.

    Args:
        result: Solver output.
        tolerance: Absolute contact tolerance.
            Defaults to ``1e-9·(1 + max|w|)``.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Negative tolerance.
    """
    problem = result.problem
    if tolerance is None:
        tolerance = DEFAULT_TOLERANCES.knot_tolerance(problem.path.values)
    _require_tolerance(tolerance)
    return _contacts(result.string.values, problem.lower, problem.upper, tolerance)


class InvarianceReport(JsonObjectView):
    """Comparison of minimizers computed for several penalties."""

    @property
    def penalties(self) -> List[str]:
        return self._get("penalties")

    @property
    def max_distance(self) -> float:
        """Maximum pairwise sup-distance between all minimizers.

        For a flat report, the largest distance of an oracle minimizer
        from a constant.
        """
        return self._get("maxDistance")

    @property
    def distance_to_string(self) -> Dict[str, float]:
        """Sup-distance of each oracle minimizer from the taut string."""
        return self._get("distanceToString")

    @property
    def flat(self) -> bool:
        """Whether every constant inside the tube was optimal."""
        return self._get("flat")

    @property
    def tolerance(self) -> float:
        return self._get("tolerance")

    @property
    def passed(self) -> bool:
        return self._get("passed")


def flat_free_string(result: TautStringResult) -> bool:
    """Whether the minimizer is not unique.

    With both ends free and a constant taut string, every constant
    between the highest lower and the lowest upper tube point is optimal.
    """
    boundary = result.problem.boundary
    if boundary.left is not None or boundary.right is not None:
        return False
    return not np.ptp(result.string.values) > 0


def _level_of(string: PiecewiseLinearPath) -> PiecewiseLinearPath:
    return string.with_values(np.full(len(string), float(np.mean(string.values))))


def verify_penalty_invariance(
    problem: TubeProblem,
    penalties: Sequence[PenaltySpec],
    tolerance: float = DEFAULT_TOLERANCES.agreement,
) -> InvarianceReport:
    """Check that every strictly convex penalty has the same minimizer.

    The problem is solved once by the sweep, then once per penalty
    by the projected Newton oracle. All minimizers are compared pairwise.
    When both ends are free and the taut string is constant, every
    constant inside the tube is a minimizer; each one is then compared
    with the constant at its own mean level instead.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            A penalty is not strictly convex, or negative tolerance.
        :class:`~tautrenewal.api.error.UnsupportedError`:
            Grid too large for the oracle.
    """
    from ..oracle import qp_oracle

    _require_tolerance(tolerance)
    for penalty in penalties:
        if not penalty.strictly_convex:
            raise InvalidArgumentError(
                ArgumentErrorCodes.NotStrictlyConvex,
                f"penalty {penalty} is not strictly convex",
            )
    taut = solve(problem, penalties)
    flat = flat_free_string(taut)
    minimizers = [taut.string]
    to_string: Dict[str, float] = {}
    for penalty in penalties:
        candidate = qp_oracle(problem, penalty).string
        reference = _level_of(candidate) if flat else taut.string
        to_string[penalty.name] = sup_distance(candidate, reference)
        minimizers.append(candidate)
    if flat:
        distance = max(to_string.values(), default=0.0)
    else:
        distance = max(
            (sup_distance(a, b) for a, b in combinations(minimizers, 2)),
            default=0.0,
        )
    logger.info(
        "penalty invariance on %d points: max distance %.3g",
        len(problem.path),
        distance,
    )
    return InvarianceReport(
        {
            "penalties": [penalty.name for penalty in penalties],
            "maxDistance": distance,
            "distanceToString": to_string,
            "flat": flat,
            "tolerance": tolerance,
            "passed": distance <= tolerance,
        }
    )


def endpoint_forcing_gap(path: PiecewiseLinearPath, width: float) -> Optional[float]:
    """Distance of the free-boundary string's start from ``w(0) + h/2``.

    A path whose first h-minimum sits at its start forces the free
    string to start on the upper tube boundary.

    Returns:
        The gap, or :data:`None` when the first h-minimum isn't at
        the start or the first h-rise isn't realized.
    """
    decomposition = decompose(path, width)
    if len(decomposition.t_bar) < 2:
        return None
    if decomposition.t_bar[1] > path.start:
        return None
    result = solve(TubeProblem(path, width), penalties=())
    start = result.boundary_values[0]
    return abs(start - (float(path.values[0]) + 0.5 * width))
