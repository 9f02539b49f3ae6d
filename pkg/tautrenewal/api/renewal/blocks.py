import logging
from typing import Dict, Iterable, Sequence

from ..config import DEFAULT_TOLERANCES
from ..error import ArgumentErrorCodes, InvalidArgumentError, _require_tolerance
from ..extrema import (
    CrossingSkeleton,
    HExtremaDecomposition,
    decompose,
    free_knot_interpolant,
)
from ..internal import JsonObjectView
from ..pathkit import (
    QUADRATIC,
    PenaltySpec,
    PiecewiseLinearPath,
    energy,
    sup_distance,
)
from ..tautstring import BoundaryCondition, TautStringResult, TubeProblem, solve
from .enums import VerificationStatus

logger = logging.getLogger(__name__)


def _block_path(
    path: PiecewiseLinearPath, decomposition: HExtremaDecomposition, index: int
) -> PiecewiseLinearPath:
    if not 1 <= index < decomposition.count:
        raise InvalidArgumentError(
            ArgumentErrorCodes.IndexOutOfRange,
            f"block {index} needs t̄_{index} and t̄_{index + 1}, "
            f"but only {decomposition.count} h-extrema are realized",
        )
    t_bar = decomposition.t_bar
    return path.restrict(t_bar[index], t_bar[index + 1])


def _pinned_values(block: PiecewiseLinearPath, index: int, width: float):
    # Left: w(t̄_i) − (−1)^i·h/2. Right: w(t̄_{i+1}) + (−1)^i·h/2.
    offset = 0.5 * width if index % 2 == 0 else -0.5 * width
    return float(block.values[0]) - offset, float(block.values[-1]) + offset


def block_minimizer(
    path: PiecewiseLinearPath,
    decomposition: HExtremaDecomposition,
    index: int,
    penalties: Iterable[PenaltySpec] = (QUADRATIC,),
) -> TautStringResult:
    """Taut string on ``[t̄_i, t̄_{i+1}]`` pinned to the tube boundary.

    The block starts on the far side of the tube from the h-extremum
    ``t̄_i`` (above a minimum, below a maximum) and ends on the far side
    from ``t̄_{i+1}``. Block endpoints are inserted into the grid.

    Args:
        path: Driving path.
        decomposition: h-extrema decomposition of ``path``.
        index: Block index ``i ≥ 1``.
        penalties: Energies to evaluate.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            ``t̄_i`` or ``t̄_{i+1}`` isn't realized.
    """
    block = _block_path(path, decomposition, index)
    left, right = _pinned_values(block, index, decomposition.width)
    boundary = BoundaryCondition.fixed(left, right)
    return solve(TubeProblem(block, decomposition.width, boundary), penalties)


class BlockBoundaryReport(JsonObjectView):
    """Distance of a free-boundary block string from the pinned values."""

    @property
    def index(self) -> int:
        return self._get("index")

    @property
    def left_gap(self) -> float:
        return self._get("leftGap")

    @property
    def right_gap(self) -> float:
        return self._get("rightGap")

    @property
    def passed(self) -> bool:
        return self._get("passed")


def block_boundary_check(
    path: PiecewiseLinearPath,
    decomposition: HExtremaDecomposition,
    index: int,
    tolerance: float = DEFAULT_TOLERANCES.agreement,
) -> BlockBoundaryReport:
    """Solve block ``i`` with both ends free and compare its end values
    with the values :func:`block_minimizer` imposes.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Block not realized or negative tolerance.
    """
    _require_tolerance(tolerance)
    block = _block_path(path, decomposition, index)
    left, right = _pinned_values(block, index, decomposition.width)
    free = solve(TubeProblem(block, decomposition.width), penalties=())
    start, end = free.boundary_values
    left_gap, right_gap = abs(start - left), abs(end - right)
    return BlockBoundaryReport(
        {
            "index": index,
            "leftGap": left_gap,
            "rightGap": right_gap,
            "tolerance": tolerance,
            "passed": max(left_gap, right_gap) <= tolerance,
        }
    )


class FreeKnotReport(JsonObjectView):
    """Block minimizer energies against the free-knot interpolant on the block.

    Energies are keyed by penalty name.
    """

    @property
    def index(self) -> int:
        return self._get("index")

    @property
    def block_energy(self) -> Dict[str, float]:
        return self._get("blockEnergy")

    @property
    def interpolant_energy(self) -> Dict[str, float]:
        return self._get("interpolantEnergy")

    @property
    def passed(self) -> bool:
        """``E(ψ_i) ≤ E(interpolant)`` up to the slack, for every penalty."""
        return self._get("passed")


def free_knot_domination(
    path: PiecewiseLinearPath,
    decomposition: HExtremaDecomposition,
    skeleton: CrossingSkeleton,
    index: int,
    penalties: Sequence[PenaltySpec] = (QUADRATIC,),
    tolerance: float = DEFAULT_TOLERANCES.energy,
) -> FreeKnotReport:
    """Compare the energy of block ``i`` with the free-knot interpolant.

    The interpolant stays in the tube, so restricted to ``[t̄_i, t̄_{i+1}]``
    it competes with the block minimizer, which solves the same block
    with free ends. A block energy above the interpolant's by more than
    ``tolerance·(1 + |E|)`` fails the check.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Block not realized, skeleton of another path or width,
            or negative tolerance.
    """
    _require_tolerance(tolerance)
    if skeleton.width != decomposition.width:
        raise InvalidArgumentError(
            ArgumentErrorCodes.MismatchedSkeleton,
            f"skeleton width {skeleton.width!r} differs from "
            f"decomposition width {decomposition.width!r}",
        )
    minimizer = block_minimizer(path, decomposition, index, penalties)
    t_bar = decomposition.t_bar
    interpolant = free_knot_interpolant(path, skeleton).restrict(
        t_bar[index], t_bar[index + 1]
    )
    block_energy = {p.name: minimizer.energy(p) for p in penalties}
    interpolant_energy = {p.name: energy(interpolant, p) for p in penalties}
    passed = all(
        block_energy[name] <= bound + tolerance * (1.0 + abs(bound))
        for name, bound in interpolant_energy.items()
    )
    if not passed:
        logger.warning("block %d: free-knot interpolant beats the block string", index)
    return FreeKnotReport(
        {
            "index": index,
            "blockEnergy": block_energy,
            "interpolantEnergy": interpolant_energy,
            "tolerance": tolerance,
            "passed": passed,
        }
    )


class TheoremReport(JsonObjectView):
    """Comparison of the global string with the block minimizers.

    Energies and remainders are keyed by penalty name.
    """

    @property
    def status(self) -> VerificationStatus:
        return VerificationStatus(self._get("status"))

    @property
    def passed(self) -> bool:
        return self.status is VerificationStatus.Passed

    @property
    def count(self) -> int:
        """N(T)."""
        return self._get("count")

    @property
    def block_distances(self) -> Dict[int, float]:
        """Sup-distance between η_T and ψ_i for ``2 ≤ i ≤ N−2``."""
        return {int(k): v for k, v in self._get("blockDistances").items()}

    @property
    def max_block_distance(self) -> float:
        return self._get("maxBlockDistance")

    @property
    def knot_residuals(self) -> Dict[int, float]:
        """``|η_T(t̄_i) − (w(t̄_i) ∓ h/2)|`` for ``2 ≤ i ≤ N−1``."""
        return {int(k): v for k, v in self._get("knotResiduals").items()}

    @property
    def max_knot_residual(self) -> float:
        return self._get("maxKnotResidual")

    @property
    def total_energy(self) -> Dict[str, float]:
        return self._get("totalEnergy")

    @property
    def remainder(self) -> Dict[str, float]:
        """R(T): total energy minus the sum of double-block energies."""
        return self._get("remainder")

    @property
    def remainder_from_ends(self) -> Dict[str, float]:
        """R(T) computed from the end pieces of η_T."""
        return self._get("remainderFromEnds")

    @property
    def tolerance(self) -> float:
        return self._get("tolerance")


def verify_theorem_main(
    path: PiecewiseLinearPath,
    width: float,
    penalties: Sequence[PenaltySpec] = (QUADRATIC,),
    tolerance: float = DEFAULT_TOLERANCES.agreement,
) -> TheoremReport:
    """Check that the global string restricts to the block minimizers.

    Solves the problem on ``[0, T]`` with ``φ(0) = w(0)`` and ``φ(T) = w(T)``,
    then the blocks ``2 ≤ i ≤ N−1``. The check passes when the global
    string is within ``tolerance`` of every middle block minimizer
    ``2 ≤ i ≤ N−2``. Paths with N(T) < 4 are not applicable.

    The remainder ``R(T) = E(η_T) − Σ_{i=1}^{⌊N/2⌋−1} Y_i`` with
    ``Y_i = E(ψ_{2i}) + E(ψ_{2i+1})`` is reported twice: from the
    definition, and from the end pieces of η_T on ``[0, t̄_2]`` and
    ``[t̄_{N−1}, T]``, less ``E(ψ_{N−1})`` for even N.
    """
    _require_tolerance(tolerance)
    decomposition = decompose(path, width)
    count = decomposition.count
    if count < 4:
        logger.info("theorem check not applicable: N(T) = %d", count)
        return TheoremReport(
            {
                "status": VerificationStatus.NotApplicable.value,
                "count": count,
                "tolerance": tolerance,
            }
        )

    values = path.values
    problem = TubeProblem(
        path, width, BoundaryCondition.fixed(float(values[0]), float(values[-1]))
    )
    eta = solve(problem, penalties)
    string = eta.string
    t_bar = decomposition.t_bar

    distances: Dict[str, float] = {}
    residuals: Dict[str, float] = {}
    block_energy: Dict[int, Dict[PenaltySpec, float]] = {}
    for i in range(2, count):
        psi = block_minimizer(path, decomposition, i, penalties)
        block_energy[i] = {penalty: psi.energy(penalty) for penalty in penalties}
        if i <= count - 2:
            restricted = string.restrict(t_bar[i], t_bar[i + 1])
            distances[str(i)] = sup_distance(restricted, psi.string)
        offset = 0.5 * width if i % 2 == 0 else -0.5 * width
        residuals[str(i)] = abs(
            string.value_at(t_bar[i]) - (path.value_at(t_bar[i]) - offset)
        )

    pairs = count // 2
    total: Dict[str, float] = {}
    remainder: Dict[str, float] = {}
    from_ends: Dict[str, float] = {}
    head = string.restrict(path.start, t_bar[2])
    tail = string.restrict(t_bar[count - 1], path.end)
    for penalty in penalties:
        full = eta.energy(penalty)
        summed = sum(block_energy[j][penalty] for j in range(2, 2 * pairs))
        ends = energy(head, penalty) + energy(tail, penalty)
        if count % 2 == 0:
            ends -= block_energy[count - 1][penalty]
        total[penalty.name] = full
        remainder[penalty.name] = full - summed
        from_ends[penalty.name] = ends

    max_distance = max(distances.values())
    max_residual = max(residuals.values())
    status = (
        VerificationStatus.Passed
        if max_distance <= tolerance
        else VerificationStatus.Failed
    )
    logger.info(
        "theorem check: N(T)=%d, max block distance %.3g, max knot residual %.3g",
        count,
        max_distance,
        max_residual,
    )
    return TheoremReport(
        {
            "status": status.value,
            "count": count,
            "blockDistances": distances,
            "maxBlockDistance": max_distance,
            "knotResiduals": residuals,
            "maxKnotResidual": max_residual,
            "totalEnergy": total,
            "remainder": remainder,
            "remainderFromEnds": from_ends,
            "tolerance": tolerance,
        }
    )
