import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import DEFAULT_TOLERANCES
from ..error import (
    ArgumentErrorCodes,
    InvalidArgumentError,
    TautError,
    _require_positive,
)
from ..internal import write_rows
from ..internal.csvio import PathLike
from ..pathkit import PiecewiseLinearPath
from .enums import ExtremumKind

logger = logging.getLogger(__name__)


class HExtremaDecomposition:
    """Alternating h-rise/h-fall times of a path and its h-extrema.

    ``t[2n+1]`` is the first time after ``t[2n]`` the path has risen by ``h``
    above its running minimum, ``t[2n+2]`` the first time after ``t[2n+1]``
    it has fallen by ``h`` below its running maximum. ``t_bar[n]`` is the
    last instant in ``[t[n-1], t[n]]`` where that running extremum was
    attained. Index 0 of both lists holds the path start.

    Only completed pairs are stored: ``t_bar[n]`` is known once ``t[n]``
    is realized, so :attr:`count` equals ``len(t_bar) − 1``.
    """

    def __init__(self, t: Sequence[float], t_bar: Sequence[float], width: float):
        self._t = list(t)
        self._t_bar = list(t_bar)
        self._width = width

    def __repr__(self) -> str:
        return f"HExtremaDecomposition(h={self._width!r}, count={self.count})"

    @property
    def t(self) -> List[float]:
        """Crossing completion times ``t_0 = start, t_1, t_2, …``."""
        return list(self._t)

    @property
    def t_bar(self) -> List[float]:
        """h-extremum locations ``t̄_0 = start, t̄_1, t̄_2, …``."""
        return list(self._t_bar)

    @property
    def width(self) -> float:
        return self._width

    @property
    def count(self) -> int:
        """Number of realized h-extrema, N(T)."""
        return len(self._t_bar) - 1

    @staticmethod
    def kind(index: int) -> ExtremumKind:
        """Kind of the h-extremum ``t̄_index``, ``index ≥ 1``."""
        if index < 1:
            raise InvalidArgumentError(
                ArgumentErrorCodes.IndexOutOfRange,
                f"h-extrema are numbered from 1, got {index}",
            )
        return ExtremumKind.Minimum if index % 2 else ExtremumKind.Maximum

    @property
    def labels(self) -> List[ExtremumKind]:
        """Kinds of ``t̄_1 … t̄_N``."""
        return [self.kind(i) for i in range(1, self.count + 1)]

    def write_csv(self, file: PathLike) -> None:
        """Write the decomposition as CSV ``n,t_n,tbar_n``."""
        rows = ((n, t, tb) for n, (t, tb) in enumerate(zip(self._t, self._t_bar)))
        write_rows(file, ("n", "t_n", "tbar_n"), rows)


def decompose(path: PiecewiseLinearPath, width: float) -> HExtremaDecomposition:
    """Compute the h-extrema decomposition of a path.

    Crossing instants are interpolated inside grid cells, which is exact
    for piecewise-linear paths. Running extrema only change at grid points,
    and ties keep the last attaining point.

    Args:
        path: Path to decompose.
        width: Height h.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`: h ≤ 0.
    """
    _require_positive("width", width)
    times = path.times.tolist()
    values = path.values.tolist()
    t = [times[0]]
    t_bar = [times[0]]
    # +1 while waiting for an h-rise, −1 while waiting for an h-fall.
    sign = 1.0
    prev_t, prev_v = times[0], values[0]
    extreme_t, extreme_v = prev_t, prev_v
    for k in range(1, len(times)):
        tk, vk = times[k], values[k]
        while True:
            if sign * (vk - extreme_v) >= width:
                level = extreme_v + sign * width
                crossing = prev_t + (level - prev_v) / (vk - prev_v) * (tk - prev_t)
                t.append(crossing)
                t_bar.append(extreme_t)
                sign = -sign
                prev_t, prev_v = crossing, level
                extreme_t, extreme_v = crossing, level
                continue
            if sign * (vk - extreme_v) <= 0:
                extreme_t, extreme_v = tk, vk
            break
        prev_t, prev_v = tk, vk
    logger.debug("h-extrema decomposition: h=%g, N=%d", width, len(t_bar) - 1)
    return HExtremaDecomposition(t, t_bar, float(width))


class CrossingSkeleton:
    """Successive ``h/4`` displacement times of a path.

    ``sigma[n]`` is the first time after ``sigma[n-1]`` the path is ``h/4``
    away from its value at ``sigma[n-1]``, ``delta[n-1]`` is the direction
    of that displacement. ``n_k[k-1]`` is the first block index ``i``
    whose four displacements ``4i−3 … 4i`` all point in direction
    ``(−1)^(k+1)``, searching from ``n_{k−1}`` on.
    """

    def __init__(
        self,
        sigma: Sequence[float],
        levels: Sequence[float],
        delta: Sequence[int],
        n_k: Sequence[int],
        width: float,
    ):
        self._sigma = list(sigma)
        self._levels = list(levels)
        self._delta = list(delta)
        self._n_k = list(n_k)
        self._width = width

    def __repr__(self) -> str:
        return (
            f"CrossingSkeleton(h={self._width!r}, crossings={len(self._delta)}, "
            f"blocks={len(self._n_k)})"
        )

    @property
    def sigma(self) -> List[float]:
        """Displacement times ``σ_0 = start, σ_1, …``."""
        return list(self._sigma)

    @property
    def levels(self) -> List[float]:
        """Path values at ``σ_n``."""
        return list(self._levels)

    @property
    def delta(self) -> List[int]:
        """Signs ``Δ_1, Δ_2, …`` (list index ``n−1`` holds ``Δ_n``)."""
        return list(self._delta)

    @property
    def n_k(self) -> List[int]:
        """Realized ``n_1, n_2, …``."""
        return list(self._n_k)

    @property
    def width(self) -> float:
        return self._width


def _monotone_runs(delta: Sequence[int]) -> List[int]:
    n_k: List[int] = []
    target = 1
    for i in range(1, len(delta) // 4 + 1):
        if all(d == target for d in delta[4 * i - 4 : 4 * i]):
            n_k.append(i)
            target = -target
    return n_k


def crossing_skeleton(path: PiecewiseLinearPath, width: float) -> CrossingSkeleton:
    """Compute the ``h/4`` crossing skeleton of a path.

    Crossing instants are interpolated inside grid cells. Several
    crossings may fall into one cell. Each new reference level is set to
    the exact crossed level ``w(σ_{n−1}) ± h/4``.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`: h ≤ 0.
    """
    _require_positive("width", width)
    quarter = 0.25 * width
    times = path.times.tolist()
    values = path.values.tolist()
    sigma = [times[0]]
    levels = [values[0]]
    delta: List[int] = []
    prev_t, prev_v = times[0], values[0]
    reference = prev_v
    for k in range(1, len(times)):
        tk, vk = times[k], values[k]
        while abs(vk - reference) >= quarter:
            direction = 1 if vk > reference else -1
            level = reference + direction * quarter
            crossing = prev_t + (level - prev_v) / (vk - prev_v) * (tk - prev_t)
            sigma.append(crossing)
            levels.append(level)
            delta.append(direction)
            prev_t, prev_v = crossing, level
            reference = level
        prev_t, prev_v = tk, vk
    return CrossingSkeleton(sigma, levels, delta, _monotone_runs(delta), float(width))


def _check_skeleton(path: PiecewiseLinearPath, skeleton: CrossingSkeleton) -> None:
    sigma = np.asarray(skeleton.sigma)
    tolerance = DEFAULT_TOLERANCES.knot_tolerance(path.values)
    if (
        sigma[0] != path.start
        or sigma[-1] > path.end
        or not np.allclose(
            path.value_at(sigma), skeleton.levels, rtol=0, atol=tolerance
        )
    ):
        raise InvalidArgumentError(
            ArgumentErrorCodes.MismatchedSkeleton,
            "crossing skeleton was not computed from this path",
        )


def free_knot_interpolant(
    path: PiecewiseLinearPath, skeleton: CrossingSkeleton
) -> PiecewiseLinearPath:
    """Linear interpolation of ``(σ_n, w(σ_n))``, closed by ``(T, w(T))``.

    The interpolant lives on the union of the path grid and the
    crossing times, so that comparisons with ``w`` stay exact.
    It never leaves the tube of width ``h`` around ``w``.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            The skeleton doesn't belong to the path.
        :class:`~tautrenewal.api.error.TautError`:
            The interpolant leaves the tube (internal inconsistency).
    """
    _check_skeleton(path, skeleton)
    knot_t = skeleton.sigma
    knot_v = skeleton.levels
    if path.end > knot_t[-1]:
        knot_t.append(path.end)
        knot_v.append(float(path.values[-1]))
    grid = np.union1d(path.times, knot_t)
    interpolant = PiecewiseLinearPath(grid, np.interp(grid, knot_t, knot_v))
    gap = float(np.max(np.abs(interpolant.values - path.value_at(grid))))
    half = 0.5 * skeleton.width
    if gap > half + DEFAULT_TOLERANCES.knot_tolerance(path.values):
        raise TautError(f"free-knot interpolant leaves the tube: {gap!r} > {half!r}")
    return interpolant


def free_knot_energy_bound(
    skeleton: CrossingSkeleton, exponent: float, upto: Optional[float] = None
) -> float:
    """Power-penalty energy of the free-knot interpolant up to ``σ_m``.

    Equals ``(h/4)^α · Σ (σ_i − σ_{i−1})^(1−α)`` over the crossings
    with ``σ_i ≤ upto`` (all of them by default).
    """
    sigma = np.asarray(skeleton.sigma)
    if upto is not None:
        sigma = sigma[sigma <= upto]
    gaps = np.diff(sigma)
    return float((0.25 * skeleton.width) ** exponent * np.sum(gaps ** (1.0 - exponent)))


def lemma_gap_bound(
    decomposition: HExtremaDecomposition, skeleton: CrossingSkeleton
) -> Optional[Tuple[float, float]]:
    """The pair ``(t̄_2 − t̄_1, σ_{4n_2})``; the first never exceeds the second.

    Returns:
        :data:`None` when ``t̄_2`` or ``n_2`` isn't realized.
    """
    if decomposition.count < 2 or len(skeleton.n_k) < 2:
        return None
    t_bar = decomposition.t_bar
    return t_bar[2] - t_bar[1], skeleton.sigma[4 * skeleton.n_k[1]]


def label_violations(
    decomposition: HExtremaDecomposition, skeleton: CrossingSkeleton
) -> List[int]:
    """Indices k whose run end ``σ_{4n_k}`` lands on the wrong side.

    A run of four rises can't end in ``[t̄_i, t̄_{i+1})`` with even ``i``,
    a run of four falls can't end there with odd ``i``.
    Run ends past the last realized h-extremum aren't classified.
    """
    t_bar = np.asarray(decomposition.t_bar)
    violations = []
    for k, n in enumerate(skeleton.n_k, start=1):
        end = skeleton.sigma[4 * n]
        if end >= t_bar[-1]:
            continue
        i = int(np.searchsorted(t_bar, end, side="right")) - 1
        rising = k % 2 == 1
        if rising == (i % 2 == 0):
            violations.append(k)
    return violations
