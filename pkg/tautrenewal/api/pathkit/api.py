import math
from typing import Iterable, Optional, Union

import numpy as np

from ..error import (
    ArgumentErrorCodes,
    InvalidArgumentError,
    _reading_csv,
    _require_positive,
)
from ..internal import generator, read_rows, write_rows
from ..internal.csvio import PathLike
from .penalty import PenaltySpec

ArrayLike = Union[np.ndarray, Iterable[float]]

# Relative slack used when the last uniform grid point lands on the horizon.
_GRID_SLACK = 1e-9


class PiecewiseLinearPath:
    """A sampled continuous path on a strictly increasing time grid.

    Values between grid points are obtained by linear interpolation.
    Instances are immutable: both arrays are read-only.

    Args:
        times: Strictly increasing time grid, at least two points.
        values: Path levels, same length as ``times``.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Fewer than two points, length mismatch, non-finite entries
            or a non-increasing grid.
    """

    __slots__ = ("_times", "_values")

    def __init__(self, times: ArrayLike, values: ArrayLike):
        t = np.array(times, dtype=float)
        v = np.array(values, dtype=float)
        if t.ndim != 1 or v.ndim != 1 or t.shape != v.shape:
            raise InvalidArgumentError(
                ArgumentErrorCodes.InvalidPath,
                "times and values must be flat arrays of the same length",
            )
        if t.size < 2:
            raise InvalidArgumentError(
                ArgumentErrorCodes.InvalidPath, "path needs at least two points"
            )
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise InvalidArgumentError(
                ArgumentErrorCodes.InvalidPath, "path contains non-finite entries"
            )
        if not np.all(np.diff(t) > 0):
            raise InvalidArgumentError(
                ArgumentErrorCodes.InvalidPath, "times must be strictly increasing"
            )
        t.flags.writeable = False
        v.flags.writeable = False
        self._times = t
        self._values = v

    def __len__(self) -> int:
        return int(self._times.size)

    def __repr__(self) -> str:
        return (
            f"PiecewiseLinearPath(n={len(self)}, "
            f"t=[{self.start:g}, {self.end:g}])"
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseLinearPath):
            return NotImplemented
        return np.array_equal(self._times, other._times) and np.array_equal(
            self._values, other._values
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def times(self) -> np.ndarray:
        """Time grid (read-only)."""
        return self._times

    @property
    def values(self) -> np.ndarray:
        """Path levels at grid points (read-only)."""
        return self._values

    @property
    def start(self) -> float:
        return float(self._times[0])

    @property
    def end(self) -> float:
        return float(self._times[-1])

    @property
    def horizon(self) -> float:
        """Length of the time interval covered by the path."""
        return self.end - self.start

    def gaps(self) -> np.ndarray:
        return np.diff(self._times)

    def slopes(self) -> np.ndarray:
        return np.diff(self._values) / np.diff(self._times)

    def value_at(self, t: Union[float, np.ndarray]):
        """Linear interpolation at ``t`` (clamped to the end values outside)."""
        out = np.interp(t, self._times, self._values)
        return float(out) if np.ndim(out) == 0 else out

    def same_grid(self, other: "PiecewiseLinearPath") -> bool:
        return np.array_equal(self._times, other._times)

    def restrict(self, a: float, b: float) -> "PiecewiseLinearPath":
        """Path restricted to ``[a, b]``.

        The endpoints are inserted as grid points by interpolation,
        so the result is exactly nested in the original path.

        Raises:
            :class:`~tautrenewal.api.error.InvalidArgumentError`:
                ``[a, b]`` is empty or not inside the path's time range.
        """
        if not (self.start <= a < b <= self.end):
            raise InvalidArgumentError(
                ArgumentErrorCodes.IndexOutOfRange,
                f"interval [{a!r}, {b!r}] is not inside "
                f"[{self.start!r}, {self.end!r}]",
            )
        inner = (self._times > a) & (self._times < b)
        times = np.concatenate(([a], self._times[inner], [b]))
        values = np.concatenate(
            ([self.value_at(a)], self._values[inner], [self.value_at(b)])
        )
        return PiecewiseLinearPath(times, values)

    def with_values(self, values: ArrayLike) -> "PiecewiseLinearPath":
        """Path on the same grid with other values."""
        return PiecewiseLinearPath(self._times, values)

    def shifted(self, offset: float) -> "PiecewiseLinearPath":
        return self.with_values(self._values + offset)

    def negated(self) -> "PiecewiseLinearPath":
        return self.with_values(-self._values)

    def brownian_rescale(self, factor: float) -> "PiecewiseLinearPath":
        """The path ``λ·w(t/λ²)``, which is again Brownian if ``w`` is."""
        _require_positive("scaling factor", factor)
        return PiecewiseLinearPath(self._times * factor**2, self._values * factor)


def uniform_grid(horizon: float, step: float, start: float = 0.0) -> np.ndarray:
    """Grid ``{start, start+dt, ..., start+T}`` whose last point is exactly
    ``start+T``, with a shorter last gap when ``dt`` doesn't divide ``T``."""
    steps = int(math.floor(horizon / step + _GRID_SLACK))
    grid = start + step * np.arange(steps + 1, dtype=float)
    end = start + horizon
    if end - grid[-1] > _GRID_SLACK * step:
        grid = np.append(grid, end)
    else:
        grid[-1] = end
    return grid


def brownian_values(
    times: np.ndarray, rng: np.random.Generator, origin: float = 0.0
) -> np.ndarray:
    """Brownian levels on a grid, starting from ``origin``.

    Increments are centered Gaussians with variance equal to the grid gap,
    drawn with numpy's ziggurat ``standard_normal``.
    """
    gaps = np.diff(times)
    increments = rng.standard_normal(gaps.size) * np.sqrt(gaps)
    values = np.empty(times.size, dtype=float)
    values[0] = origin
    np.cumsum(increments, out=values[1:])
    values[1:] += origin
    return values


def generate_brownian(horizon: float, step: float, seed: int) -> PiecewiseLinearPath:
    """Sample a standard Brownian path on a uniform grid.

    Args:
        horizon: Time horizon T.
        step: Grid step dt, at most T.
        seed: 64-bit master seed. Identical ``(T, dt, seed)``
            reproduce the identical path bit for bit.
    Returns:
        Path on ``{0, dt, 2dt, ..., T}`` with value 0 at time 0.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Non-positive T or dt, or dt > T.
    """
    _require_positive("horizon", horizon)
    _require_positive("step", step)
    if step > horizon:
        raise InvalidArgumentError(
            ArgumentErrorCodes.StepExceedsHorizon,
            f"step {step!r} exceeds horizon {horizon!r}",
        )
    times = uniform_grid(horizon, step)
    return PiecewiseLinearPath(times, brownian_values(times, generator(seed)))


def energy(path: PiecewiseLinearPath, penalty: PenaltySpec) -> float:
    """Energy ``∫ c(φ'(u)) du`` of a piecewise-linear path.

    Computed exactly as ``Σ c(slope_i)·gap_i`` over grid segments.
    """
    gaps = path.gaps()
    return float(np.dot(penalty(np.diff(path.values) / gaps), gaps))


def sup_distance(a: PiecewiseLinearPath, b: PiecewiseLinearPath) -> float:
    """Sup-distance of two paths sharing a grid.

    The maximum over grid points is the exact supremum,
    both paths being linear between common grid points.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Paths don't share a time grid.
    """
    if not a.same_grid(b):
        raise InvalidArgumentError(
            ArgumentErrorCodes.GridMismatch, "paths must share the same time grid"
        )
    return float(np.max(np.abs(a.values - b.values)))


def write_path_csv(path: PiecewiseLinearPath, file: PathLike) -> None:
    """Write a path as CSV with header ``t,w``."""
    write_rows(file, ("t", "w"), zip(path.times.tolist(), path.values.tolist()))


def read_path_csv(file: PathLike, column: Optional[str] = None) -> PiecewiseLinearPath:
    """Read a path from CSV.

    Args:
        file: CSV file with a ``t`` column.
        column: Value column, ``w`` by default.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Unreadable file or malformed contents.
    """
    column = column or "w"
    with _reading_csv(file):
        header, rows = read_rows(file)
        if "t" not in header or column not in header:
            raise InvalidArgumentError(
                ArgumentErrorCodes.MissingField,
                f"path CSV needs columns 't' and '{column}', got {header}",
            )
        ti, vi = header.index("t"), header.index(column)
        times = [float(r[ti]) for r in rows]
        values = [float(r[vi]) for r in rows]
    return PiecewiseLinearPath(times, values)
