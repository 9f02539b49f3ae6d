"""
Linear-time taut string sweep.

The sweep keeps a funnel rooted at an apex: the greatest convex minorant of
the upper tube points seen since the apex and the least concave majorant of
the lower ones. When a new point falls outside the funnel, the funnel's
first vertex on the opposite chain becomes a knot and the new apex.

A free left end is represented by an apex at t = −∞: rays from it are
horizontal, so they compare by height. A free right end is the mirror image,
a horizontal ray towards t = +∞ processed after the last grid point.
"""
from collections import deque
from typing import Deque, List, Optional, Sequence, Tuple

Point = Tuple[float, float]
_Vertex = Optional[Point]  # None is the apex at t = −∞.


def _slope(a: _Vertex, b: _Vertex) -> float:
    if a is None or b is None:
        return 0.0
    return (b[1] - a[1]) / (b[0] - a[0])


def _ray_not_above(apex: _Vertex, p: Point, q: _Vertex) -> bool:
    if apex is None:
        return q is not None and p[1] <= q[1]
    return _slope(apex, p) <= _slope(apex, q)


def _ray_not_below(apex: _Vertex, p: Point, q: _Vertex) -> bool:
    if apex is None:
        return q is not None and p[1] >= q[1]
    return _slope(apex, p) >= _slope(apex, q)


class _Funnel:
    def __init__(self, start: float, left: Optional[float]):
        self._start = start
        self.times: List[float] = []
        self.levels: List[float] = []
        self.apex: _Vertex = None
        if left is not None:
            self.apex = (start, left)
            self.times.append(start)
            self.levels.append(left)
        self.up: Deque[_Vertex] = deque([self.apex])
        self.lo: Deque[_Vertex] = deque([self.apex])

    def _advance(self, knot: _Vertex) -> None:
        assert knot is not None
        if self.apex is None and knot[0] > self._start:
            self.times.append(self._start)
            self.levels.append(knot[1])
        self.times.append(knot[0])
        self.levels.append(knot[1])
        self.apex = knot

    def _advance_lower(self, p: Point) -> bool:
        lo = self.lo
        moved = False
        while len(lo) >= 2 and _ray_not_above(lo[0], p, lo[1]):
            lo.popleft()
            self._advance(lo[0])
            moved = True
        return moved

    def _advance_upper(self, p: Point) -> bool:
        up = self.up
        moved = False
        while len(up) >= 2 and _ray_not_below(up[0], p, up[1]):
            up.popleft()
            self._advance(up[0])
            moved = True
        return moved

    def push_upper(self, p: Point) -> None:
        if self._advance_lower(p):
            self.up = deque([self.apex, p])
            return
        up = self.up
        while len(up) >= 2 and _slope(up[-2], up[-1]) >= _slope(up[-1], p):
            up.pop()
        up.append(p)

    def push_lower(self, p: Point) -> None:
        if self._advance_upper(p):
            self.lo = deque([self.apex, p])
            return
        lo = self.lo
        while len(lo) >= 2 and _slope(lo[-2], lo[-1]) <= _slope(lo[-1], p):
            lo.pop()
        lo.append(p)

    def close_fixed(self, end: Point) -> None:
        if not self._advance_lower(end):
            self._advance_upper(end)
        self._advance(end)

    def close_free(self, end: float) -> None:
        if self.apex is None:
            # No contact at all: every constant between the highest lower
            # point and the lowest upper point is optimal.
            level = 0.5 * (self.lo[1][1] + self.up[1][1])  # type: ignore[index]
            self.times = [self._start, end]
            self.levels = [level, level]
            return
        lo, up = self.lo, self.up
        moved = False
        while len(lo) >= 2 and _slope(lo[0], lo[1]) >= 0.0:
            lo.popleft()
            self._advance(lo[0])
            moved = True
        if not moved:
            while len(up) >= 2 and _slope(up[0], up[1]) <= 0.0:
                up.popleft()
                self._advance(up[0])
        if end > self.apex[0]:  # type: ignore[index]
            self.times.append(end)
            self.levels.append(self.apex[1])  # type: ignore[index]


def taut_vertices(
    times: Sequence[float],
    lower: Sequence[float],
    upper: Sequence[float],
    left: Optional[float],
    right: Optional[float],
) -> Tuple[List[float], List[float]]:
    """Vertices of the taut string through ``[lower, upper]``.

    Args:
        times: Strictly increasing grid, at least two points.
        lower: Lower tube boundary at grid points.
        upper: Upper tube boundary at grid points.
        left: Fixed value at the first grid point, :data:`None` if free.
        right: Fixed value at the last grid point, :data:`None` if free.
    Returns:
        Strictly increasing vertex times and the string levels there.
        Every interior vertex is a grid point where the string touches
        the tube.
    """
    n = len(times)
    funnel = _Funnel(times[0], left)
    first = 0 if left is None else 1
    last = n if right is None else n - 1
    for i in range(first, last):
        funnel.push_upper((times[i], upper[i]))
        funnel.push_lower((times[i], lower[i]))
    if right is None:
        funnel.close_free(times[-1])
    else:
        funnel.close_fixed((times[-1], right))
    return funnel.times, funnel.levels
