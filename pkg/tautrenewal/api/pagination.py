"""
Paged Brownian paths.

A long Brownian path is produced page by page. Each page is a fixed time span
with its own random stream keyed by ``(seed, stream, replicate, page number)``,
so page ``k`` of replicate ``r`` is the same no matter how many pages were
requested before it or by which worker.

Consumers that don't know in advance how long a path they need
(renewal sampling waits for a number of h-extrema) extend the path
with :func:`chain_pages` until they are satisfied.
"""
from typing import Iterable, Iterator, List, Optional

import numpy as np

from .error import _require_positive
from .internal import Stream, generator
from .pathkit import PiecewiseLinearPath, brownian_values, uniform_grid


class PathPage:
    """Page of a paged Brownian path.
       Should not be constructed manually except for the first page,
       use :meth:`first` and :meth:`next_page`.

    Args:
        seed: Master seed.
        replicate: Replicate index.
        span: Time span covered by every page.
        step: Grid step.
        number: Page number, zero-based.
        start: Time of the first grid point.
        origin: Path value at ``start``.
        stream: Random stream family.
    """

    def __init__(
        self,
        seed: int,
        replicate: int,
        span: float,
        step: float,
        *,
        number: int = 0,
        start: float = 0.0,
        origin: float = 0.0,
        stream: Stream = Stream.RENEWAL,
    ):
        _require_positive("page span", span)
        _require_positive("step", step)
        self._seed = seed
        self._replicate = replicate
        self._span = span
        self._step = min(step, span)
        self._number = number
        self._stream = stream
        rng = generator(seed, int(stream), replicate, number)
        self._times = uniform_grid(span, self._step, start)
        self._values = brownian_values(self._times, rng, origin)

    @classmethod
    def first(
        cls,
        seed: int,
        replicate: int,
        span: float,
        step: float,
        stream: Stream = Stream.RENEWAL,
    ) -> "PathPage":
        """First page of a replicate, starting at ``(0, 0)``."""
        return cls(seed, replicate, span, step, stream=stream)

    @property
    def number(self) -> int:
        """Page number, zero-based."""
        return self._number

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def values(self) -> np.ndarray:
        return self._values

    def path(self) -> PiecewiseLinearPath:
        """The page alone as a path."""
        return PiecewiseLinearPath(self._times, self._values)

    def next_page(self) -> "PathPage":
        """Get next page.

        It starts where this page ends, so consecutive pages share
        one grid point. The path never ends, so there's always a next page.
        """
        return PathPage(
            self._seed,
            self._replicate,
            self._span,
            self._step,
            number=self._number + 1,
            start=float(self._times[-1]),
            origin=float(self._values[-1]),
            stream=self._stream,
        )


def chain_pages(
    start_page: PathPage, limit: Optional[int] = None
) -> Iterator[PathPage]:
    """Get chain of consecutive pages, ``limit`` pages at most."""
    page: Optional[PathPage] = start_page
    count = 0
    while page is not None and (limit is None or count < limit):
        yield page
        count += 1
        page = page.next_page()


def join_pages(pages: Iterable[PathPage]) -> PiecewiseLinearPath:
    """Concatenate consecutive pages into one path.

    The shared grid point of neighbouring pages is kept once.
    """
    times: List[np.ndarray] = []
    values: List[np.ndarray] = []
    for page in pages:
        skip = 1 if times else 0
        times.append(page.times[skip:])
        values.append(page.values[skip:])
    return PiecewiseLinearPath(np.concatenate(times), np.concatenate(values))
