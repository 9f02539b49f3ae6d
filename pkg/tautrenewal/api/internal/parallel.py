"""
Replicate fan-out.

Results come back in task order whatever the worker count, and each task
seeds its own stream, so parallel runs reproduce serial ones bit for bit.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def fan_out(fn: Callable[[T], R], tasks: Sequence[T], workers: int = 1) -> List[R]:
    """Apply ``fn`` to every task, in a process pool when ``workers > 1``.

    ``fn`` must be a module-level function, tasks and results picklable.
    """
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunksize))
