"""
Counter-based random streams.

Every generator is derived from ``(master seed, stream, replicate, page)``
through :class:`numpy.random.SeedSequence` spawn keys, so replicate ``r``
of seed ``s`` is reproducible regardless of execution order or worker count.
"""
from enum import IntEnum

import numpy as np

_SEED_MASK = (1 << 64) - 1


class Stream(IntEnum):
    # Independent families of draws within one campaign.
    PATH = 0
    RENEWAL = 1
    CALIBRATION = 2
    CLT = 3
    ANSCOMBE = 4
    INSTANCES = 5


def generator(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for a master seed and an optional spawn key.

    An empty key gives the plain ``SeedSequence(seed)`` stream.
    """
    sequence = np.random.SeedSequence(
        entropy=int(seed) & _SEED_MASK, spawn_key=tuple(int(k) for k in key)
    )
    return np.random.Generator(np.random.PCG64(sequence))

