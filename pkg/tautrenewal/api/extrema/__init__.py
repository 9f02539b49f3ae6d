"""Use this section of API to locate h-extrema and h/4 crossings of a path.

The h-extrema split a path into excursions that are independent
for Brownian motion. The crossing skeleton gives a coarse piecewise-linear
approximation used to bound energies.
"""
from .api import (
    CrossingSkeleton,
    HExtremaDecomposition,
    crossing_skeleton,
    decompose,
    free_knot_energy_bound,
    free_knot_interpolant,
    label_violations,
    lemma_gap_bound,
)
from .enums import ExtremumKind
