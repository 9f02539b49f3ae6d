"""Use this section of API to build, sample and measure paths.

A path is a continuous piecewise-linear function given by its values on a
strictly increasing time grid. Energies are computed exactly for such paths.
"""
from .api import (
    PiecewiseLinearPath,
    brownian_values,
    energy,
    generate_brownian,
    read_path_csv,
    sup_distance,
    uniform_grid,
    write_path_csv,
)
from .enums import PenaltyKind
from .penalty import QUADRATIC, SLOPE_CLAMP, PenaltySpec
