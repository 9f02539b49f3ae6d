"""Use this section of API to solve tube-constrained minimization problems.

The taut string is the path inside a tube of width ``h`` around a driving
path that minimizes ``∫ c(φ')`` simultaneously for every convex penalty ``c``.
"""
from .api import (
    BoundaryCondition,
    InvarianceReport,
    Knot,
    TautStringResult,
    TubeProblem,
    endpoint_forcing_gap,
    flat_free_string,
    knot_points,
    solve,
    verify_penalty_invariance,
)
from .enums import BoundaryKind, Side
