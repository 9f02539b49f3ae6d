"""Use this section of API to cross-check the taut string solver.

The oracle minimizes the energy of a single strictly convex penalty
by projected gradient descent. It's slow and meant for small instances only.
"""
from .api import kkt_violations, qp_oracle
