import unittest
from typing import Sequence

import numpy as np

from tautrenewal.api.pathkit import PiecewiseLinearPath


class BaseTest(unittest.TestCase):
    @staticmethod
    def make_path(times: Sequence[float], values: Sequence[float]):
        """Make path from literal grid points"""
        return PiecewiseLinearPath(times, values)

    @staticmethod
    def tent_path():
        """0 → 1.5 with slope 1, then back to 0 with slope −1"""
        return PiecewiseLinearPath([0.0, 1.5, 3.0], [0.0, 1.5, 0.0])

    @staticmethod
    def sawtooth_path():
        """0 → 0.4 → 0 → 0.4 → 0 on a quarter grid"""
        return PiecewiseLinearPath(
            [0.0, 0.25, 0.5, 0.75, 1.0], [0.0, 0.4, 0.0, 0.4, 0.0]
        )

    @staticmethod
    def trending_path(size: int = 17):
        """Rising path with wiggles, strictly positive slope after tautening"""
        t = np.linspace(0.0, 1.0, size)
        return PiecewiseLinearPath(t, 3.0 * t + 0.3 * np.sin(9.0 * t))

    def assert_close(self, expected: float, actual: float, tolerance: float = 1e-12):
        """Assert absolute difference is within tolerance"""
        self.assertLessEqual(
            abs(expected - actual),
            tolerance,
            f"expected {expected!r}, got {actual!r} (tolerance {tolerance!r})",
        )

    def assert_within_se(self, expected: float, actual: float, se: float, k=3.0):
        """Assert estimate lies within k standard errors"""
        self.assertLessEqual(
            abs(expected - actual),
            k * se,
            f"expected {expected!r}, got {actual!r} ± {k}·{se!r}",
        )
