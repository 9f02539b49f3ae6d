import numpy as np
import pytest

from tautrenewal.api import (
    QUADRATIC,
    ArgumentErrorCodes,
    BoundaryCondition,
    ConvergenceError,
    InvalidArgumentError,
    OracleSettings,
    PenaltySpec,
    TubeProblem,
    UnsupportedError,
    flat_free_string,
    kkt_violations,
    qp_oracle,
    solve,
    sup_distance,
)
from tautrenewal.cli import random_instance
from tests import BaseTest


def _random_problem(seed: int, size: int = 16) -> TubeProblem:
    rng = np.random.default_rng(seed)
    times = np.concatenate(([0.0], np.cumsum(rng.uniform(0.5, 1.5, size - 1) / size)))
    values = np.concatenate(([0.0], np.cumsum(rng.normal(0.0, 0.25, size - 1))))
    path = BaseTest.make_path(times, values)
    return TubeProblem(path, 0.3, BoundaryCondition.fixed(0.0, values[-1]))


class OracleTest(BaseTest):
    def test_starts_at_optimum(self):
        # GIVEN: flat path, the clamped midline is already optimal
        path = self.make_path([0.0, 0.5, 1.0], [0.0, 0.0, 0.0])
        problem = TubeProblem(path, 1.0, BoundaryCondition.fixed(0.0, 0.0))
        calls = []
        # WHEN
        result = qp_oracle(problem, QUADRATIC, observer=lambda *a: calls.append(a))
        # THEN: no iteration is needed
        self.assertEqual(calls, [])
        np.testing.assert_array_equal(result.string.values, [0.0, 0.0, 0.0])
        self.assertEqual(result.energy(QUADRATIC), 0.0)

    def test_matches_sweep_on_random_instance(self):
        problem = _random_problem(5)
        oracle = qp_oracle(problem, QUADRATIC)
        taut = solve(problem)
        self.assertLessEqual(sup_distance(oracle.string, taut.string), 1e-6)
        self.assert_close(taut.energy(QUADRATIC), oracle.energy(QUADRATIC), 1e-8)

    def test_power_four_matches_sweep(self):
        # GIVEN: a Brownian instance whose string has nearly flat pieces
        problem = _random_problem(11, size=32)
        # WHEN
        oracle = qp_oracle(problem, PenaltySpec.power(4), tolerance=1e-8)
        # THEN: the quartic minimizer is the taut string
        taut = solve(problem)
        self.assertLessEqual(sup_distance(oracle.string, taut.string), 1e-6)

    @pytest.mark.slow
    def test_power_four_on_random_instances(self):
        for index in range(20):
            problem = random_instance(23, index, 64)
            oracle = qp_oracle(problem, PenaltySpec.power(4), tolerance=1e-8)
            taut = solve(problem)
            if flat_free_string(taut):
                # Any constant inside the tube is optimal.
                level = float(np.mean(oracle.string.values))
                np.testing.assert_allclose(oracle.string.values, level, atol=1e-6)
                continue
            self.assertLessEqual(sup_distance(oracle.string, taut.string), 1e-6, index)

    def test_free_ends(self):
        path = self.make_path([0.0, 0.5, 1.0], [0.0, 1.0, 2.0])
        result = qp_oracle(TubeProblem(path, 1.0), QUADRATIC)
        np.testing.assert_allclose(result.string.values, [0.5, 1.0, 1.5], atol=1e-8)

    def test_objective_never_increases(self):
        objectives = []
        qp_oracle(
            _random_problem(8),
            PenaltySpec.sqrt1p(),
            observer=lambda _, value: objectives.append(value),
        )
        self.assertGreater(len(objectives), 0)
        for before, after in zip(objectives, objectives[1:]):
            self.assertLessEqual(after, before + 1e-12)

    def test_grid_too_large(self):
        problem = _random_problem(1, size=40)
        with self.assertRaises(UnsupportedError):
            qp_oracle(problem, QUADRATIC, settings=OracleSettings(max_grid=32))

    def test_non_positive_tolerance(self):
        with self.assertRaises(InvalidArgumentError) as ctx:
            qp_oracle(_random_problem(1), QUADRATIC, tolerance=0.0)
        self.assertEqual(ctx.exception.code, ArgumentErrorCodes.NonPositive)

    def test_iteration_cap(self):
        settings = OracleSettings(max_iterations=1)
        with self.assertRaises(ConvergenceError) as ctx:
            qp_oracle(_random_problem(2), PenaltySpec.power(4), settings=settings)
        self.assertEqual(ctx.exception.diagnostics["iterations"], 1)


class KktTest(BaseTest):
    def setUp(self) -> None:
        self.lower = np.zeros(3)
        self.upper = np.ones(3)
        self.x = np.array([0.0, 0.5, 1.0])

    def test_blocked_descent_is_optimal(self):
        grad = np.array([1.0, 0.0, -1.0])
        self.assertEqual(kkt_violations(self.x, grad, self.lower, self.upper, 1e-9), [])

    def test_free_descent_is_violation(self):
        grad = np.array([-1.0, 0.5, 1.0])
        violations = kkt_violations(self.x, grad, self.lower, self.upper, 1e-9)
        self.assertEqual(violations, [0, 1, 2])

    def test_pinned_coordinates_are_skipped(self):
        lower = np.array([0.0, 0.0, 1.0])
        grad = np.array([0.0, 0.0, 5.0])
        self.assertEqual(kkt_violations(self.x, grad, lower, self.upper, 1e-9), [])
