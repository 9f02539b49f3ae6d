import numpy as np
import pytest

from tautrenewal.api import (
    QUADRATIC,
    ArgumentErrorCodes,
    InvalidArgumentError,
    PenaltySpec,
    VerificationStatus,
    block_boundary_check,
    block_minimizer,
    crossing_skeleton,
    decompose,
    free_knot_domination,
    generate_brownian,
    verify_theorem_main,
)
from tests import BaseTest


class BlockMinimizerTest(BaseTest):
    def setUp(self) -> None:
        self.path = self.tent_path()
        self.decomposition = decompose(self.path, 1.0)

    def test_first_block_of_tent(self):
        # GIVEN: t̄_1 = 0 is a minimum, t̄_2 = 1.5 a maximum
        result = block_minimizer(self.path, self.decomposition, 1)
        # THEN: the chord from w + h/2 at 0 to w − h/2 at 1.5
        np.testing.assert_allclose(result.string.times, [0.0, 1.5])
        np.testing.assert_allclose(result.string.values, [0.5, 1.0])
        self.assert_close(1.0 / 6.0, result.energy(QUADRATIC))

    def test_unrealized_block(self):
        for index in (0, 2):
            with self.assertRaises(InvalidArgumentError) as ctx:
                block_minimizer(self.path, self.decomposition, index)
            self.assertEqual(ctx.exception.code, ArgumentErrorCodes.IndexOutOfRange)

    def test_free_block_meets_pinned_values(self):
        report = block_boundary_check(self.path, self.decomposition, 1)
        self.assertTrue(report.passed)
        self.assertEqual(report.index, 1)
        self.assertLessEqual(report.left_gap, 1e-12)
        self.assertLessEqual(report.right_gap, 1e-12)

    def test_boundary_check_negative_tolerance(self):
        with self.assertRaises(InvalidArgumentError) as ctx:
            block_boundary_check(self.path, self.decomposition, 1, -1.0)
        self.assertEqual(ctx.exception.code, ArgumentErrorCodes.NegativeTolerance)


class TheoremTest(BaseTest):
    def test_not_applicable_with_few_extrema(self):
        report = verify_theorem_main(self.tent_path(), 1.0)
        self.assertIs(report.status, VerificationStatus.NotApplicable)
        self.assertFalse(report.passed)
        self.assertEqual(report.count, 2)

    def test_brownian_path(self):
        # GIVEN: a path with a handful of h-extrema
        path = generate_brownian(12.0, 0.002, 21)
        report = verify_theorem_main(path, 1.0, (QUADRATIC, PenaltySpec.sqrt1p()))
        if report.status is VerificationStatus.NotApplicable:
            self.skipTest("path realized fewer than four h-extrema")
        # THEN: the global string restricts to every middle block minimizer
        self.assertTrue(report.passed, report.json())
        self.assertEqual(
            sorted(report.block_distances), list(range(2, report.count - 1))
        )
        self.assertEqual(
            sorted(report.knot_residuals), list(range(2, report.count))
        )

    @pytest.mark.slow
    def test_remainder_from_ends(self):
        penalties = (QUADRATIC, PenaltySpec.power(4))
        checked = 0
        for seed in range(5):
            path = generate_brownian(40.0, 0.001, seed)
            report = verify_theorem_main(path, 1.0, penalties)
            if report.status is VerificationStatus.NotApplicable:
                continue
            checked += 1
            self.assertTrue(report.passed, report.json())
            self.assertLessEqual(report.max_knot_residual, 1e-6)
            for penalty in penalties:
                name = penalty.name
                direct = report.remainder[name]
                ends = report.remainder_from_ends[name]
                scale = 1.0 + abs(report.total_energy[name])
                self.assert_close(direct, ends, 1e-6 * scale)
        self.assertGreater(checked, 0)

    @pytest.mark.slow
    def test_remainder_stays_tight(self):
        # GIVEN: R(T) over 30 seeds at T and 4T
        spreads = []
        for horizon in (100.0, 400.0):
            remainders = []
            for seed in range(30):
                path = generate_brownian(horizon, 2e-3, 900 + seed)
                report = verify_theorem_main(path, 1.0)
                if report.status is not VerificationStatus.NotApplicable:
                    remainders.append(report.remainder["quadratic"])
            upper, lower = np.percentile(remainders, [75, 25])
            spreads.append(upper - lower)
        # THEN: the interquartile range does not grow with T
        ratio = spreads[1] / spreads[0]
        self.assertLess(ratio, 2.0, spreads)
        self.assertGreater(ratio, 0.5, spreads)


class FreeKnotDominationTest(BaseTest):
    penalties = (QUADRATIC, PenaltySpec.power(4), PenaltySpec.sqrt1p())

    def test_brownian_blocks(self):
        # GIVEN: seeded Brownian paths and their h/4 crossing skeletons
        checked = 0
        for seed in range(3):
            path = generate_brownian(20.0, 0.002, 40 + seed)
            decomposition = decompose(path, 1.0)
            skeleton = crossing_skeleton(path, 1.0)
            for index in range(2, decomposition.count - 1):
                # WHEN
                report = free_knot_domination(
                    path, decomposition, skeleton, index, self.penalties
                )
                # THEN: no block string costs more than the interpolant
                self.assertTrue(report.passed, report.json())
                names = {"quadratic", "power_4", "sqrt1p"}
                self.assertEqual(set(report.block_energy), names)
                checked += 1
        self.assertGreater(checked, 0)

    def test_tent_block(self):
        path = self.tent_path()
        report = free_knot_domination(
            path, decompose(path, 1.0), crossing_skeleton(path, 1.0), 1
        )
        self.assertTrue(report.passed)
        self.assertEqual(report.index, 1)
        self.assert_close(1.0 / 6.0, report.block_energy["quadratic"])
        self.assertGreaterEqual(
            report.interpolant_energy["quadratic"], report.block_energy["quadratic"]
        )

    def test_width_mismatch(self):
        path = self.tent_path()
        with self.assertRaises(InvalidArgumentError) as ctx:
            free_knot_domination(
                path, decompose(path, 1.0), crossing_skeleton(path, 0.5), 1
            )
        self.assertEqual(ctx.exception.code, ArgumentErrorCodes.MismatchedSkeleton)
