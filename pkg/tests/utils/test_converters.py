import unittest

from tautrenewal.api import QUADRATIC, Law, PenaltySpec
from tautrenewal.utils import convert_law, convert_penalties, convert_penalty


class ConvertPenaltyTest(unittest.TestCase):
    def test_kinds(self):
        self.assertEqual(convert_penalty("quadratic"), QUADRATIC)
        self.assertEqual(convert_penalty("Power:4"), PenaltySpec.power(4))
        self.assertEqual(convert_penalty(" sqrt1p "), PenaltySpec.sqrt1p())

    def test_passes_penalty_through(self):
        penalty = PenaltySpec.power(3)
        self.assertIs(convert_penalty(penalty), penalty)

    def test_invalid(self):
        for val in ("cubic", "power", "power:1", "power:a", "quadratic:2", 4):
            with self.assertRaises(ValueError):
                convert_penalty(val)

    def test_dedup_keeps_order(self):
        penalties = convert_penalties(["power:4", "quadratic", "power:4.0"])
        self.assertEqual(penalties, [PenaltySpec.power(4), QUADRATIC])


class ConvertLawTest(unittest.TestCase):
    def test_kinds(self):
        self.assertEqual(convert_law("exponential:1"), Law.exponential(1))
        self.assertEqual(convert_law("GAUSSIAN:5,1"), Law.gaussian(5, 1))
        self.assertEqual(convert_law("gamma:2,0.5"), Law.gamma(2, 0.5))
        self.assertEqual(convert_law("uniform:0,2"), Law.uniform(0, 2))

    def test_invalid(self):
        for val in ("poisson:1", "gaussian:5", "uniform:2,0", "exponential:x", None):
            with self.assertRaises(ValueError):
                convert_law(val)
