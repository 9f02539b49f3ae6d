import numpy as np

from tautrenewal.api import (
    AnscombeConfig,
    ArgumentErrorCodes,
    DegenerateVarianceError,
    InvalidArgumentError,
    Law,
    LawKind,
    PairLaw,
    PairLawKind,
    anscombe_simulate,
)
from tautrenewal.api.renewal import PairMoments, sigma_bar_components, sigma_bar_sq
from tests import BaseTest


class LawTest(BaseTest):
    def test_moments(self):
        self.assertEqual((Law.exponential(2).mean, Law.exponential(2).variance), (2, 4))
        gamma = Law.gamma(2, 0.5)
        self.assertEqual((gamma.mean, gamma.variance), (1.0, 0.5))
        self.assertEqual(Law.uniform(0, 2).mean, 1.0)
        self.assert_close(1.0 / 3.0, Law.uniform(0, 2).variance)
        self.assertEqual(Law.gaussian(5, 1).variance, 1.0)

    def test_positivity(self):
        self.assertTrue(Law.exponential(1).positive)
        self.assertTrue(Law.uniform(0, 1).positive)
        self.assertFalse(Law.uniform(-1, 1).positive)
        self.assertFalse(Law.gaussian(5, 1).positive)

    def test_invalid_parameters(self):
        cases = [
            (LawKind.Exponential, (0.0,)),
            (LawKind.Exponential, (1.0, 2.0)),
            (LawKind.Gaussian, (0.0, -1.0)),
            (LawKind.Gamma, (0.0, 1.0)),
            (LawKind.Uniform, (1.0, 1.0)),
        ]
        for kind, params in cases:
            with self.assertRaises(InvalidArgumentError) as ctx:
                Law(kind, params)
            self.assertEqual(ctx.exception.code, ArgumentErrorCodes.InvalidLaw)

    def test_sample_mean(self):
        rng = np.random.default_rng(9)
        draws = Law.gamma(2, 0.5).sample(rng, 40_000)
        self.assert_within_se(1.0, float(np.mean(draws)), np.sqrt(0.5 / draws.size))

    def test_str(self):
        self.assertEqual(str(Law.gaussian(5, 1)), "gaussian:5,1")


class PairLawTest(BaseTest):
    def test_duration_must_be_positive(self):
        with self.assertRaises(InvalidArgumentError) as ctx:
            PairLaw.independent(Law.exponential(1), Law.gaussian(1, 1))
        self.assertEqual(ctx.exception.code, ArgumentErrorCodes.InvalidLaw)

    def test_reward_law_required(self):
        with self.assertRaises(InvalidArgumentError):
            PairLaw(PairLawKind.Independent, Law.exponential(1))

    def test_correlation_range(self):
        with self.assertRaises(InvalidArgumentError):
            PairLaw.linear_correlated(Law.gaussian(5, 1), Law.exponential(1), 1.5)

    def test_moments(self):
        law = PairLaw.linear_correlated(Law.gaussian(5, 2), Law.exponential(1), 0.5)
        moments = law.moments()
        self.assertEqual((moments.mean_x, moments.mean_tau), (5.0, 1.0))
        self.assert_close(1.0, moments.cov)
        self.assert_close(0.5, moments.rho)

    def test_correlated_sample(self):
        law = PairLaw.linear_correlated(Law.gaussian(5, 2), Law.exponential(1), -0.6)
        x, tau = law.sample(np.random.default_rng(1), 50_000)
        self.assertLessEqual(abs(np.corrcoef(x, tau)[0, 1] + 0.6), 0.02)
        self.assertLessEqual(abs(float(np.mean(x)) - 5.0), 0.05)

    def test_identical_sample(self):
        x, tau = PairLaw.identical(Law.exponential(1)).sample(
            np.random.default_rng(2), 10
        )
        np.testing.assert_array_equal(x, tau)


class SigmaBarTest(BaseTest):
    def test_independent_exponential_gaussian(self):
        # GIVEN: τ ~ Exp(1), X ~ N(5, 1) independent
        moments = PairLaw.independent(Law.gaussian(5, 1), Law.exponential(1)).moments()
        # THEN: σ̄² = 25·1 + 1 − 0
        self.assertEqual(
            sigma_bar_components(moments),
            {"duration": 25.0, "reward": 1.0, "cross": -0.0},
        )
        self.assertEqual(sigma_bar_sq(moments), 26.0)

    def test_identical_cancels(self):
        moments = PairLaw.identical(Law.exponential(1)).moments()
        self.assertEqual(sigma_bar_sq(moments), 0.0)

    def test_rounding_is_snapped_to_zero(self):
        moments = PairMoments(0.1, 0.3, 0.01, 0.09, 0.03)
        self.assertEqual(sigma_bar_sq(moments), 0.0)


class AnscombeSimulationTest(BaseTest):
    def test_config_validation(self):
        law = PairLaw.independent(Law.gaussian(5, 1), Law.exponential(1))
        with self.assertRaises(InvalidArgumentError) as ctx:
            AnscombeConfig(law, 10.0, 1, 0)
        self.assertEqual(ctx.exception.code, ArgumentErrorCodes.TooFewSamples)
        with self.assertRaises(InvalidArgumentError):
            AnscombeConfig(law, 0.0, 10, 0)

    def test_identical_law_is_degenerate(self):
        config = AnscombeConfig(PairLaw.identical(Law.exponential(1)), 50.0, 10, 1)
        with self.assertRaises(DegenerateVarianceError) as ctx:
            anscombe_simulate(config)
        self.assertEqual(ctx.exception.value, 0.0)

    def test_standardized_sums(self):
        # GIVEN: 400 replicates at t = 200
        law = PairLaw.independent(Law.gaussian(5, 1), Law.exponential(1))
        report = anscombe_simulate(AnscombeConfig(law, 200.0, 400, 12))
        # THEN: statistics are roughly standard normal
        self.assertEqual(len(report.statistics), 400)
        self.assertEqual(report.sigma_bar_sq, 26.0)
        self.assertEqual(report.rho, 0.0)
        self.assertLessEqual(abs(report.mean), 0.3)
        self.assertTrue(0.7 <= report.variance <= 1.4)
        self.assertGreater(report.p_value, 1e-4)

    def test_workers_do_not_change_result(self):
        law = PairLaw.linear_correlated(Law.gaussian(5, 1), Law.gamma(2, 0.5), 0.3)
        config = AnscombeConfig(law, 30.0, 20, 4)
        self.assertEqual(
            anscombe_simulate(config).statistics,
            anscombe_simulate(config, workers=2).statistics,
        )
