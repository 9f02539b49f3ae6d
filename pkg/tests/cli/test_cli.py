import json
import os
import tempfile
from unittest.mock import patch

import numpy as np

from tautrenewal.__version__ import __version__
from tautrenewal.api import (
    QUADRATIC,
    CltReport,
    EstimatorReport,
    MomentStabilityReport,
    RenewalSample,
    write_path_csv,
)
from tautrenewal.api.internal import read_rows
from tautrenewal.cli import (
    CLT_VARIANCE_BAND,
    EXIT_FAILED,
    EXIT_PASSED,
    EXIT_USAGE,
    CampaignConfig,
    UsageError,
    build_parser,
    clt_checks,
    estimate_checks,
    main,
    random_instance,
)
from tests import BaseTest


class CliTest(BaseTest):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.out = self._tmp.name

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def _read_json(self, name):
        with open(os.path.join(self.out, name), encoding="utf-8") as fh:
            return json.load(fh)

    def _write_config(self, document):
        target = os.path.join(self.out, "config.json")
        with open(target, "w", encoding="utf-8") as fh:
            json.dump(document, fh)
        return target

    def test_gen(self):
        # WHEN
        code = main(["gen", "--seed", "7", "-T", "1", "--dt", "0.5", "-o", self.out])
        # THEN: three grid points starting at zero, with a sidecar
        self.assertEqual(code, EXIT_PASSED)
        header, rows = read_rows(os.path.join(self.out, "path.csv"))
        self.assertEqual(header, ["t", "w"])
        self.assertEqual([row[0] for row in rows], ["0", "0.5", "1"])
        self.assertEqual(rows[0][1], "0")
        meta = self._read_json("path.csv.meta.json")
        self.assertEqual(meta["command"], "gen")
        self.assertEqual(meta["seed"], 7)
        self.assertEqual(meta["version"], __version__)
        self.assertEqual(meta["config"]["dt"], 0.5)
        self.assertEqual(len(meta["warnings"]), 1)

    def test_gen_is_reproducible(self):
        argv = ["gen", "--seed", "3", "-T", "2", "--dt", "0.01"]
        main(argv + ["-o", os.path.join(self.out, "a")])
        main(argv + ["-o", os.path.join(self.out, "b")])
        with open(os.path.join(self.out, "a", "path.csv"), "rb") as a, open(
            os.path.join(self.out, "b", "path.csv"), "rb"
        ) as b:
            self.assertEqual(a.read(), b.read())

    def test_gen_requires_seed(self):
        self.assertEqual(main(["gen", "-o", self.out]), EXIT_USAGE)

    def test_solve_sawtooth(self):
        source = os.path.join(self.out, "saw.csv")
        write_path_csv(self.sawtooth_path(), source)
        code = main(["solve", "--input", source, "-w", "1", "-o", self.out])
        self.assertEqual(code, EXIT_PASSED)
        header, rows = read_rows(os.path.join(self.out, "string.csv"))
        self.assertEqual(header[2], "string")
        self.assertEqual([float(row[2]) for row in rows], [0.0] * 5)
        self.assertTrue(os.path.exists(os.path.join(self.out, "string.csv.meta.json")))

    def test_solve_requires_input(self):
        self.assertEqual(main(["solve", "-w", "1", "-o", self.out]), EXIT_USAGE)

    def test_solve_missing_input_file(self):
        missing = os.path.join(self.out, "absent.csv")
        code = main(["solve", "--input", missing, "-w", "1", "-o", self.out])
        self.assertEqual(code, EXIT_USAGE)

    def test_solve_non_numeric_cell(self):
        source = os.path.join(self.out, "bad.csv")
        with open(source, "w", encoding="utf-8") as fh:
            fh.write("t,w\n0,0\n0.5,abc\n1,0\n")
        code = main(["solve", "--input", source, "-w", "1", "-o", self.out])
        self.assertEqual(code, EXIT_USAGE)

    def test_decompose_tent(self):
        source = os.path.join(self.out, "tent.csv")
        write_path_csv(self.tent_path(), source)
        code = main(["decompose", "--input", source, "-w", "1", "-o", self.out])
        self.assertEqual(code, EXIT_PASSED)
        header, rows = read_rows(os.path.join(self.out, "decomposition.csv"))
        self.assertEqual(header, ["n", "t_n", "tbar_n"])
        self.assertEqual([row[2] for row in rows], ["0", "0", "1.5"])

    def test_unknown_config_field(self):
        config = self._write_config({"width": 1.0, "colour": "blue"})
        code = main(["gen", "--config", config, "--seed", "1", "-o", self.out])
        self.assertEqual(code, EXIT_USAGE)

    def test_config_file_and_flag_override(self):
        config = self._write_config({"seed": 5, "horizon": 1.0, "dt": 0.25})
        code = main(["gen", "--config", config, "--dt", "0.5", "-o", self.out])
        self.assertEqual(code, EXIT_PASSED)
        _, rows = read_rows(os.path.join(self.out, "path.csv"))
        self.assertEqual(len(rows), 3)

    def test_negative_width(self):
        code = main(["gen", "--seed", "1", "-w", "-1", "-o", self.out])
        self.assertEqual(code, EXIT_USAGE)

    def test_bad_penalty(self):
        argv = ["verify-invariance", "--seed", "1", "--penalty", "cubic"]
        self.assertEqual(main(argv + ["-o", self.out]), EXIT_USAGE)

    def test_anscombe_identical_law_is_degenerate(self):
        argv = ["anscombe", "--seed", "1", "--pair-law", "identical", "-o", self.out]
        self.assertEqual(main(argv + ["--replicates", "10"]), EXIT_FAILED)

    def test_anscombe_bad_law(self):
        argv = ["anscombe", "--seed", "1", "--tau-law", "poisson:1", "-o", self.out]
        self.assertEqual(main(argv), EXIT_USAGE)

    def test_anscombe(self):
        argv = ["anscombe", "--seed", "2", "-T", "100", "--replicates", "200"]
        code = main(argv + ["-o", self.out])
        document = self._read_json("anscombe.json")
        self.assertEqual(code, EXIT_PASSED if document["passed"] else EXIT_FAILED)
        self.assertEqual(document["sigmaBarSq"], 26.0)
        _, rows = read_rows(os.path.join(self.out, "anscombe.csv"))
        self.assertEqual(len(rows), 200)

    def test_oracle_check(self):
        argv = ["oracle-check", "--seed", "4", "--instances", "5", "--max-grid", "12"]
        self.assertEqual(main(argv + ["-o", self.out]), EXIT_PASSED)
        document = self._read_json("oracle.json")
        self.assertTrue(document["passed"])
        self.assertEqual(document["failures"], [])

    def test_verify_invariance(self):
        argv = ["verify-invariance", "--seed", "6", "--instances", "4"]
        argv += ["--max-grid", "10", "--penalty", "quadratic", "--penalty", "sqrt1p"]
        argv += ["--tolerance", "1e-5"]
        self.assertEqual(main(argv + ["-o", self.out]), EXIT_PASSED)
        document = self._read_json("invariance.json")
        self.assertEqual(document["penalties"], ["quadratic", "sqrt1p"])

    def test_estimate_c(self):
        argv = ["estimate-c", "--seed", "1", "-w", "0.5", "--dt", "1e-3"]
        code = main(argv + ["--n-blocks", "4", "-o", self.out])
        document = self._read_json("estimate.json")
        self.assertEqual(code, EXIT_PASSED if document["passed"] else EXIT_FAILED)
        self.assertIn("quadratic.sigmaHatSq", document["checks"])
        header, rows = read_rows(os.path.join(self.out, "samples.csv"))
        self.assertEqual(header, ["i", "tau", "energy_quadratic"])
        self.assertEqual(len(rows), 4)
        self.assertEqual(document["estimates"]["quadratic"]["nSamples"], 4)
        self.assertIn("quadratic", document["moments"])

    def test_clt_too_few_replicates(self):
        argv = ["clt", "--seed", "1", "--replicates", "10", "-o", self.out]
        self.assertEqual(main(argv), EXIT_USAGE)

    def test_verify_decomposition_not_applicable(self):
        source = os.path.join(self.out, "tent.csv")
        write_path_csv(self.tent_path(), source)
        argv = ["verify-decomposition", "--input", source, "-w", "1"]
        self.assertEqual(main(argv + ["-o", self.out]), EXIT_PASSED)
        document = self._read_json("theorem.json")
        self.assertEqual((document["paths"], document["applicable"]), (1, 0))
        self.assertEqual(document["failed"], 0)


class CampaignConfigTest(BaseTest):
    def test_defaults_are_valid(self):
        config = CampaignConfig(seed=1, dt=1e-4)
        self.assertEqual(config.validate(), [])
        self.assertEqual(config.penalty_specs()[0].name, "quadratic")

    def test_coarse_step_warns(self):
        with self.assertLogs("tautrenewal.cli.config", level="WARNING"):
            warnings = CampaignConfig(dt=0.01).validate()
        self.assertEqual(len(warnings), 1)

    def test_penalty_string_is_wrapped(self):
        config = CampaignConfig(penalties="power:4")  # type: ignore[arg-type]
        self.assertEqual([p.name for p in config.penalty_specs()], ["power_4"])

    def test_invalid_values(self):
        for field, value in (("replicates", 0), ("alpha", 1.5), ("dt", 0)):
            with self.assertRaises(UsageError):
                CampaignConfig(**{field: value}).validate()

    def test_override_skips_missing_flags(self):
        args = build_parser().parse_args(["gen", "--seed", "9"])
        config = CampaignConfig(width=2.0).override(args)
        self.assertEqual((config.seed, config.width), (9, 2.0))


class RandomInstanceTest(BaseTest):
    def test_deterministic(self):
        a = random_instance(3, 1, 16)
        b = random_instance(3, 1, 16)
        self.assertEqual(a.path, b.path)
        self.assertEqual(a.width, b.width)
        self.assertEqual(a.boundary, b.boundary)

    def test_size_limit(self):
        for index in range(20):
            problem = random_instance(5, index, 8)
            self.assertTrue(4 <= len(problem.path) <= 8)
            self.assertTrue(0.05 <= problem.width <= 1.0)


def _clt_report(statistics, variance, p_value):
    return CltReport(
        {
            "statistics": list(statistics),
            "cHat": 1.0,
            "sigmaHatSq": 1.0,
            "mean": float(np.mean(statistics)),
            "variance": variance,
            "ksStatistic": 0.01,
            "pValue": p_value,
        }
    )


class CltChecksTest(BaseTest):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.out = self._tmp.name
        self.centered = np.linspace(-1.7, 1.7, 500)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def test_all_criteria_pass(self):
        checks = clt_checks(_clt_report(self.centered, 1.0, 0.5), 0.01)
        self.assertTrue(all(checks.values()))
        self.assertEqual(set(checks), {"normality", "variance", "centered"})

    def test_variance_outside_band(self):
        for variance in (0.7, 1.3, None):
            checks = clt_checks(_clt_report(self.centered, variance, 0.5), 0.01)
            self.assertFalse(checks["variance"], variance)
        for edge in CLT_VARIANCE_BAND:
            checks = clt_checks(_clt_report(self.centered, edge, 0.5), 0.01)
            self.assertTrue(checks["variance"], edge)

    def test_shifted_mean(self):
        # GIVEN: mean 0.2 exceeds 3/√500 ≈ 0.134
        checks = clt_checks(_clt_report(self.centered + 0.2, 1.0, 0.5), 0.01)
        self.assertFalse(checks["centered"])
        self.assertTrue(checks["normality"])

    def test_run_fails_on_variance_alone(self):
        # GIVEN: KS passes, but the variance is twice the limit
        report = _clt_report(self.centered, 2.0, 0.9)
        with patch("tautrenewal.cli.commands.clt_experiment", return_value=report):
            # WHEN
            code = main(["clt", "--seed", "1", "-o", self.out])
        # THEN
        self.assertEqual(code, EXIT_FAILED)
        with open(os.path.join(self.out, "clt.json"), encoding="utf-8") as fh:
            document = json.load(fh)
        self.assertFalse(document["passed"])
        self.assertEqual(document["checks"]["variance"], False)
        self.assertEqual(document["checks"]["normality"], True)

    def test_run_passes(self):
        report = _clt_report(self.centered, 1.0, 0.9)
        with patch("tautrenewal.cli.commands.clt_experiment", return_value=report):
            code = main(["clt", "--seed", "1", "-o", self.out])
        self.assertEqual(code, EXIT_PASSED)


class EstimateChecksTest(BaseTest):
    @staticmethod
    def _report(c_hat, sigma_sq):
        return EstimatorReport(
            {"penalty": "quadratic", "cHat": c_hat, "sigmaHatSq": sigma_sq}
        )

    def test_positive_estimates_pass(self):
        checks = estimate_checks({"quadratic": self._report(0.7, 2.0)}, {})
        self.assertEqual(
            checks, {"quadratic.cHat": True, "quadratic.sigmaHatSq": True}
        )

    def test_failures(self):
        checks = estimate_checks(
            {"a": self._report(float("nan"), 1.0), "b": self._report(1.0, -1e-3)},
            {"a": MomentStabilityReport({"stable": False})},
        )
        self.assertFalse(checks["a.cHat"])
        self.assertTrue(checks["a.sigmaHatSq"])
        self.assertFalse(checks["b.sigmaHatSq"])
        self.assertFalse(checks["a.moments"])

    def test_run_fails_without_variance(self):
        # GIVEN: identical blocks, the CLT variance estimate is zero
        samples = [RenewalSample(tau=1.0, energies={QUADRATIC: 2.0}) for _ in range(4)]
        with tempfile.TemporaryDirectory() as out:
            with patch("tautrenewal.cli.commands.sample_renewal", return_value=samples):
                # WHEN
                argv = ["estimate-c", "--seed", "1", "--n-blocks", "4"]
                code = main(argv + ["-o", out])
            with open(os.path.join(out, "estimate.json"), encoding="utf-8") as fh:
                document = json.load(fh)
        # THEN
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(document["checks"]["quadratic.sigmaHatSq"])
        self.assertTrue(document["checks"]["quadratic.cHat"])
