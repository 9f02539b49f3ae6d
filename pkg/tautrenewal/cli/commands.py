"""
Command implementations.

Every command takes a validated :class:`CampaignConfig` and an
:class:`Artifacts` sink, writes its CSV/JSON artifacts and returns whether
the run passed. Each artifact gets a ``<artifact>.meta.json`` sidecar.
"""
import logging
import math
import os
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from tautrenewal.__version__ import __version__
from tautrenewal.api import (
    QUADRATIC,
    AnscombeConfig,
    BoundaryCondition,
    CltReport,
    ConvergenceError,
    EstimatorReport,
    MomentStabilityReport,
    PairLaw,
    PairLawKind,
    PiecewiseLinearPath,
    Stream,
    TubeProblem,
    VerificationStatus,
    anscombe_simulate,
    clt_experiment,
    decompose,
    estimate,
    flat_free_string,
    generate_brownian,
    moment_stability,
    qp_oracle,
    read_path_csv,
    sample_renewal,
    solve,
    sup_distance,
    verify_penalty_invariance,
    verify_theorem_main,
    write_path_csv,
    write_samples_csv,
    write_statistics_csv,
)
from tautrenewal.api.internal import JsonObject, JsonObjectForm, generator
from tautrenewal.api.pathkit import brownian_values
from tautrenewal.utils import convert_law

from .config import CampaignConfig, UsageError

logger = logging.getLogger(__name__)


class Artifacts:
    """Writes artifacts into the output directory, each with its sidecar."""

    def __init__(self, command: str, config: CampaignConfig, warnings: List[str]):
        self._command = command
        self._config = config
        self._warnings = list(warnings)
        self._directory = config.output
        os.makedirs(self._directory, exist_ok=True)

    def path(self, name: str) -> str:
        return os.path.join(self._directory, name)

    def _sidecar(self, name: str) -> None:
        meta = JsonObjectForm(
            {
                "command": self._command,
                "config": self._config.json(),
                "seed": self._config.seed,
                "version": __version__,
                "warnings": self._warnings,
            }
        )
        with open(self.path(name + ".meta.json"), "w", encoding="utf-8") as fh:
            fh.write(str(meta) + "\n")

    def write(self, name: str, writer: Callable[[str], None]) -> str:
        """Let ``writer`` produce the artifact at its path."""
        target = self.path(name)
        writer(target)
        self._sidecar(name)
        logger.info("wrote %s", target)
        return target

    def write_json(self, name: str, document: Any) -> str:
        text = str(JsonObjectForm(document))

        def _dump(target: str) -> None:
            with open(target, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")

        return self.write(name, _dump)


def _seed(config: CampaignConfig) -> int:
    seed = config.require("seed")
    if not isinstance(seed, int):
        raise UsageError(f"seed must be an integer, got {seed!r}")
    return seed


def _load_path(config: CampaignConfig, index: int = 0) -> PiecewiseLinearPath:
    # Path k of a campaign is the path generated with seed + k.
    if config.input is not None:
        return read_path_csv(config.input)
    return generate_brownian(config.horizon, config.dt, _seed(config) + index)


def run_gen(config: CampaignConfig, artifacts: Artifacts) -> bool:
    path = generate_brownian(config.horizon, config.dt, _seed(config))
    artifacts.write("path.csv", lambda target: write_path_csv(path, target))
    return True


def run_solve(config: CampaignConfig, artifacts: Artifacts) -> bool:
    path = read_path_csv(config.require("input"))
    if config.boundary == "fixed":
        boundary = BoundaryCondition.fixed(path.values[0], path.values[-1])
    elif config.boundary == "free":
        boundary = BoundaryCondition.free()
    else:
        raise UsageError(f"boundary must be 'fixed' or 'free', got {config.boundary!r}")
    result = solve(TubeProblem(path, config.width, boundary), config.penalty_specs())
    for penalty, value in result.energies.items():
        logger.info("energy %s = %.17g", penalty, value)
    artifacts.write("string.csv", result.write_csv)
    return True


def run_decompose(config: CampaignConfig, artifacts: Artifacts) -> bool:
    decomposition = decompose(_load_path(config), config.width)
    logger.info("N(T) = %d", decomposition.count)
    artifacts.write("decomposition.csv", decomposition.write_csv)
    return True


def _interquartile_range(values: List[float]) -> Optional[float]:
    if not values:
        return None
    q1, q3 = np.percentile(values, [25, 75])
    return float(q3 - q1)


def run_verify_decomposition(config: CampaignConfig, artifacts: Artifacts) -> bool:
    penalties = config.penalty_specs()
    count = 1 if config.input is not None else config.paths
    reports: List[JsonObject] = []
    remainders: Dict[str, List[float]] = {p.name: [] for p in penalties}
    failed = 0
    distance = residual = 0.0
    for k in range(count):
        report = verify_theorem_main(
            _load_path(config, k), config.width, penalties, config.tolerance
        )
        reports.append(report.json())
        if report.status is VerificationStatus.NotApplicable:
            continue
        distance = max(distance, report.max_block_distance)
        residual = max(residual, report.max_knot_residual)
        if not report.passed or report.max_knot_residual > config.tolerance:
            failed += 1
        for name, value in report.remainder.items():
            remainders[name].append(value)
    applicable = len(remainders[penalties[0].name])
    logger.info(
        "theorem check: %d paths, %d applicable, %d failed", count, applicable, failed
    )
    artifacts.write_json(
        "theorem.json",
        {
            "paths": count,
            "applicable": applicable,
            "failed": failed,
            "maxBlockDistance": distance,
            "maxKnotResidual": residual,
            "remainderIqr": {
                name: _interquartile_range(values)
                for name, values in remainders.items()
            },
            "reports": reports,
        },
    )
    return failed == 0


def random_instance(seed: int, index: int, max_grid: int) -> TubeProblem:
    """Random tube problem on an irregular grid of at most ``max_grid`` points.

    Ends are fixed at the path, free, or fixed at random feasible values.
    """
    rng = generator(seed, int(Stream.INSTANCES), index)
    size = int(rng.integers(4, max(max_grid, 4) + 1))
    gaps = rng.uniform(0.5, 1.5, size - 1) / size
    times = np.concatenate(([0.0], np.cumsum(gaps)))
    path = PiecewiseLinearPath(times, brownian_values(times, rng))
    width = float(rng.uniform(0.05, 1.0))
    kind = int(rng.integers(3))
    if kind == 0:
        boundary = BoundaryCondition.fixed(path.values[0], path.values[-1])
    elif kind == 1:
        boundary = BoundaryCondition.free()
    else:
        shift = rng.uniform(-0.5 * width, 0.5 * width, 2)
        boundary = BoundaryCondition.fixed(
            path.values[0] + shift[0], path.values[-1] + shift[1]
        )
    return TubeProblem(path, width, boundary)


def run_oracle_check(config: CampaignConfig, artifacts: Artifacts) -> bool:
    seed = _seed(config)
    failures: List[JsonObject] = []
    distance = gap = 0.0
    for index in range(config.instances):
        problem = random_instance(seed, index, config.max_grid)
        taut = solve(problem, (QUADRATIC,))
        try:
            oracle = qp_oracle(problem, QUADRATIC)
        except ConvergenceError as exp:
            failures.append({"instance": index, "error": str(exp)})
            continue
        if flat_free_string(taut):
            # Any constant in the tube is optimal, the oracle must find one.
            d = float(np.ptp(oracle.string.values))
        else:
            d = sup_distance(taut.string, oracle.string)
        g = abs(taut.energy(QUADRATIC) - oracle.energy(QUADRATIC))
        distance, gap = max(distance, d), max(gap, g)
        if d > config.tolerance or g > config.energy_tolerance:
            failures.append({"instance": index, "distance": d, "energyGap": g})
    logger.info(
        "oracle check: %d instances, %d failures", config.instances, len(failures)
    )
    artifacts.write_json(
        "oracle.json",
        {
            "instances": config.instances,
            "maxDistance": distance,
            "maxEnergyGap": gap,
            "tolerance": config.tolerance,
            "energyTolerance": config.energy_tolerance,
            "failures": failures,
            "passed": not failures,
        },
    )
    return not failures


def run_verify_invariance(config: CampaignConfig, artifacts: Artifacts) -> bool:
    seed = _seed(config)
    penalties = config.penalty_specs()
    failures: List[JsonObject] = []
    distance = 0.0
    for index in range(config.instances):
        problem = random_instance(seed, index, config.max_grid)
        try:
            report = verify_penalty_invariance(problem, penalties, config.tolerance)
        except ConvergenceError as exp:
            failures.append({"instance": index, "error": str(exp)})
            continue
        distance = max(distance, report.max_distance)
        if not report.passed:
            failures.append({"instance": index, **report.json()})
    artifacts.write_json(
        "invariance.json",
        {
            "instances": config.instances,
            "penalties": [p.name for p in penalties],
            "maxDistance": distance,
            "tolerance": config.tolerance,
            "failures": failures,
            "passed": not failures,
        },
    )
    return not failures


def estimate_checks(
    estimates: Dict[str, EstimatorReport], moments: Dict[str, MomentStabilityReport]
) -> Dict[str, bool]:
    """Pass criteria of ``estimate-c``, one entry per penalty and check.

    Every penalty needs a finite positive ``c_hat`` and a positive CLT
    variance. Fourth moments must be stable when they were computed.
    """
    checks: Dict[str, bool] = {}
    for name, report in estimates.items():
        checks[f"{name}.cHat"] = math.isfinite(report.c_hat) and report.c_hat > 0
        checks[f"{name}.sigmaHatSq"] = (
            math.isfinite(report.sigma_hat_sq) and report.sigma_hat_sq > 0
        )
    for name, stability in moments.items():
        checks[f"{name}.moments"] = stability.stable
    return checks


def run_estimate_c(config: CampaignConfig, artifacts: Artifacts) -> bool:
    penalties = config.penalty_specs()
    samples = sample_renewal(
        config.width,
        penalties,
        config.n_blocks,
        config.dt,
        _seed(config),
        blocks_per_path=config.blocks_per_path,
        workers=config.workers,
    )
    artifacts.write(
        "samples.csv", lambda target: write_samples_csv(samples, penalties, target)
    )
    document: JsonObject = {"width": config.width}
    estimates: Dict[str, EstimatorReport] = {}
    moments: Dict[str, MomentStabilityReport] = {}
    if len(samples) >= 2:
        estimates = {p.name: estimate(samples, p) for p in penalties}
        document["estimates"] = {name: r.json() for name, r in estimates.items()}
    if len(samples) >= 4:
        moments = {p.name: moment_stability(samples, p) for p in penalties}
        document["moments"] = {name: r.json() for name, r in moments.items()}
    checks = estimate_checks(estimates, moments)
    passed = bool(estimates) and all(checks.values())
    document.update(checks=checks, passed=passed)
    artifacts.write_json("estimate.json", document)
    return passed


CLT_VARIANCE_BAND = (0.8, 1.25)
"""Admissible sample variance of the standardized statistics."""


def clt_checks(report: CltReport, alpha: float) -> Dict[str, bool]:
    """Pass criteria of ``clt``.

    The statistics must pass the KS test at level ``alpha``, their sample
    variance must lie in :data:`CLT_VARIANCE_BAND`, and their mean must be
    within three standard errors ``3/√M`` of zero.
    """
    low, high = CLT_VARIANCE_BAND
    variance = report.variance
    size = len(report.statistics)
    return {
        "normality": report.p_value > alpha,
        "variance": variance is not None and low <= variance <= high,
        "centered": size > 0 and abs(report.mean) <= 3.0 / math.sqrt(size),
    }


def run_clt(config: CampaignConfig, artifacts: Artifacts) -> bool:
    penalty = config.penalty_specs()[0]
    report = clt_experiment(
        config.width,
        penalty,
        config.horizon,
        config.replicates,
        config.dt,
        _seed(config),
        calibration_blocks=config.calibration_blocks,
        blocks_per_path=config.blocks_per_path,
        workers=config.workers,
    )
    artifacts.write(
        "statistics.csv", lambda target: write_statistics_csv(report.statistics, target)
    )
    checks = clt_checks(report, config.alpha)
    passed = all(checks.values())
    artifacts.write_json(
        "clt.json", {**report.json(), "checks": checks, "passed": passed}
    )
    return passed


def pair_law(config: CampaignConfig) -> PairLaw:
    try:
        kind = PairLawKind.from_string(config.pair_law, ignore_case=True)
        tau_law = convert_law(config.tau_law)
        if kind is PairLawKind.Identical:
            return PairLaw.identical(tau_law)
        x_law = convert_law(config.x_law)
    except ValueError as exp:
        raise UsageError("bad pair law", exp) from None
    if kind is PairLawKind.LinearCorrelated:
        return PairLaw.linear_correlated(x_law, tau_law, config.rho)
    return PairLaw.independent(x_law, tau_law)


def run_anscombe(config: CampaignConfig, artifacts: Artifacts) -> bool:
    setup = AnscombeConfig(
        pair_law(config), config.horizon, config.replicates, _seed(config)
    )
    report = anscombe_simulate(setup, workers=config.workers)
    artifacts.write(
        "anscombe.csv", lambda target: write_statistics_csv(report.statistics, target)
    )
    passed = report.p_value > config.alpha
    artifacts.write_json("anscombe.json", {**report.json(), "passed": passed})
    return passed


COMMANDS: Dict[str, Callable[[CampaignConfig, Artifacts], bool]] = {
    "gen": run_gen,
    "solve": run_solve,
    "decompose": run_decompose,
    "verify-decomposition": run_verify_decomposition,
    "verify-invariance": run_verify_invariance,
    "oracle-check": run_oracle_check,
    "estimate-c": run_estimate_c,
    "clt": run_clt,
    "anscombe": run_anscombe,
}
