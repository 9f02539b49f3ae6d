import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..error import (
    ArgumentErrorCodes,
    DegenerateVarianceError,
    InvalidArgumentError,
    _reading_csv,
    _require_positive,
)
from ..extrema import decompose
from ..internal import JsonObjectView, Stream, fan_out, read_rows, write_rows
from ..internal.csvio import PathLike
from ..pagination import PathPage, chain_pages, join_pages
from ..pathkit import QUADRATIC, PenaltySpec
from ..stats import covariance, ks_normality, summarize
from ..tautstring import BoundaryCondition, TubeProblem, solve
from .blocks import block_minimizer

logger = logging.getLogger(__name__)

DEFAULT_BLOCKS_PER_PATH = 16
"""Double blocks taken from one simulated path before starting a new one."""

MIN_CLT_REPLICATES = 50


@dataclass(frozen=True)
class RenewalSample:
    """One double block ``[t̄_{2i}, t̄_{2i+2}]`` of a simulated path.

    Attributes:
        tau: Block duration ``t̄_{2i+2} − t̄_{2i}``.
        energies: ``E(ψ_{2i}) + E(ψ_{2i+1})`` per penalty.
        replicate: Index of the simulated path.
        index: Double block index ``i`` within the path, from 1.
    """

    tau: float
    energies: Dict[PenaltySpec, float]
    replicate: int = 0
    index: int = 1

    def energy(self, penalty: PenaltySpec) -> float:
        try:
            return self.energies[penalty]
        except KeyError:
            raise InvalidArgumentError(
                ArgumentErrorCodes.MissingField,
                f"sample has no energy for penalty {penalty}",
            ) from None


@dataclass(frozen=True)
class _ReplicateTask:
    width: float
    penalties: Tuple[PenaltySpec, ...]
    step: float
    seed: int
    stream: Stream
    replicate: int
    blocks: int


def _page_span(width: float, blocks: int, step: float) -> float:
    # h-extrema of Brownian motion are h² apart on average.
    return max((2 * blocks + 3) * width * width, step)


def _sample_replicate(task: _ReplicateTask) -> List[RenewalSample]:
    needed = 2 * task.blocks + 2
    first = PathPage.first(
        task.seed,
        task.replicate,
        _page_span(task.width, task.blocks, task.step),
        task.step,
        task.stream,
    )
    pages = chain_pages(first)
    loaded = [next(pages)]
    path = join_pages(loaded)
    decomposition = decompose(path, task.width)
    while decomposition.count < needed:
        loaded.append(next(pages))
        path = join_pages(loaded)
        decomposition = decompose(path, task.width)
    if len(loaded) > 1:
        logger.debug(
            "replicate %d: %d pages for %d h-extrema",
            task.replicate,
            len(loaded),
            needed,
        )

    t_bar = decomposition.t_bar
    samples = []
    for i in range(1, task.blocks + 1):
        lead = block_minimizer(path, decomposition, 2 * i, task.penalties)
        tail = block_minimizer(path, decomposition, 2 * i + 1, task.penalties)
        energies = {p: lead.energy(p) + tail.energy(p) for p in task.penalties}
        samples.append(
            RenewalSample(
                tau=t_bar[2 * i + 2] - t_bar[2 * i],
                energies=energies,
                replicate=task.replicate,
                index=i,
            )
        )
    return samples


def sample_renewal(
    width: float,
    penalties: Sequence[PenaltySpec],
    n_blocks: int,
    dt: float,
    seed: int,
    *,
    blocks_per_path: int = DEFAULT_BLOCKS_PER_PATH,
    workers: int = 1,
    stream: Stream = Stream.RENEWAL,
) -> List[RenewalSample]:
    """Simulate i.i.d. renewal samples ``(τ, 𝓔)``.

    Brownian paths are extended page by page until they realize
    ``t̄_{2m+2}``, where ``m`` is the number of double blocks taken from
    the path. The warm-up ``[0, t̄_2]`` of every path is discarded.
    Replicate ``r`` draws from the stream ``(seed, stream, r)``, so the
    result doesn't depend on ``workers``.

    Args:
        width: Tube width h.
        penalties: Energies to record.
        n_blocks: Number of samples.
        dt: Grid step.
        seed: Master seed.
        blocks_per_path: Double blocks per simulated path.
        workers: Worker processes.
        stream: Random stream family.
    Returns:
        Samples ordered by replicate, then by block.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Non-positive width, step or counts.
    """
    _require_positive("width", width)
    _require_positive("dt", dt)
    if n_blocks < 1 or blocks_per_path < 1:
        raise InvalidArgumentError(
            ArgumentErrorCodes.TooFewSamples,
            "n_blocks and blocks_per_path must be positive",
        )
    tasks = []
    remaining = n_blocks
    replicate = 0
    while remaining > 0:
        blocks = min(blocks_per_path, remaining)
        tasks.append(
            _ReplicateTask(
                float(width),
                tuple(penalties),
                float(dt),
                seed,
                stream,
                replicate,
                blocks,
            )
        )
        remaining -= blocks
        replicate += 1
    logger.info(
        "sampling %d renewal blocks from %d paths (h=%g, dt=%g)",
        n_blocks,
        len(tasks),
        width,
        dt,
    )
    samples: List[RenewalSample] = []
    for chunk in fan_out(_sample_replicate, tasks, workers):
        samples.extend(chunk)
    return samples


def write_samples_csv(
    samples: Sequence[RenewalSample], penalties: Sequence[PenaltySpec], file: PathLike
) -> None:
    """Write samples as CSV ``i,tau,energy_<penalty>…``."""
    header = ["i", "tau"] + [f"energy_{p.name}" for p in penalties]
    rows = (
        [i, s.tau] + [s.energy(p) for p in penalties] for i, s in enumerate(samples, 1)
    )
    write_rows(file, header, rows)


def read_samples_csv(
    file: PathLike, penalties: Sequence[PenaltySpec]
) -> List[RenewalSample]:
    """Read samples written by :func:`write_samples_csv`."""
    with _reading_csv(file):
        header, rows = read_rows(file)
        columns = {name: index for index, name in enumerate(header)}
        for name in ["tau"] + [f"energy_{p.name}" for p in penalties]:
            if name not in columns:
                raise InvalidArgumentError(
                    ArgumentErrorCodes.MissingField,
                    f"samples CSV lacks column {name!r}",
                )
        return [
            RenewalSample(
                tau=float(row[columns["tau"]]),
                energies={
                    p: float(row[columns[f"energy_{p.name}"]]) for p in penalties
                },
                index=int(row[columns["i"]]) if "i" in columns else 1,
            )
            for row in rows
        ]


class EstimatorReport(JsonObjectView):
    """Law of large numbers and CLT estimates from renewal samples."""

    @property
    def penalty(self) -> str:
        return self._get("penalty")

    @property
    def n_samples(self) -> int:
        return self._get("nSamples")

    @property
    def mean_tau(self) -> float:
        return self._get("meanTau")

    @property
    def mean_energy(self) -> float:
        return self._get("meanEnergy")

    @property
    def var_tau(self) -> float:
        return self._get("varTau")

    @property
    def var_energy(self) -> float:
        return self._get("varEnergy")

    @property
    def cov(self) -> float:
        """Sample covariance of τ and the energy."""
        return self._get("cov")

    @property
    def c_hat(self) -> float:
        """Estimate of E(𝓔)/E(τ)."""
        return self._get("cHat")

    @property
    def sigma_hat_sq(self) -> float:
        """Estimate of the CLT variance."""
        return self._get("sigmaHatSq")

    @property
    def standard_error_c(self) -> float:
        return self._get("standardErrorC")


def limit_variance(
    mean_tau: float, mean_energy: float, var_tau: float, var_energy: float, cov: float
) -> float:
    """``Ȳ²/τ̄³·Var τ + Var Y/τ̄ − 2·Cov(τ, Y)·Ȳ/τ̄²``."""
    return (
        mean_energy**2 / mean_tau**3 * var_tau
        + var_energy / mean_tau
        - 2.0 * cov * mean_energy / mean_tau**2
    )


def estimate(
    samples: Sequence[RenewalSample], penalty: PenaltySpec = QUADRATIC
) -> EstimatorReport:
    """Estimate the energy rate and its CLT variance.

    Variances and the covariance are unbiased sample estimates.
    The standard error of ``c_hat`` is ``√(σ̂² / (n·τ̄))``.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Fewer than two samples.
    """
    if len(samples) < 2:
        raise InvalidArgumentError(
            ArgumentErrorCodes.TooFewSamples,
            f"estimate needs at least two samples, got {len(samples)}",
        )
    tau = np.array([s.tau for s in samples], dtype=float)
    y = np.array([s.energy(penalty) for s in samples], dtype=float)
    n = int(tau.size)
    mean_tau, mean_y = float(np.mean(tau)), float(np.mean(y))
    var_tau = float(np.var(tau, ddof=1))
    var_y = float(np.var(y, ddof=1))
    cov = covariance(tau, y)
    sigma_sq = limit_variance(mean_tau, mean_y, var_tau, var_y, cov)
    return EstimatorReport(
        {
            "penalty": penalty.name,
            "nSamples": n,
            "meanTau": mean_tau,
            "meanEnergy": mean_y,
            "varTau": var_tau,
            "varEnergy": var_y,
            "cov": cov,
            "cHat": mean_y / mean_tau,
            "sigmaHatSq": sigma_sq,
            "standardErrorC": math.sqrt(max(sigma_sq, 0.0) / (n * mean_tau)),
        }
    )


class MomentStabilityReport(JsonObjectView):
    """Higher moments of τ and Y on the first half and on the whole sample."""

    @property
    def half(self) -> Dict[str, float]:
        return self._get("half")

    @property
    def full(self) -> Dict[str, float]:
        return self._get("full")

    @property
    def stable(self) -> bool:
        """Fourth central moments of both halves agree within 3 SE."""
        return self._get("stable")


def _fourth_moment(x: np.ndarray) -> Tuple[float, float]:
    d = x - np.mean(x)
    m4 = float(np.mean(d**4))
    m8 = float(np.mean(d**8))
    return m4, math.sqrt(max(m8 - m4 * m4, 0.0) / x.size)


def _moments(tau: np.ndarray, y: np.ndarray) -> Dict[str, float]:
    m4_tau, se_tau = _fourth_moment(tau)
    m4_y, se_y = _fourth_moment(y)
    return {
        "n": int(tau.size),
        "kurtosisTau": summarize(tau).excess_kurtosis,
        "kurtosisEnergy": summarize(y).excess_kurtosis,
        "m4Tau": m4_tau,
        "m4TauSe": se_tau,
        "m4Energy": m4_y,
        "m4EnergySe": se_y,
    }


def moment_stability(
    samples: Sequence[RenewalSample], penalty: PenaltySpec = QUADRATIC
) -> MomentStabilityReport:
    """Compare kurtosis and fourth moments across a doubling of the sample.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Fewer than four samples.
    """
    if len(samples) < 4:
        raise InvalidArgumentError(
            ArgumentErrorCodes.TooFewSamples,
            f"moment stability needs at least four samples, got {len(samples)}",
        )
    tau = np.array([s.tau for s in samples], dtype=float)
    y = np.array([s.energy(penalty) for s in samples], dtype=float)
    half = len(samples) // 2
    first, full = _moments(tau[:half], y[:half]), _moments(tau, y)
    stable = all(
        abs(first[m] - full[m]) <= 3.0 * math.hypot(first[m + "Se"], full[m + "Se"])
        for m in ("m4Tau", "m4Energy")
    )
    return MomentStabilityReport({"half": first, "full": full, "stable": stable})


class CltReport(JsonObjectView):
    """Standardized energies of independent paths."""

    @property
    def statistics(self) -> List[float]:
        return self._get("statistics")

    @property
    def c_hat(self) -> float:
        return self._get("cHat")

    @property
    def sigma_hat_sq(self) -> float:
        return self._get("sigmaHatSq")

    @property
    def mean(self) -> float:
        return self._get("mean")

    @property
    def variance(self) -> Optional[float]:
        return self._get("variance")

    @property
    def ks_statistic(self) -> float:
        return self._get("ksStatistic")

    @property
    def p_value(self) -> float:
        return self._get("pValue")


@dataclass(frozen=True)
class _PathEnergyTask:
    width: float
    penalty: PenaltySpec
    horizon: float
    step: float
    seed: int
    replicate: int


def _path_energy(task: _PathEnergyTask) -> float:
    page = PathPage.first(
        task.seed, task.replicate, task.horizon, task.step, Stream.CLT
    )
    path = page.path()
    values = path.values
    problem = TubeProblem(
        path, task.width, BoundaryCondition.fixed(float(values[0]), float(values[-1]))
    )
    return solve(problem, (task.penalty,)).energy(task.penalty)


def clt_experiment(
    width: float,
    penalty: PenaltySpec,
    horizon: float,
    replicates: int,
    dt: float,
    seed: int,
    *,
    calibration_blocks: int = 10_000,
    blocks_per_path: int = DEFAULT_BLOCKS_PER_PATH,
    workers: int = 1,
) -> CltReport:
    """Standardize the energy of independent taut strings on ``[0, T]``.

    ``c_hat`` and ``σ̂²`` come from a renewal run on the calibration stream,
    independent of the replicate paths. Each replicate contributes
    ``(E(η_T) − T·c_hat) / √(T·σ̂²)``.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Fewer than 50 replicates.
        :class:`~tautrenewal.api.error.DegenerateVarianceError`: σ̂² ≤ 0.
    """
    _require_positive("horizon", horizon)
    if replicates < MIN_CLT_REPLICATES:
        raise InvalidArgumentError(
            ArgumentErrorCodes.TooFewSamples,
            f"CLT experiment needs at least {MIN_CLT_REPLICATES} replicates, "
            f"got {replicates}",
        )
    calibration = estimate(
        sample_renewal(
            width,
            (penalty,),
            calibration_blocks,
            dt,
            seed,
            blocks_per_path=blocks_per_path,
            workers=workers,
            stream=Stream.CALIBRATION,
        ),
        penalty,
    )
    if not calibration.sigma_hat_sq > 0:
        raise DegenerateVarianceError("sigma_hat_sq", calibration.sigma_hat_sq)
    tasks = [
        _PathEnergyTask(float(width), penalty, float(horizon), float(dt), seed, r)
        for r in range(replicates)
    ]
    energies = np.array(fan_out(_path_energy, tasks, workers))
    scale = math.sqrt(horizon * calibration.sigma_hat_sq)
    statistics = ((energies - horizon * calibration.c_hat) / scale).tolist()
    summary = summarize(statistics)
    ks = ks_normality(statistics)
    logger.info(
        "clt: %d replicates, mean %.3g, variance %s, KS p=%.3g",
        replicates,
        summary.mean,
        summary.variance,
        ks.p_value,
    )
    return CltReport(
        {
            "statistics": statistics,
            "cHat": calibration.c_hat,
            "sigmaHatSq": calibration.sigma_hat_sq,
            "calibrationSamples": calibration.n_samples,
            "mean": summary.mean,
            "variance": summary.variance,
            "ksStatistic": ks.statistic,
            "pValue": ks.p_value,
        }
    )


def write_statistics_csv(statistics: Sequence[float], file: PathLike) -> None:
    """Write standardized statistics as CSV ``replicate,statistic``."""
    write_rows(file, ("replicate", "statistic"), enumerate(statistics))
