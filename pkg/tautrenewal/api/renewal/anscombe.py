"""
Randomly indexed renewal-reward sums.

Pairs ``(X_k, τ_k)`` are i.i.d., ``S_n = τ_1 + … + τ_n`` and
``U_n = X_1 + … + X_n``. With ``Ñ(t) = sup{n ≥ 0 : S_n ≤ t}`` the statistic
``(U_{Ñ(t)−1} − t·X̄/τ̄) / √(t·σ̄²)`` is asymptotically standard normal,
where ``σ̄² = X̄²/τ̄³·σ_τ² + σ_X²/τ̄ − 2·σ_{X,τ}·X̄/τ̄²``.

Only laws with closed-form moments are offered, so ``σ̄²`` is exact.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..error import (
    ArgumentErrorCodes,
    DegenerateVarianceError,
    InvalidArgumentError,
    _require_positive,
)
from ..internal import JsonObjectView, Stream, fan_out, generator
from ..stats import ks_normality, summarize
from .enums import LawKind, PairLawKind

logger = logging.getLogger(__name__)

_DEGENERATE_RATIO = 1e-12


def _law_error(message: str) -> InvalidArgumentError:
    return InvalidArgumentError(ArgumentErrorCodes.InvalidLaw, message)


@dataclass(frozen=True)
class Law:
    """One-dimensional law with closed-form mean and variance.

    Use the classmethods to construct instances.

    Usage:
        >>> Law.uniform(0, 2).variance
        0.3333333333333333
    """

    kind: LawKind
    params: Tuple[float, ...]

    def __post_init__(self):
        arity = 1 if self.kind is LawKind.Exponential else 2
        if len(self.params) != arity:
            raise _law_error(
                f"{self.kind.value} law takes {arity} parameter(s), got {self.params}"
            )
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        p = self.params
        if self.kind is LawKind.Exponential and not p[0] > 0:
            raise _law_error(f"exponential mean must be positive, got {p[0]!r}")
        if self.kind is LawKind.Gaussian and not p[1] >= 0:
            raise _law_error(f"gaussian deviation must be non-negative, got {p[1]!r}")
        if self.kind is LawKind.Gamma and not (p[0] > 0 and p[1] > 0):
            raise _law_error(f"gamma shape and scale must be positive, got {p}")
        if self.kind is LawKind.Uniform and not p[0] < p[1]:
            raise _law_error(f"uniform bounds must satisfy low < high, got {p}")

    @classmethod
    def exponential(cls, mean: float) -> "Law":
        return cls(LawKind.Exponential, (mean,))

    @classmethod
    def gaussian(cls, mean: float, std: float) -> "Law":
        return cls(LawKind.Gaussian, (mean, std))

    @classmethod
    def gamma(cls, shape: float, scale: float) -> "Law":
        return cls(LawKind.Gamma, (shape, scale))

    @classmethod
    def uniform(cls, low: float, high: float) -> "Law":
        return cls(LawKind.Uniform, (low, high))

    def __str__(self) -> str:
        return f"{self.kind.value}:{','.join(format(p, 'g') for p in self.params)}"

    @property
    def mean(self) -> float:
        p = self.params
        if self.kind is LawKind.Exponential:
            return p[0]
        if self.kind is LawKind.Gamma:
            return p[0] * p[1]
        if self.kind is LawKind.Uniform:
            return 0.5 * (p[0] + p[1])
        return p[0]

    @property
    def variance(self) -> float:
        p = self.params
        if self.kind is LawKind.Exponential:
            return p[0] * p[0]
        if self.kind is LawKind.Gamma:
            return p[0] * p[1] * p[1]
        if self.kind is LawKind.Uniform:
            return (p[1] - p[0]) ** 2 / 12.0
        return p[1] * p[1]

    @property
    def positive(self) -> bool:
        """Whether draws are almost surely non-negative with a positive mean."""
        if self.kind is LawKind.Gaussian:
            return False
        if self.kind is LawKind.Uniform:
            return self.params[0] >= 0
        return True

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        p = self.params
        if self.kind is LawKind.Exponential:
            return rng.exponential(p[0], size)
        if self.kind is LawKind.Gamma:
            return rng.gamma(p[0], p[1], size)
        if self.kind is LawKind.Uniform:
            return rng.uniform(p[0], p[1], size)
        return rng.normal(p[0], p[1], size)


@dataclass(frozen=True)
class PairMoments:
    mean_x: float
    mean_tau: float
    var_x: float
    var_tau: float
    cov: float

    @property
    def rho(self) -> Optional[float]:
        """Correlation of X and τ, :data:`None` if X is constant."""
        scale = math.sqrt(self.var_x * self.var_tau)
        return self.cov / scale if scale > 0 else None


@dataclass(frozen=True)
class PairLaw:
    """Joint law of a reward X and a duration τ.

    * ``independent``: X from ``x_law``, τ from ``tau_law``.
    * ``linear-correlated``:
      ``X = X̄ + ρ·σ_X/σ_τ·(τ − τ̄) + √(1−ρ²)·σ_X·Z``, Z standard normal.
      Only the mean and variance of ``x_law`` are used.
    * ``identical``: ``X = τ``.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            τ-law not positive or of zero variance, missing X-law,
            or ``|ρ| > 1``.
    """

    kind: PairLawKind
    tau_law: Law
    x_law: Optional[Law] = None
    rho: float = 0.0

    def __post_init__(self):
        if not self.tau_law.positive:
            raise _law_error(f"duration law {self.tau_law} is not positive")
        if not self.tau_law.variance > 0:
            raise _law_error(f"duration law {self.tau_law} has zero variance")
        if self.kind is not PairLawKind.Identical and self.x_law is None:
            raise _law_error(f"{self.kind.value} pair law needs a reward law")
        if not -1.0 <= self.rho <= 1.0:
            raise _law_error(f"correlation must lie in [-1, 1], got {self.rho!r}")

    @classmethod
    def independent(cls, x_law: Law, tau_law: Law) -> "PairLaw":
        return cls(PairLawKind.Independent, tau_law, x_law)

    @classmethod
    def linear_correlated(cls, x_law: Law, tau_law: Law, rho: float) -> "PairLaw":
        return cls(PairLawKind.LinearCorrelated, tau_law, x_law, float(rho))

    @classmethod
    def identical(cls, tau_law: Law) -> "PairLaw":
        return cls(PairLawKind.Identical, tau_law)

    def moments(self) -> PairMoments:
        tau = self.tau_law
        if self.kind is PairLawKind.Identical:
            mean, variance = tau.mean, tau.variance
            return PairMoments(mean, mean, variance, variance, variance)
        x = self.x_law
        assert x is not None
        cov = 0.0
        if self.kind is PairLawKind.LinearCorrelated:
            cov = self.rho * math.sqrt(x.variance * tau.variance)
        return PairMoments(x.mean, tau.mean, x.variance, tau.variance, cov)

    def sample(
        self, rng: np.random.Generator, size: int
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Draw ``size`` pairs, returned as ``(x, tau)``."""
        tau = self.tau_law.sample(rng, size)
        if self.kind is PairLawKind.Identical:
            return tau.copy(), tau
        x_law = self.x_law
        assert x_law is not None
        if self.kind is PairLawKind.Independent:
            return x_law.sample(rng, size), tau
        std_x = math.sqrt(x_law.variance)
        std_tau = math.sqrt(self.tau_law.variance)
        noise = rng.standard_normal(size)
        x = (
            x_law.mean
            + self.rho * std_x / std_tau * (tau - self.tau_law.mean)
            + math.sqrt(1.0 - self.rho**2) * std_x * noise
        )
        return x, tau


def sigma_bar_components(moments: PairMoments) -> Dict[str, float]:
    """The three terms of σ̄²: duration, reward and cross term."""
    m = moments
    return {
        "duration": m.mean_x**2 / m.mean_tau**3 * m.var_tau,
        "reward": m.var_x / m.mean_tau,
        "cross": -2.0 * m.cov * m.mean_x / m.mean_tau**2,
    }


def sigma_bar_sq(moments: PairMoments) -> float:
    """σ̄², set to exactly 0 when the terms cancel up to rounding."""
    terms = sigma_bar_components(moments).values()
    total = sum(terms)
    if abs(total) <= _DEGENERATE_RATIO * sum(abs(v) for v in terms):
        return 0.0
    return total


@dataclass(frozen=True)
class AnscombeConfig:
    pair_law: PairLaw
    horizon: float
    replicates: int
    seed: int

    def __post_init__(self):
        _require_positive("horizon", self.horizon)
        if self.replicates < 2:
            raise InvalidArgumentError(
                ArgumentErrorCodes.TooFewSamples,
                f"need at least two replicates, got {self.replicates}",
            )


class AnscombeReport(JsonObjectView):
    @property
    def statistics(self) -> List[float]:
        return self._get("statistics")

    @property
    def sigma_bar_sq(self) -> float:
        return self._get("sigmaBarSq")

    @property
    def components(self) -> Dict[str, float]:
        return self._get("components")

    @property
    def rho(self) -> Optional[float]:
        return self._get_optional("rho")

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
class _ReplicateTask:
    config: AnscombeConfig
    replicate: int


def _stopped_sum(task: _ReplicateTask) -> float:
    """``U_{Ñ(t)−1}`` of one replicate."""
    config = task.config
    law = config.pair_law
    rng = generator(config.seed, int(Stream.ANSCOMBE), task.replicate)
    batch = max(16, int(1.1 * config.horizon / law.tau_law.mean) + 16)
    rewards: List[np.ndarray] = []
    durations: List[np.ndarray] = []
    elapsed = 0.0
    while elapsed <= config.horizon:
        x, tau = law.sample(rng, batch)
        rewards.append(x)
        durations.append(tau)
        elapsed += float(np.sum(tau))
    s = np.cumsum(np.concatenate(durations))
    renewals = int(np.searchsorted(s, config.horizon, side="right"))
    return float(np.sum(np.concatenate(rewards)[: max(renewals - 1, 0)]))


def anscombe_simulate(config: AnscombeConfig, workers: int = 1) -> AnscombeReport:
    """Simulate standardized randomly indexed sums.

    Replicate ``r`` draws from the stream ``(seed, ANSCOMBE, r)``.

    Raises:
        :class:`~tautrenewal.api.error.DegenerateVarianceError`: σ̄² is 0,
            for example when X equals τ.
    """
    moments = config.pair_law.moments()
    variance = sigma_bar_sq(moments)
    if not variance > 0:
        raise DegenerateVarianceError("sigma_bar_sq", variance)
    tasks = [_ReplicateTask(config, r) for r in range(config.replicates)]
    sums = np.array(fan_out(_stopped_sum, tasks, workers))
    t = config.horizon
    centre = t * moments.mean_x / moments.mean_tau
    statistics = ((sums - centre) / math.sqrt(t * variance)).tolist()
    summary = summarize(statistics)
    ks = ks_normality(statistics)
    logger.info(
        "anscombe: %d replicates, sigma_bar_sq %.6g, KS p=%.3g",
        config.replicates,
        variance,
        ks.p_value,
    )
    return AnscombeReport(
        {
            "statistics": statistics,
            "sigmaBarSq": variance,
            "components": sigma_bar_components(moments),
            "rho": moments.rho,
            "mean": summary.mean,
            "variance": summary.variance,
            "ksStatistic": ks.statistic,
            "pValue": ks.p_value,
        }
    )

