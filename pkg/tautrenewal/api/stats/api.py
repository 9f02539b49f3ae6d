from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import stats as sps

from ..error import ArgumentErrorCodes, InvalidArgumentError

Sample = Union[np.ndarray, Sequence[float], Iterable[float]]


def _as_sample(samples: Sample) -> np.ndarray:
    x = np.asarray(list(samples) if not isinstance(samples, np.ndarray) else samples)
    x = x.astype(float).ravel()
    if x.size == 0:
        raise InvalidArgumentError(ArgumentErrorCodes.EmptySample, "sample is empty")
    return x


@dataclass(frozen=True)
class SummaryStats:
    """Summary of a real sample.

    ``variance`` is the unbiased estimate and is :data:`None` for a single
    observation. ``skewness`` and ``excess_kurtosis`` are the moment ratios
    ``m3/m2^1.5`` and ``m4/m2² − 3``, :data:`None` when the sample is constant.
    """

    n: int
    mean: float
    variance: Optional[float]
    skewness: Optional[float]
    excess_kurtosis: Optional[float]
    min: float
    max: float

    @property
    def std(self) -> Optional[float]:
        return None if self.variance is None else float(np.sqrt(self.variance))

    @property
    def standard_error(self) -> Optional[float]:
        """Standard error of the mean."""
        return None if self.variance is None else float(np.sqrt(self.variance / self.n))


def summarize(samples: Sample) -> SummaryStats:
    """Summarize a sample with two-pass (mean-subtracted) moments.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`: Empty sample.
    """
    x = _as_sample(samples)
    n = int(x.size)
    mean = float(np.mean(x))
    variance = skewness = kurtosis = None
    if n >= 2:
        deviations = x - mean
        variance = float(np.dot(deviations, deviations) / (n - 1))
        if variance > 0:
            skewness = float(sps.skew(x, bias=True))
            kurtosis = float(sps.kurtosis(x, fisher=True, bias=True))
    return SummaryStats(
        n=n,
        mean=mean,
        variance=variance,
        skewness=skewness,
        excess_kurtosis=kurtosis,
        min=float(np.min(x)),
        max=float(np.max(x)),
    )


@dataclass(frozen=True)
class KsResult:
    """One-sample Kolmogorov–Smirnov test against the standard normal."""

    statistic: float
    p_value: float
    n: int

    def json(self) -> dict:
        return {"statistic": self.statistic, "pValue": self.p_value, "n": self.n}


def ks_normality(samples: Sample) -> KsResult:
    """Kolmogorov–Smirnov test of a sample against the standard normal.

    The p-value comes from the asymptotic Kolmogorov distribution.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`: Empty sample.
    """
    x = _as_sample(samples)
    result = sps.ks_1samp(x, sps.norm.cdf, method="asymp")
    p_value = min(max(float(result.pvalue), 0.0), 1.0)
    return KsResult(statistic=float(result.statistic), p_value=p_value, n=int(x.size))


def covariance(x: Sample, y: Sample) -> float:
    """Unbiased sample covariance.

    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Length mismatch or fewer than two observations.
    """
    a, b = _as_sample(x), _as_sample(y)
    if a.size != b.size:
        raise InvalidArgumentError(
            ArgumentErrorCodes.LengthMismatch,
            f"samples have lengths {a.size} and {b.size}",
        )
    if a.size < 2:
        raise InvalidArgumentError(
            ArgumentErrorCodes.TooFewSamples, "covariance needs at least two pairs"
        )
    return float(np.cov(a, b, ddof=1)[0, 1])
