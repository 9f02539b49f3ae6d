from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..error import ArgumentErrorCodes, InvalidArgumentError
from .enums import PenaltyKind

SLOPE_CLAMP = 1e150
"""Slopes are clamped to this magnitude before exponentiation."""


@dataclass(frozen=True)
class PenaltySpec:
    """Convex even penalty ``c`` of the energy functional ``∫ c(φ'(u)) du``.

    Instances are hashable and are used as keys of energy maps.

    Args:
        kind: Penalty family.
        exponent: Exponent α of :attr:`PenaltyKind.Power`, must exceed 1.
            Must be omitted for other kinds.
    Raises:
        :class:`~tautrenewal.api.error.InvalidArgumentError`:
            Missing or non-convex exponent, or an exponent given
            to a kind that has none.
    Usage:
        >>> PenaltySpec.power(4).name
        'power_4'
    """

    kind: PenaltyKind
    exponent: Optional[float] = None

    def __post_init__(self):
        if self.kind is PenaltyKind.Power:
            if self.exponent is None or not self.exponent > 1:
                raise InvalidArgumentError(
                    ArgumentErrorCodes.NotStrictlyConvex,
                    f"power penalty requires exponent > 1, got {self.exponent!r}",
                )
            object.__setattr__(self, "exponent", float(self.exponent))
        elif self.exponent is not None:
            raise InvalidArgumentError(
                ArgumentErrorCodes.UnexpectedExponent,
                f"{self.kind.value} penalty takes no exponent",
            )

    @classmethod
    def quadratic(cls) -> "PenaltySpec":
        return cls(PenaltyKind.Quadratic)

    @classmethod
    def power(cls, exponent: float) -> "PenaltySpec":
        return cls(PenaltyKind.Power, exponent)

    @classmethod
    def sqrt1p(cls) -> "PenaltySpec":
        return cls(PenaltyKind.Sqrt1p)

    @property
    def name(self) -> str:
        """Identifier used in CSV column names and JSON keys."""
        if self.kind is PenaltyKind.Power:
            return f"power_{self.exponent:g}"
        return self.kind.value

    @property
    def strictly_convex(self) -> bool:
        if self.kind is PenaltyKind.Power:
            return self.exponent is not None and self.exponent > 1
        return True

    def __str__(self) -> str:
        return self.name

    def __call__(self, slopes: np.ndarray) -> np.ndarray:
        """Evaluate ``c`` elementwise."""
        x = np.minimum(np.abs(np.asarray(slopes, dtype=float)), SLOPE_CLAMP)
        with np.errstate(over="ignore"):
            if self.kind is PenaltyKind.Quadratic:
                return x * x
            if self.kind is PenaltyKind.Power:
                return x ** self.exponent
            return np.hypot(1.0, x)

    def derivative(self, slopes: np.ndarray) -> np.ndarray:
        """Evaluate ``c'`` elementwise."""
        s = np.clip(np.asarray(slopes, dtype=float), -SLOPE_CLAMP, SLOPE_CLAMP)
        with np.errstate(over="ignore"):
            if self.kind is PenaltyKind.Quadratic:
                return 2.0 * s
            if self.kind is PenaltyKind.Power:
                alpha = float(self.exponent)  # type: ignore[arg-type]
                return alpha * np.sign(s) * np.abs(s) ** (alpha - 1.0)
            return s / np.hypot(1.0, s)

    def curvature(self, slopes: np.ndarray) -> np.ndarray:
        """Evaluate ``c''`` elementwise, capped at :data:`SLOPE_CLAMP`."""
        s = np.minimum(np.abs(np.asarray(slopes, dtype=float)), SLOPE_CLAMP)
        with np.errstate(over="ignore", divide="ignore"):
            if self.kind is PenaltyKind.Quadratic:
                return np.full_like(s, 2.0)
            if self.kind is PenaltyKind.Power:
                alpha = float(self.exponent)  # type: ignore[arg-type]
                value = alpha * (alpha - 1.0) * s ** (alpha - 2.0)
                return np.minimum(value, SLOPE_CLAMP)
            return np.hypot(1.0, s) ** -3


QUADRATIC = PenaltySpec.quadratic()
