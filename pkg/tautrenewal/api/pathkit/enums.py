from enum_tools import document_enum

from ..enum import TautEnum


@document_enum
class PenaltyKind(TautEnum):
    """Convex even penalty applied to the slope of a path."""

    Quadratic = "quadratic"  # doc: c(x) = x², the quadratic energy.
    Power = "power"  # doc: c(x) = |x|^α with α > 1.
    Sqrt1p = "sqrt1p"  # doc: c(x) = √(1 + x²), the arc length density.
