"""
A set of utility functions allowing to convert
a string to a valid penalty or law.

Strings have the form ``<kind>[:<p1>[,<p2>…]]``, for example
``quadratic``, ``power:4`` or ``gaussian:5,1``.
"""
from typing import Any, Callable, Dict, List, Sequence, Tuple

from tautrenewal.api.error import InvalidArgumentError
from tautrenewal.api.pathkit import PenaltyKind, PenaltySpec
from tautrenewal.api.renewal import Law, LawKind


def _split(val: str) -> Tuple[str, Tuple[float, ...]]:
    if not isinstance(val, str):
        raise ValueError(f"value {val} is not a string")
    kind, _, params = val.strip().partition(":")
    if not params:
        return kind, ()
    try:
        return kind, tuple(float(p) for p in params.split(","))
    except ValueError:
        raise ValueError(f"parameters of {val!r} are not numbers") from None


def _penalty(kind: PenaltyKind, params: Tuple[float, ...]) -> PenaltySpec:
    if kind is PenaltyKind.Power:
        if len(params) != 1:
            raise ValueError("power penalty takes exactly one exponent")
        return PenaltySpec.power(params[0])
    if params:
        raise ValueError(f"{kind.value} penalty takes no parameters")
    return PenaltySpec(kind)


def _convert(
    val: Any, enum_type: Any, build: Callable[[Any, Tuple[float, ...]], Any], what: str
) -> Any:
    if not isinstance(val, str):
        raise ValueError(f"value {val} is not a string")
    try:
        name, params = _split(val)
        kind = enum_type.from_string(name, ignore_case=True)
        return build(kind, params)
    except (ValueError, InvalidArgumentError) as exp:
        raise ValueError(f'"{val}" is not convertible to {what}: {exp}') from None


def convert_penalty(val: Any) -> PenaltySpec:
    """Convert a string to a penalty.

    Args:
        val: Penalty string such as ``quadratic``, ``power:4`` or ``sqrt1p``.
            A :class:`PenaltySpec` is accepted too.
    Return:
        Penalty.
    Raises:
        :class:`ValueError`: Unknown kind or bad parameters.
    """
    if isinstance(val, PenaltySpec):
        return val
    return _convert(val, PenaltyKind, _penalty, "penalty")


def convert_penalties(values: Sequence[Any]) -> List[PenaltySpec]:
    """Convert penalty strings, dropping repeats and keeping order."""
    penalties: Dict[PenaltySpec, None] = {}
    for val in values:
        penalties[convert_penalty(val)] = None
    return list(penalties)


def convert_law(val: Any) -> Law:
    """Convert a string to a law.

    Args:
        val: Law string such as ``exponential:1``, ``gaussian:5,1``,
            ``gamma:2,0.5`` or ``uniform:0,2``. A :class:`Law` is accepted too.
    Return:
        Law.
    Raises:
        :class:`ValueError`: Unknown kind or bad parameters.
    """
    if isinstance(val, Law):
        return val
    return _convert(val, LawKind, Law, "law")
