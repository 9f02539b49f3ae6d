from enum_tools import document_enum

from ..enum import TautEnum


@document_enum
class ExtremumKind(TautEnum):
    """Kind of an h-extremum. Odd-indexed ones are minima."""

    Minimum = "min"  # doc: Followed by a rise of height h.
    Maximum = "max"  # doc: Followed by a fall of height h.
