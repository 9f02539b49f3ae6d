from enum_tools import document_enum

from ..enum import TautEnum


@document_enum
class Side(TautEnum):
    """Tube boundary touched by a knot."""

    Upper = "U"  # doc: The string touches w + h/2.
    Lower = "L"  # doc: The string touches w − h/2.


@document_enum
class BoundaryKind(TautEnum):
    """Boundary handling at one end of the tube."""

    Fixed = "fixed"  # doc: The string value at the end is prescribed.
    Free = "free"  # doc: Any value inside the tube is admissible, at no cost.
