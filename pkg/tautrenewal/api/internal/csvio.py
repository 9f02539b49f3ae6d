"""
CSV rendering shared by all artifact writers.

Floats are written with 17 significant digits, which round-trips IEEE doubles,
so identical inputs give byte-identical files.
"""
import csv
import os
from typing import Any, Iterable, List, Sequence, Tuple, Union

PathLike = Union[str, "os.PathLike[str]"]


def format_float(value: float) -> str:
    """Render a float with 17 significant digits.

    >>> format_float(0.1)
    '0.10000000000000001'
    >>> format_float(2.0)
    '2'
    """
    return format(float(value), ".17g")


def _render(cell: Any) -> str:
    if isinstance(cell, bool):
        return str(cell).lower()
    if isinstance(cell, int):
        return str(cell)
    if isinstance(cell, float):
        return format_float(cell)
    return str(cell)


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write a CSV file with ``\\n`` line endings."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_render(cell) for cell in row])


def read_rows(path: PathLike) -> Tuple[List[str], List[List[str]]]:
    """Read a CSV file as header and raw string rows."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return [], []
        return header, [row for row in reader if row]
