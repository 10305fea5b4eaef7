"""Delimited-output helpers shared by the sweep, bench, and report writers."""

from __future__ import annotations

import csv
import importlib.metadata
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

__all__ = ["format_cell", "write_csv", "library_version"]


def format_cell(value: Any) -> str:
    """Canonical text form of one CSV cell.

    ``None`` becomes the empty cell, integers print exactly, and floats use 17
    significant digits so the written value round-trips bit-exactly.
    """
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write rows with a fixed header, LF line endings, and canonical cells."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])


def library_version() -> str:
    """Installed package version, or a placeholder when not installed."""
    try:
        return importlib.metadata.version("irsphase")
    except importlib.metadata.PackageNotFoundError:
        return "0.0.0"
