"""CSV input for distance matrices and point clouds."""

from __future__ import annotations

import csv
import io
import sys
from pathlib import Path

import numpy as np

from .errors import InputError
from .metric import FiniteMetricSpace, from_points, validate_metric

METRICS = ("euclidean", "l1", "circle", "circle-geodesic")


def _rows(text: str) -> list[list[str]]:
    delim = next((d for d in (",", "\t", ";") if d in text), None)
    if delim is None:
        rows = [line.split() for line in text.splitlines()]
    else:
        rows = [[c.strip() for c in row] for row in csv.reader(io.StringIO(text), delimiter=delim)]
    return [r for r in rows if any(c for c in r)]


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_table(text: str) -> tuple[list[str] | None, np.ndarray]:
    """Numeric CSV with an optional header row; returns ``(header, values)``."""
    rows = _rows(text)
    if not rows:
        raise InputError("input is empty")
    header = None
    if not all(_is_number(c) for c in rows[0]):
        header, rows = rows[0], rows[1:]
    if not rows:
        raise InputError("input has a header but no data")
    width = len(rows[0])
    for k, r in enumerate(rows):
        if len(r) != width:
            raise InputError(f"row {k + 1} has {len(r)} fields, expected {width}", k + 1)
        bad = [c for c in r if not _is_number(c)]
        if bad:
            raise InputError(f"row {k + 1}: non-numeric field {bad[0]!r}", k + 1)
    return header, np.array([[float(c) for c in r] for r in rows], dtype=np.float64)


def parse_input(path, points: bool = False, metric: str = "euclidean", pseudo: bool = False) -> FiniteMetricSpace:
    """Read a square distance matrix or, with ``points``, a point cloud under ``metric``.

    ``circle`` reads the first column as a coordinate on R/Z (reduced mod 1).
    """
    try:
        text = Path(path).read_text() if str(path) != "-" else sys.stdin.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    header, table = parse_table(text)
    if points:
        if metric not in METRICS:
            raise InputError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")
        return from_points(table, metric, pseudo=pseudo)
    if table.shape[0] != table.shape[1]:
        raise InputError(f"distance matrix is {table.shape[0]}x{table.shape[1]}, not square (point cloud? pass --points)")
    labels = header if header is not None and len(header) == table.shape[0] else None
    return validate_metric(table, pseudo=pseudo, labels=labels)


def write_matrix(path, D) -> None:
    np.savetxt(path, np.asarray(D), delimiter=",", fmt="%.17g")
