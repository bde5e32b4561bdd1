"""CSV ingestion for training sets and query vectors.

Dataset rows are ``label, x_1, ..., x_n`` with labels exactly -1 or +1. A
first row whose first cell is not numeric is treated as a header.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .svm import TrainingSet


class DatasetError(ValueError):
    """Malformed input file; the message names the offending line."""


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_rows(path) -> list[tuple[int, list[float]]]:
    """Return ``(line_number, values)`` for every data row in a CSV file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DatasetError(f"{path}: file not found") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise DatasetError(f"{path}: cannot read ({exc})") from None
    rows = []
    width = None
    for lineno, cells in enumerate(csv.reader(text.splitlines()), start=1):
        cells = [c.strip() for c in cells]
        if not any(cells):
            continue
        if not rows and width is None and not _is_number(cells[0]):
            width = len(cells)  # header
            continue
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise DatasetError(f"{path}:{lineno}: non-numeric cell in {cells!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise DatasetError(f"{path}:{lineno}: non-finite value")
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise DatasetError(f"{path}:{lineno}: expected {width} columns, found {len(values)}")
        rows.append((lineno, values))
    if not rows:
        raise DatasetError(f"{path}: no data rows")
    return rows


def load_dataset(path) -> TrainingSet:
    rows = read_rows(path)
    if len(rows[0][1]) < 2:
        raise DatasetError(f"{path}:{rows[0][0]}: need a label column and at least one feature")
    for lineno, values in rows:
        if values[0] not in (-1.0, 1.0):
            raise DatasetError(f"{path}:{lineno}: label {values[0]!r} is not -1 or +1")
    data = np.array([v for _, v in rows])
    try:
        return TrainingSet(data[:, 1:], data[:, 0])
    except ValueError as exc:
        raise DatasetError(f"{path}: {exc}") from None


def parse_queries(text: str, n: int) -> tuple[np.ndarray, list[float | None]]:
    """Queries from a CSV path or an inline ``"x1,x2;y1,y2"`` string.

    CSV rows with ``n + 1`` columns carry a leading label, which is returned
    alongside the vectors (``None`` where absent).
    """
    if Path(text).is_file():
        rows = read_rows(text)
        vectors, labels = [], []
        for lineno, values in rows:
            if len(values) == n + 1:
                labels.append(values[0])
                vectors.append(values[1:])
            elif len(values) == n:
                labels.append(None)
                vectors.append(values)
            else:
                raise DatasetError(f"{text}:{lineno}: query has {len(values)} columns, model expects {n}")
        return np.array(vectors, dtype=float), labels
    vectors = []
    for i, chunk in enumerate(s for s in text.split(";") if s.strip()):
        try:
            vec = [float(c) for c in chunk.split(",")]
        except ValueError:
            raise DatasetError(f"query {i + 1}: cannot parse {chunk!r} (and no such file)") from None
        if len(vec) != n:
            raise DatasetError(f"query {i + 1}: has {len(vec)} features, model expects {n}")
        vectors.append(vec)
    if not vectors:
        raise DatasetError("no queries given")
    return np.array(vectors, dtype=float), [None] * len(vectors)
