"""Dataset container and CSV ingestion with standardization."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConstantColumnError, ParseError


@dataclass(frozen=True)
class TaskDataset:
    """Feature matrix and per-task regression targets.

    X is n x p, Y is n x k with one column per task. Requires n >= k >= 1,
    p >= 1 and finite entries throughout.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if X.ndim != 2 or Y.ndim != 2:
            raise ValueError("X and Y must be 2-D arrays")
        if X.shape[0] != Y.shape[0]:
            raise ValueError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
        n, p = X.shape
        k = Y.shape[1]
        if not (n >= k >= 1):
            raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
        if p < 1:
            raise ValueError("need at least one feature")
        if not (np.isfinite(X).all() and np.isfinite(Y).all()):
            raise ValueError("X and Y must not contain NaN/Inf")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def k(self) -> int:
        return self.Y.shape[1]


def read_numeric_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a numeric CSV with a single header line.

    Returns (header, values). Raises ParseError with the offending
    row/column on any non-numeric cell or ragged row.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        rows: list[list[float]] = []
        for r, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {r} has {len(row)} cells, expected {len(header)}",
                    row=r,
                )
            parsed = []
            for c, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: cannot parse {cell!r} at row {r}, column {c + 1}",
                        row=r,
                        column=c + 1,
                    ) from None
            rows.append(parsed)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return header, np.asarray(rows, dtype=float)


def standardize_columns(values: np.ndarray) -> np.ndarray:
    """Transform each column to zero mean and unit (population) variance."""
    mean = values.mean(axis=0)
    std = values.std(axis=0)  # population variance, ddof=0
    bad = np.flatnonzero(std < 1e-12)
    if bad.size:
        raise ConstantColumnError(
            f"column(s) {bad.tolist()} are constant (std < 1e-12); cannot standardize"
        )
    return (values - mean) / std


def load_dataset(
    path: str | Path,
    feature_columns: list[int],
    task_columns: list[int],
    standardize: bool = True,
    add_bias: bool = False,
) -> TaskDataset:
    """Build a TaskDataset from a CSV file.

    Column indices are 0-based positions in the file. When `standardize`,
    every selected column is z-scored; when `add_bias`, an all-ones column
    is appended to the features after standardization so it survives.
    """
    if set(feature_columns) & set(task_columns):
        raise ValueError("feature and task columns must be disjoint")
    _, values = read_numeric_csv(path)
    X = values[:, feature_columns]
    Y = values[:, task_columns]
    if standardize:
        X = standardize_columns(X)
        Y = standardize_columns(Y)
    if add_bias:
        X = np.hstack([X, np.ones((X.shape[0], 1))])
    return TaskDataset(X=X, Y=Y)
