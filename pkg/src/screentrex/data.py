"""Dataset model, CSV ingestion and column standardization.

Columns are scaled to unit Euclidean norm (not unit variance) so that the
correlations compared by the path solver are plain inner products.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantColumnError, DataFormatError

_TOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Immutable predictor matrix / response pair with column labels."""

    x: np.ndarray
    y: np.ndarray
    labels: tuple[str, ...]

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "labels", tuple(self.labels))
        if x.ndim != 2 or y.ndim != 1:
            raise DataFormatError("x must be a 2-D matrix and y a 1-D vector")
        n, p = x.shape
        if n < 3 or p < 1:
            raise DataFormatError(f"need n >= 3 and p >= 1, got n={n}, p={p}")
        if y.shape[0] != n:
            raise DataFormatError(
                f"dimension mismatch: x has {n} rows but y has {y.shape[0]} values"
            )
        if not np.all(np.isfinite(x)):
            raise DataFormatError("x contains non-finite entries")
        if not np.all(np.isfinite(y)):
            raise DataFormatError("y contains non-finite entries")
        if len(self.labels) != p:
            raise DataFormatError(
                f"{len(self.labels)} labels for {p} columns"
            )
        if len(set(self.labels)) != p:
            raise DataFormatError("labels are not unique")
        x.setflags(write=False)
        y.setflags(write=False)


@dataclass(frozen=True)
class StandardizedDataset:
    """Zero-mean, unit-norm predictor columns plus a centered response.

    `scale` and `mean` store the per-column original norms/means so the
    transformation is invertible.
    """

    x_std: np.ndarray
    y_c: np.ndarray
    scale: np.ndarray
    mean: np.ndarray
    labels: tuple[str, ...] = field(default=())

    @property
    def n(self) -> int:
        return self.x_std.shape[0]

    @property
    def p(self) -> int:
        return self.x_std.shape[1]

    def as_dataset(self) -> Dataset:
        return Dataset(self.x_std, self.y_c, self.labels)

    def __post_init__(self):
        for name in ("x_std", "y_c", "scale", "mean"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"V{j + 1}" for j in range(self.p))
            )


def _parse_numeric_rows(path, header: bool):
    """Read a CSV into a list of float rows, reporting the bad cell on failure."""
    rows = []
    labels = None
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue
            if header and labels is None:
                labels = [cell.strip() for cell in row]
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                bad = next(
                    j for j, cell in enumerate(row)
                    if not _is_float(cell)
                )
                raise DataFormatError(
                    f"{path}: non-numeric cell at row {i + 1}, column {bad + 1}: "
                    f"{row[bad]!r}"
                ) from None
    if not rows:
        raise DataFormatError(f"{path}: empty file")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise DataFormatError(
                f"{path}: ragged CSV, row {i + 1} has {len(row)} cells, "
                f"expected {width}"
            )
    return np.asarray(rows, dtype=float), labels


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_csv(x_path, y_path, header: bool = False) -> Dataset:
    """Load predictors and response from two CSV files.

    The y file must be a single column with exactly as many values as x has
    rows. Labels come from the x header row when `header` is true, otherwise
    they are generated as V1..Vp.
    """
    x, labels = _parse_numeric_rows(x_path, header)
    y_mat, _ = _parse_numeric_rows(y_path, header=False)
    if y_mat.shape[1] != 1:
        raise DataFormatError(
            f"{y_path}: response file must be a single column, got "
            f"{y_mat.shape[1]} columns"
        )
    y = y_mat[:, 0]
    if y.shape[0] != x.shape[0]:
        raise DataFormatError(
            f"dimension mismatch: {x_path} has {x.shape[0]} rows but "
            f"{y_path} has {y.shape[0]} values"
        )
    if labels is None:
        labels = [f"V{j + 1}" for j in range(x.shape[1])]
    if len(labels) != x.shape[1]:
        raise DataFormatError(
            f"{x_path}: header has {len(labels)} names for {x.shape[1]} columns"
        )
    return Dataset(x, y, tuple(labels))


def standardize(d: Dataset) -> StandardizedDataset:
    """Center each column and response, scale columns to unit Euclidean norm."""
    mean = d.x.mean(axis=0)
    centered = d.x - mean
    scale = np.linalg.norm(centered, axis=0)
    zero = np.flatnonzero(scale <= _TOL * (1.0 + np.abs(mean)))
    if zero.size:
        j = int(zero[0])
        raise ConstantColumnError(j, d.labels[j])
    x_std = centered / scale
    y_c = d.y - d.y.mean()
    return StandardizedDataset(x_std, y_c, scale, mean, d.labels)


def standardize_columns(x: np.ndarray) -> np.ndarray:
    """Standardize a raw matrix (zero-mean, unit-norm columns) without metadata."""
    mean = x.mean(axis=0)
    centered = x - mean
    scale = np.linalg.norm(centered, axis=0)
    if np.any(scale <= _TOL):
        raise ConstantColumnError(int(np.flatnonzero(scale <= _TOL)[0]))
    return centered / scale
