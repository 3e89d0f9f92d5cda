"""Exploratory summaries: equal-width histograms and Pearson correlations.

Both are emitted by the CLI as plot-ready CSV files; nothing here draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .ingest import Dataset


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram; the maximum value lands in the last bin."""

    column: str
    edges: np.ndarray   # (bins + 1,) strictly increasing
    counts: np.ndarray  # (bins,) int64

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise DataError("histogram edges must be strictly increasing")
        if self.counts.shape[0] + 1 != self.edges.shape[0]:
            raise DataError("histogram needs one more edge than bins")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self) -> str:
        lines = ["bin_left,bin_right,count"]
        for i, count in enumerate(self.counts):
            lines.append(
                f"{float(self.edges[i])!r},{float(self.edges[i + 1])!r},{int(count)}"
            )
        return "\n".join(lines) + "\n"


def histogram(values: np.ndarray, bins: int = 30, column: str = "") -> Histogram:
    """Histogram of a numeric column with equal-width bins over [min, max].

    A zero-range column degenerates to a single bin [min, min + 1).
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise DataError("histogram needs a non-empty 1-D column")
    if not np.all(np.isfinite(values)):
        raise DataError("histogram input must be finite")
    if bins < 1:
        raise DataError(f"bins must be >= 1, got {bins}")
    lo = float(values.min())
    hi = float(values.max())
    if lo == hi:
        edges = np.array([lo, lo + 1.0])
        counts = np.array([values.size], dtype=np.int64)
        return Histogram(column=column, edges=edges, counts=counts)
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    return Histogram(column=column, edges=edges, counts=counts.astype(np.int64))


@dataclass(frozen=True)
class CorrelationMatrix:
    """Pairwise Pearson correlations; NaN marks pairs with a constant column."""

    names: tuple[str, ...]
    values: np.ndarray  # (m, m), symmetric, NaN where undefined

    @property
    def undefined_columns(self) -> tuple[str, ...]:
        return tuple(
            name for i, name in enumerate(self.names)
            if math.isnan(self.values[i, i])
        )

    def pair(self, a: str, b: str) -> float:
        return float(self.values[self.names.index(a), self.names.index(b)])

    def to_csv(self) -> str:
        lines = ["column," + ",".join(self.names)]
        for i, name in enumerate(self.names):
            cells = ",".join(repr(float(v)) for v in self.values[i])
            lines.append(f"{name},{cells}")
        return "\n".join(lines) + "\n"


def correlation_matrix(data: Dataset, include_target: bool = True) -> CorrelationMatrix:
    """Pearson correlation over encoded features, optionally plus the target.

    Zero-variance columns yield NaN rows/columns instead of raising; the
    result flags them via `undefined_columns`.
    """
    matrix = data.X
    names = list(data.feature_names)
    if include_target:
        matrix = np.column_stack([matrix, data.y])
        names.append(data.target_name)
    if matrix.shape[1] == 0:
        raise DataError("correlation matrix needs at least one column")

    centered = matrix - matrix.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", centered, centered))
    with np.errstate(invalid="ignore", divide="ignore"):
        scaled = np.where(norms == 0.0, np.nan, norms)
        unit = centered / scaled
        corr = unit.T @ unit
    corr = np.clip(corr, -1.0, 1.0)
    defined = norms != 0.0
    diag = np.arange(corr.shape[0])
    corr[diag[defined], diag[defined]] = 1.0
    return CorrelationMatrix(names=tuple(names), values=corr)
