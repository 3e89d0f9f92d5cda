"""K-nearest-neighbor load-type classification.

A lazy learner: fitting stores the training matrix, prediction scans it
exactly (no index structures). Distances are Euclidean and the caller is
expected to standardize features first. Tie rules are fixed: equal distances
resolve to the lowest training-row index, and vote ties resolve to the label
of the nearest neighbor among the tied classes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError


@dataclass(frozen=True)
class KnnModel:
    """Stored training set plus the distance tag."""

    X: np.ndarray        # (n, p) float64, C-contiguous
    labels: np.ndarray   # (n,) int64 class ids
    distance: str = "euclidean"

    @property
    def n_train(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def fit_knn(X, labels) -> KnnModel:
    """Store the training matrix and labels after validation."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    labels = np.asarray(labels)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError(f"training matrix must be non-empty and 2-D, got {X.shape}")
    if labels.shape != (X.shape[0],):
        raise DataError("one label per training row is required")
    if not np.all(np.isfinite(X)):
        raise DataError("training matrix must be finite")
    if not np.issubdtype(labels.dtype, np.integer):
        raise DataError(f"labels must be integers, got dtype {labels.dtype}")
    if labels.min() < 0:
        raise DataError("labels must be non-negative class ids")
    return KnnModel(X=X.copy(), labels=labels.astype(np.int64, copy=True))


def _validate_queries(model: KnnModel, X) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DataError(
            f"queries must be 2-D with {model.n_features} columns, got shape {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise DataError("query points must be finite")
    return X


def _validate_k(model: KnnModel, k: int) -> None:
    if k < 1:
        raise DataError(f"k must be >= 1, got {k}")
    if k > model.n_train:
        raise DataError(f"k={k} exceeds the {model.n_train} stored training rows")


def neighbor_indices(model: KnnModel, X, k: int) -> np.ndarray:
    """(m, k) training-row indices ordered by (distance, index) per query."""
    queries = _validate_queries(model, X)
    _validate_k(model, k)
    return kernels.nearest_neighbors(model.X, queries, k)


def _vote(neighbor_labels: np.ndarray, n_classes: int) -> np.ndarray:
    """Majority vote over (m, k) neighbor labels sorted nearest-first.

    Ties go to the class of the nearest neighbor whose label is among the
    tied classes.
    """
    m = neighbor_labels.shape[0]
    counts = (neighbor_labels[:, :, np.newaxis] == np.arange(n_classes)).sum(axis=1)
    tied = counts == counts.max(axis=1, keepdims=True)
    eligible = np.take_along_axis(tied, neighbor_labels, axis=1)
    first = eligible.argmax(axis=1)
    return neighbor_labels[np.arange(m), first]


def predict_batch(model: KnnModel, X, k: int) -> np.ndarray:
    """Predicted class ids for each query row."""
    idx = neighbor_indices(model, X, k)
    n_classes = int(model.labels.max()) + 1
    return _vote(model.labels[idx], n_classes)


def predict_knn(model: KnnModel, x, k: int) -> int:
    """Predicted class id for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DataError(f"expected a single 1-D feature vector, got shape {x.shape}")
    return int(predict_batch(model, x[np.newaxis, :], k)[0])


@dataclass(frozen=True)
class KSweepResult:
    """Misclassification rates for k = 1..k_max on a fixed evaluation set."""

    ks: np.ndarray           # (k_max,) = 1..k_max
    error_rates: np.ndarray  # (k_max,) in [0, 1]
    best_k: int              # argmin, smallest k on ties

    def to_csv(self) -> str:
        lines = ["k,error_rate"]
        for k, rate in zip(self.ks, self.error_rates):
            lines.append(f"{int(k)},{float(rate)!r}")
        return "\n".join(lines) + "\n"


def k_sweep(model: KnnModel, X_eval, y_eval, k_max: int = 40) -> KSweepResult:
    """Evaluate k = 1..k_max in one pass over the neighbor lists."""
    queries = _validate_queries(model, X_eval)
    if queries.shape[0] == 0:
        raise DataError("k sweep needs a non-empty evaluation set")
    y_eval = np.asarray(y_eval)
    if y_eval.shape != (queries.shape[0],):
        raise DataError("one evaluation label per query row is required")
    _validate_k(model, k_max)

    idx = kernels.nearest_neighbors(model.X, queries, k_max)
    neighbor_labels = model.labels[idx]
    n_classes = int(max(model.labels.max(), y_eval.max())) + 1
    m = queries.shape[0]
    cumulative = (neighbor_labels[:, :, np.newaxis] == np.arange(n_classes)).cumsum(axis=1)

    rates = np.empty(k_max)
    rows = np.arange(m)
    for k in range(1, k_max + 1):
        counts = cumulative[:, k - 1, :]
        tied = counts == counts.max(axis=1, keepdims=True)
        eligible = np.take_along_axis(tied, neighbor_labels[:, :k], axis=1)
        first = eligible.argmax(axis=1)
        predicted = neighbor_labels[rows, first]
        rates[k - 1] = float(np.mean(predicted != y_eval))
    best_k = int(np.argmin(rates)) + 1
    return KSweepResult(ks=np.arange(1, k_max + 1), error_rates=rates, best_k=best_k)
