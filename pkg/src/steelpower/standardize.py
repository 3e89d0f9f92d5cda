"""Z-score standardization fit on training data only.

x' = (x - mean) / std with the population standard deviation (divide by n).
Constant columns are flagged at fit time and transform to all zeros rather
than dividing by zero.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .ingest import Dataset


@dataclass(frozen=True)
class StandardizationParams:
    """Per-column means and population stds, with a constant-column flag."""

    mean: np.ndarray
    std: np.ndarray
    constant: np.ndarray  # bool per column

    def __post_init__(self):
        if not (self.mean.shape == self.std.shape == self.constant.shape):
            raise DataError("standardization params must have matching shapes")
        if np.any(self.std[~self.constant] <= 0.0):
            raise DataError("non-constant columns must have positive std")

    @property
    def n_columns(self) -> int:
        return self.mean.shape[0]

    def to_json(self) -> str:
        payload = {
            "mean": [float(v) for v in self.mean],
            "std": [float(v) for v in self.std],
            "constant": [bool(v) for v in self.constant],
        }
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "StandardizationParams":
        payload = json.loads(text)
        return cls(
            mean=np.asarray(payload["mean"], dtype=np.float64),
            std=np.asarray(payload["std"], dtype=np.float64),
            constant=np.asarray(payload["constant"], dtype=bool),
        )


def fit_columns(X: np.ndarray) -> StandardizationParams:
    """Fit per-column parameters on a 2-D array (training rows only)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DataError("standardizer needs a non-empty 2-D array")
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # ddof=0: population convention
    constant = std == 0.0
    if constant.any():
        warnings.warn(
            f"{int(constant.sum())} constant column(s) will standardize to zero",
            stacklevel=2,
        )
    return StandardizationParams(mean=mean, std=std, constant=constant)


def transform_columns(params: StandardizationParams, X: np.ndarray) -> np.ndarray:
    """Apply fitted parameters to any array with the same column count."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.n_columns:
        raise DataError(
            f"expected {params.n_columns} columns, got array of shape {X.shape}"
        )
    safe_std = np.where(params.constant, 1.0, params.std)
    out = (X - params.mean) / safe_std
    if params.constant.any():
        out[:, params.constant] = 0.0
    return out


def fit_standardizer(train: Dataset) -> StandardizationParams:
    """Fit feature standardization on a training Dataset."""
    return fit_columns(train.X)


def transform(params: StandardizationParams, data: Dataset) -> Dataset:
    """Return a Dataset whose features are standardized by `params`."""
    return Dataset(
        X=transform_columns(params, data.X),
        y=data.y,
        labels=data.labels,
        feature_names=data.feature_names,
        target_name=data.target_name,
    )


@dataclass(frozen=True)
class TargetScaler:
    """Mean/std pair for standardizing the regression target."""

    mean: float
    std: float

    def forward(self, y: np.ndarray) -> np.ndarray:
        return (y - self.mean) / self.std

    def inverse(self, y: np.ndarray) -> np.ndarray:
        return y * self.std + self.mean


def fit_target_scaler(y: np.ndarray) -> TargetScaler:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size == 0:
        raise DataError("target scaler needs a non-empty 1-D array")
    std = float(y.std())
    if std == 0.0:
        raise DataError("target is constant; standardizing it is undefined")
    return TargetScaler(mean=float(y.mean()), std=std)
