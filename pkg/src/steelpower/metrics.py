"""Evaluation metrics: MAE, MSE, RMSE, R^2, and classification accuracy.

The evaluation table reports an "accuracy score" per model: R^2 for the
regressors and match fraction for the classifier.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError


def _check_pair(y_true, y_pred) -> tuple[np.ndarray, np.ndarray]:
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.ndim != 1 or y_true.shape != y_pred.shape:
        raise DataError(
            f"metric inputs must be matching 1-D arrays, got {y_true.shape} vs {y_pred.shape}"
        )
    if y_true.size == 0:
        raise DataError("metric inputs must be non-empty")
    if not np.all(np.isfinite(y_true)) or not np.all(np.isfinite(y_pred)):
        raise DataError("metric inputs must be finite")
    return y_true, y_pred


def mae(y_true, y_pred) -> float:
    """Mean absolute error."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    return float(np.mean(np.abs(y_true - y_pred)))


def mse(y_true, y_pred) -> float:
    """Mean squared error."""
    y_true, y_pred = _check_pair(y_true, y_pred)
    diff = y_true - y_pred
    return float(np.mean(diff * diff))


def rmse(y_true, y_pred) -> float:
    """Root mean squared error."""
    return math.sqrt(mse(y_true, y_pred))


def r_squared(y_true, y_pred) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot.

    Undefined (an error) when y_true has zero variance.
    """
    y_true, y_pred = _check_pair(y_true, y_pred)
    centered = y_true - y_true.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        raise DataError("R^2 is undefined for a zero-variance target")
    resid = y_true - y_pred
    return 1.0 - float(resid @ resid) / ss_tot


def accuracy(y_true, y_pred) -> float:
    """Fraction of exact matches between integer label arrays."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.ndim != 1 or y_true.shape != y_pred.shape:
        raise DataError(
            f"accuracy inputs must be matching 1-D arrays, got {y_true.shape} vs {y_pred.shape}"
        )
    if y_true.size == 0:
        raise DataError("accuracy inputs must be non-empty")
    return float(np.mean(y_true == y_pred))


@dataclass(frozen=True)
class MetricsReport:
    """One model's evaluation row; None marks a metric that does not apply."""

    model: str
    mae: float
    mse: float
    rmse: float
    r_squared: float | None = None
    accuracy: float | None = None

    def __post_init__(self):
        if self.rmse + 1e-12 < self.mae:
            raise DataError("MAE cannot exceed RMSE")
        if not math.isclose(self.rmse * self.rmse, self.mse,
                            rel_tol=1e-9, abs_tol=1e-300):
            raise DataError("RMSE must be the square root of MSE")

    @property
    def accuracy_score(self) -> float | None:
        """R^2 for regressors, match fraction for classifiers."""
        return self.accuracy if self.accuracy is not None else self.r_squared

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "mae": self.mae,
            "mse": self.mse,
            "rmse": self.rmse,
            "r_squared": self.r_squared,
            "accuracy": self.accuracy,
        }


def evaluate_regression(model_name: str, y_true, y_pred) -> MetricsReport:
    """All regression metrics for one prediction vector."""
    return MetricsReport(
        model=model_name,
        mae=mae(y_true, y_pred),
        mse=mse(y_true, y_pred),
        rmse=rmse(y_true, y_pred),
        r_squared=r_squared(y_true, y_pred),
    )


def evaluate_classification(model_name: str, y_true, y_pred) -> MetricsReport:
    """Accuracy plus error magnitudes on the ordinal class ids."""
    return MetricsReport(
        model=model_name,
        mae=mae(y_true, y_pred),
        mse=mse(y_true, y_pred),
        rmse=rmse(y_true, y_pred),
        accuracy=accuracy(y_true, y_pred),
    )


def metrics_json(reports: list[MetricsReport]) -> str:
    payload = {report.model: report.to_dict() for report in reports}
    return json.dumps(payload, indent=2) + "\n"


def metrics_table(reports: list[MetricsReport]) -> str:
    """Fixed-width text table with one row per model."""
    headers = ("Model", "Accuracy Score", "MAE", "MSE", "RMSE")
    rows = []
    for report in reports:
        score = report.accuracy_score
        rows.append((
            report.model,
            "" if score is None else f"{score:.6f}",
            f"{report.mae:.6f}",
            f"{report.mse:.6f}",
            f"{report.rmse:.6f}",
        ))
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in rows)) if rows else len(headers[i])
        for i in range(len(headers))
    ]
    def fmt(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    lines = [fmt(headers), fmt(tuple("-" * w for w in widths))]
    lines.extend(fmt(row) for row in rows)
    return "\n".join(lines) + "\n"
