"""Linear models: OLS, ridge, and LASSO with regularization paths.

All three fit an intercept by centering: the slope problem is solved on
(X - mean(X), y - mean(y)) and the intercept recovered as
mean(y) - mean(X) @ beta.

Objectives use plain sums (no 1/n or 1/(2n) factor):

    ridge:  sum((y - Xb)^2) + lam * sum(b^2)
    lasso:  sum((y - Xb)^2) + lam * sum(|b|)

so lambda here corresponds to 2 * n * alpha in toolkits that scale the
residual term by 1/(2n). The LASSO is solved by cyclic coordinate descent
with the update b_j <- S(rho_j, lam/2) / z_j, where z_j is the column squared
norm; the sweep kernel lives in `kernels` (compiled when available).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .errors import DataError, NumericError, SingularMatrixError
from .linalg import min_norm_lstsq, spd_solve, sym_rcond

RCOND_THRESHOLD = 1e-12
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class LinearModel:
    """Fitted linear predictor: y_hat = intercept + X @ coef."""

    method: str
    lam: float
    intercept: float
    coef: np.ndarray

    @property
    def n_features(self) -> int:
        return self.coef.shape[0]

    def to_json(self, feature_names: tuple[str, ...] | None = None) -> str:
        payload: dict = {
            "method": self.method,
            "lambda": self.lam,
            "intercept": self.intercept,
            "coefficients": [float(v) for v in self.coef],
        }
        if feature_names is not None:
            if len(feature_names) != self.n_features:
                raise DataError("one feature name per coefficient is required")
            payload["feature_names"] = list(feature_names)
        return json.dumps(payload, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        payload = json.loads(text)
        return cls(
            method=payload["method"],
            lam=float(payload["lambda"]),
            intercept=float(payload["intercept"]),
            coef=np.asarray(payload["coefficients"], dtype=np.float64),
        )


@dataclass(frozen=True)
class FitDiagnostics:
    """Solver trace for the iterative fits."""

    iterations: int
    max_change: float
    converged: bool
    objective: float


def _validate_xy(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"X must be 2-D, got shape {X.shape}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DataError(
            f"y must be 1-D with one entry per row of X, got {y.shape} vs {X.shape}"
        )
    if X.shape[1] == 0:
        raise DataError("X needs at least one feature column")
    if X.shape[0] < 2:
        raise DataError("fitting needs at least 2 rows")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise DataError("X and y must be finite")
    return X, y


def _center(X: np.ndarray, y: np.ndarray):
    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    return X - x_mean, y - y_mean, x_mean, y_mean


def soft_threshold(value, threshold):
    """S(v, t) = sign(v) * max(|v| - t, 0); works on scalars and arrays."""
    if np.any(np.asarray(threshold) < 0):
        raise DataError("soft threshold must be non-negative")
    shrunk = np.maximum(np.abs(value) - threshold, 0.0)
    result = np.sign(value) * shrunk
    return float(result) if np.isscalar(value) else result


def lambda_max(X, y) -> float:
    """Smallest penalty at which the LASSO solution is exactly zero.

    Equals 2 * max_j |x_j . y| on centered data; at or above this value the
    first coordinate sweep leaves every coefficient at zero. The dots are
    taken column by column on a Fortran-ordered copy — the same contiguous
    dot products the sweep kernels evaluate — so the threshold is exact at
    the floating-point level, not just mathematically.
    """
    X, y = _validate_xy(X, y)
    Xc, yc, _, _ = _center(X, y)
    Xf = np.asfortranarray(Xc)
    best = 0.0
    for j in range(Xf.shape[1]):
        best = max(best, abs(float(Xf[:, j] @ yc)))
    return 2.0 * best


def fit_ols(X, y, rank_policy: str = "error") -> LinearModel:
    """Ordinary least squares via centered normal equations.

    A reciprocal condition estimate below 1e-12 means the normal equations
    cannot be trusted; the default policy raises and suggests ridge, while
    rank_policy="min_norm" switches to the SVD minimum-norm solution (the
    conventional behavior for design matrices with a complete one-hot block).
    """
    if rank_policy not in ("error", "min_norm"):
        raise DataError(f"unknown rank_policy {rank_policy!r}")
    X, y = _validate_xy(X, y)
    n, p = X.shape
    if n <= p:
        raise DataError(f"OLS needs more rows than features, got {n} rows for {p} features")
    Xc, yc, x_mean, y_mean = _center(X, y)
    gram = Xc.T @ Xc
    rcond = sym_rcond(gram)
    if rcond < RCOND_THRESHOLD:
        if rank_policy == "error":
            raise SingularMatrixError(
                f"normal equations are ill-conditioned (rcond={rcond:.3e}); "
                "consider ridge (lambda > 0) or rank_policy='min_norm'"
            )
        beta = min_norm_lstsq(Xc, yc)
    else:
        beta = spd_solve(gram, Xc.T @ yc)
    intercept = y_mean - float(x_mean @ beta)
    return LinearModel(method="ols", lam=0.0, intercept=intercept, coef=beta)


def fit_ridge(X, y, lam: float, rank_policy: str = "error") -> LinearModel:
    """Ridge regression, closed form on centered data; intercept unpenalized.

    lam = 0 delegates to the OLS path and inherits its error conditions.
    """
    if lam < 0:
        raise DataError(f"ridge penalty must be >= 0, got {lam}")
    if lam == 0:
        ols = fit_ols(X, y, rank_policy=rank_policy)
        return LinearModel(method="ridge", lam=0.0,
                           intercept=ols.intercept, coef=ols.coef)
    X, y = _validate_xy(X, y)
    Xc, yc, x_mean, y_mean = _center(X, y)
    gram = Xc.T @ Xc
    gram[np.diag_indices_from(gram)] += lam
    beta = spd_solve(gram, Xc.T @ yc)
    intercept = y_mean - float(x_mean @ beta)
    return LinearModel(method="ridge", lam=float(lam), intercept=intercept, coef=beta)


def fit_lasso(
    X,
    y,
    lam: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    warm_start: np.ndarray | None = None,
    on_sweep: Callable[[int, np.ndarray, np.ndarray, float], None] | None = None,
) -> tuple[LinearModel, FitDiagnostics]:
    """LASSO by cyclic coordinate descent on centered data.

    Stops when the largest coefficient change in a full sweep drops below
    tol, or after max_iter sweeps (reported via diagnostics.converged; never
    an exception). Zero-variance columns keep a zero coefficient. on_sweep,
    when given, is called after every sweep with (sweep_number, beta,
    residual, max_change); the arrays are live views and must not be mutated.
    """
    if lam < 0:
        raise DataError(f"lasso penalty must be >= 0, got {lam}")
    if tol <= 0 or max_iter < 1:
        raise DataError("tol must be positive and max_iter at least 1")
    X, y = _validate_xy(X, y)
    p = X.shape[1]
    Xc, yc, x_mean, y_mean = _center(X, y)
    Xf = np.asfortranarray(Xc)
    col_sq = np.einsum("ij,ij->j", Xc, Xc)

    if warm_start is not None:
        beta = np.array(warm_start, dtype=np.float64, copy=True)
        if beta.shape != (p,):
            raise DataError(f"warm start must have shape ({p},), got {beta.shape}")
        beta[col_sq == 0.0] = 0.0
        residual = yc - Xf @ beta
    else:
        beta = np.zeros(p)
        residual = yc.copy()

    thr = lam / 2.0
    iterations = 0
    max_change = np.inf
    converged = False
    for sweep in range(1, max_iter + 1):
        max_change = kernels.lasso_sweep(Xf, residual, beta, col_sq, thr)
        iterations = sweep
        if on_sweep is not None:
            on_sweep(sweep, beta, residual, max_change)
        if max_change < tol:
            converged = True
            break

    # refresh the residual once: the in-place updates accumulate rounding
    residual = yc - Xf @ beta
    objective = float(residual @ residual + lam * np.abs(beta).sum())
    intercept = y_mean - float(x_mean @ beta)
    model = LinearModel(method="lasso", lam=float(lam), intercept=intercept, coef=beta)
    diag = FitDiagnostics(iterations=iterations, max_change=float(max_change),
                          converged=converged, objective=objective)
    return model, diag


def lasso_kkt_violation(X, y, model: LinearModel) -> float:
    """Largest violation of the LASSO stationarity conditions.

    For each coordinate, g_j = 2 x_j . r on centered data must satisfy
    |g_j| <= lam when beta_j = 0 and g_j = lam * sign(beta_j) otherwise;
    the return value is the worst absolute excess.
    """
    X, y = _validate_xy(X, y)
    Xc, yc, _, _ = _center(X, y)
    g = 2.0 * (Xc.T @ (yc - Xc @ model.coef))
    zero = model.coef == 0.0
    viol_zero = np.maximum(np.abs(g[zero]) - model.lam, 0.0)
    viol_active = np.abs(g[~zero] - model.lam * np.sign(model.coef[~zero]))
    worst = 0.0
    if viol_zero.size:
        worst = max(worst, float(viol_zero.max()))
    if viol_active.size:
        worst = max(worst, float(viol_active.max()))
    return worst


def predict(model: LinearModel, X) -> np.ndarray:
    """Evaluate intercept + X @ coef."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise DataError(
            f"expected 2-D X with {model.n_features} columns, got shape {X.shape}"
        )
    return model.intercept + X @ model.coef


@dataclass(frozen=True)
class RegularizationPath:
    """Coefficients along a decreasing geometric penalty grid."""

    method: str
    lambdas: np.ndarray      # (g,), strictly decreasing
    coefs: np.ndarray        # (g, p)
    intercepts: np.ndarray   # (g,)
    converged: np.ndarray    # (g,) bool; all True for ridge
    iterations: np.ndarray   # (g,) sweeps used; zeros for ridge

    def __post_init__(self):
        if np.any(np.diff(self.lambdas) >= 0):
            raise DataError("path lambdas must strictly decrease")

    @property
    def grid_size(self) -> int:
        return self.lambdas.shape[0]

    def n_nonzero(self) -> np.ndarray:
        return (self.coefs != 0.0).sum(axis=1)

    def to_csv(self, feature_names: tuple[str, ...] | None = None) -> str:
        p = self.coefs.shape[1]
        names = feature_names if feature_names is not None else tuple(
            f"x{j}" for j in range(p)
        )
        if len(names) != p:
            raise DataError("one feature name per path column is required")
        lines = ["lambda," + ",".join(names)]
        for i in range(self.grid_size):
            row = ",".join(repr(float(v)) for v in self.coefs[i])
            lines.append(f"{float(self.lambdas[i])!r},{row}")
        return "\n".join(lines) + "\n"


def lambda_grid(lambda_hi: float, grid_size: int, lambda_min_ratio: float) -> np.ndarray:
    """Geometric grid from lambda_hi down to lambda_hi * lambda_min_ratio."""
    if lambda_hi <= 0 or not np.isfinite(lambda_hi):
        raise NumericError(f"grid anchor must be positive and finite, got {lambda_hi}")
    if grid_size < 2:
        raise DataError(f"grid_size must be >= 2, got {grid_size}")
    if not 0.0 < lambda_min_ratio < 1.0:
        raise DataError(f"lambda_min_ratio must lie in (0, 1), got {lambda_min_ratio}")
    exponents = np.arange(grid_size) / (grid_size - 1)
    return lambda_hi * lambda_min_ratio ** exponents


def regularization_path(
    X,
    y,
    method: str,
    grid_size: int = 100,
    lambda_min_ratio: float = 1e-4,
    lambda_hi: float | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> RegularizationPath:
    """Ridge or LASSO coefficients along a geometric penalty grid.

    The grid anchors at lambda_max(X, y) unless lambda_hi overrides it. The
    LASSO is solved warm-starting each grid point from the previous one, so
    the first (largest) point is exactly zero when anchored at lambda_max.
    """
    if method not in ("ridge", "lasso"):
        raise DataError(f"path method must be 'ridge' or 'lasso', got {method!r}")
    X, y = _validate_xy(X, y)
    if lambda_hi is None:
        lambda_hi = lambda_max(X, y)
        if lambda_hi == 0.0:
            raise NumericError(
                "lambda_max is zero (no column correlates with y); "
                "pass lambda_hi explicitly to build a path"
            )
    lambdas = lambda_grid(float(lambda_hi), grid_size, lambda_min_ratio)

    p = X.shape[1]
    coefs = np.empty((grid_size, p))
    intercepts = np.empty(grid_size)
    converged = np.ones(grid_size, dtype=bool)
    iterations = np.zeros(grid_size, dtype=np.int64)

    if method == "ridge":
        for i, lam in enumerate(lambdas):
            model = fit_ridge(X, y, float(lam))
            coefs[i] = model.coef
            intercepts[i] = model.intercept
    else:
        warm = None
        for i, lam in enumerate(lambdas):
            model, diag = fit_lasso(X, y, float(lam), tol=tol,
                                    max_iter=max_iter, warm_start=warm)
            coefs[i] = model.coef
            intercepts[i] = model.intercept
            converged[i] = diag.converged
            iterations[i] = diag.iterations
            warm = model.coef
    return RegularizationPath(
        method=method,
        lambdas=lambdas,
        coefs=coefs,
        intercepts=intercepts,
        converged=converged,
        iterations=iterations,
    )
