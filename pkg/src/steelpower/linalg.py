"""Small dense linear-algebra helpers for the normal-equation solvers.

Everything here operates on symmetric matrices built from centered design
matrices. Factorizations are delegated to numpy/scipy; the value added is the
conditioning guard and a uniform error surface.
"""

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NumericError, SingularMatrixError


def sym_rcond(a: np.ndarray) -> float:
    """Reciprocal condition number of a symmetric PSD matrix.

    Computed from the eigenvalue range; tiny negative eigenvalues produced by
    rounding are clamped to zero.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(a)
    hi = w[-1]
    if not np.isfinite(hi) or hi <= 0.0:
        return 0.0
    return max(float(w[0]), 0.0) / float(hi)


def spd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a x = b for symmetric positive-definite a via Cholesky."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NumericError(f"expected a square matrix, got shape {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise NumericError(
            f"right-hand side length {b.shape[0]} does not match matrix order {a.shape[0]}"
        )
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"matrix is not positive definite: {exc}") from exc
    z = solve_triangular(chol, b, lower=True)
    return solve_triangular(chol.T, z, lower=False)


def min_norm_lstsq(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of a x ~= b (SVD-based)."""
    x, _, _, _ = np.linalg.lstsq(np.asarray(a, dtype=np.float64),
                                 np.asarray(b, dtype=np.float64), rcond=None)
    return x
