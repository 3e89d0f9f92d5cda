"""Pure-numpy implementations of the hot kernels.

Same contracts as the compiled module `_ckernels`; used when the extension is
unavailable or when STEELPOWER_PURE=1 forces it. See `kernels` for dispatch.
"""

import numpy as np

BACKEND = "python"


def lasso_sweep(X, r, beta, col_sq, thr):
    """One full cycle of coordinate-descent updates, in place.

    X must be Fortran-ordered (n, p) and centered; r is the residual
    y - X @ beta, updated in place alongside beta. col_sq holds the column
    squared norms and thr is half the L1 penalty weight. Returns the largest
    absolute coefficient change of the cycle.
    """
    max_delta = 0.0
    for j in range(X.shape[1]):
        z = col_sq[j]
        if z == 0.0:
            continue
        xj = X[:, j]
        rho = xj @ r + beta[j] * z
        if rho > thr:
            new = (rho - thr) / z
        elif rho < -thr:
            new = (rho + thr) / z
        else:
            new = 0.0
        delta = new - beta[j]
        if delta != 0.0:
            r -= delta * xj
            beta[j] = new
            max_delta = max(max_delta, abs(delta))
    return max_delta


def nearest_neighbors(train, queries, k):
    """Indices of the k nearest training rows per query, (m, k) int64.

    Euclidean distance; each row is ordered by (distance, training index)
    ascending, so exact distance ties resolve to the lowest index.
    """
    train = np.ascontiguousarray(train, dtype=np.float64)
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    n = train.shape[0]
    train_sq = np.einsum("ij,ij->i", train, train)
    out = np.empty((queries.shape[0], k), dtype=np.int64)
    chunk = max(1, min(queries.shape[0], 8_388_608 // max(n, 1) + 1))
    for start in range(0, queries.shape[0], chunk):
        q = queries[start:start + chunk]
        # |t|^2 - 2 q.t + |q|^2; the constant |q|^2 term cannot change the
        # per-row ordering, so it is dropped.
        d = train_sq[np.newaxis, :] - 2.0 * (q @ train.T)
        for row in range(q.shape[0]):
            out[start + row] = _smallest_k(d[row], k)
    return out


def _smallest_k(dist, k):
    """Indices of the k smallest entries, ordered by (value, index)."""
    if k >= dist.shape[0]:
        sel = np.arange(dist.shape[0])
    else:
        cand = np.argpartition(dist, k - 1)[:k]
        kth = dist[cand].max()
        # argpartition gives no tie guarantee at the boundary value, so
        # rebuild the selection: everything strictly below the k-th value,
        # topped up with the lowest-index ties at that value.
        strict = np.flatnonzero(dist < kth)
        ties = np.flatnonzero(dist == kth)
        sel = np.concatenate([strict, ties[:k - strict.shape[0]]])
    order = np.lexsort((sel, dist[sel]))
    return sel[order]
