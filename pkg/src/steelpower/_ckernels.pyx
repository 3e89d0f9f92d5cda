# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: coordinate-descent sweep and KNN neighbor scan.

Contracts mirror `_pykernels`; `kernels` picks whichever imports.
"""

import numpy as np

from scipy.linalg.cython_blas cimport daxpy, ddot

BACKEND = "compiled"


def lasso_sweep(double[::1, :] X, double[::1] r, double[::1] beta,
                double[::1] col_sq, double thr):
    """One full cycle of coordinate-descent updates, in place.

    X must be Fortran-ordered (n, p) and centered; r is the residual
    y - X @ beta, updated in place alongside beta. col_sq holds the column
    squared norms and thr is half the L1 penalty weight. Returns the largest
    absolute coefficient change of the cycle.
    """
    cdef int n = <int>X.shape[0]
    cdef Py_ssize_t p = X.shape[1]
    cdef Py_ssize_t j
    cdef int inc = 1
    cdef double z, rho, new, delta, neg_delta, max_delta = 0.0
    for j in range(p):
        z = col_sq[j]
        if z == 0.0:
            continue
        # column j is contiguous in the Fortran layout
        rho = ddot(&n, &X[0, j], &inc, &r[0], &inc) + beta[j] * z
        if rho > thr:
            new = (rho - thr) / z
        elif rho < -thr:
            new = (rho + thr) / z
        else:
            new = 0.0
        delta = new - beta[j]
        if delta != 0.0:
            neg_delta = -delta
            daxpy(&n, &neg_delta, &X[0, j], &inc, &r[0], &inc)
            beta[j] = new
            if delta < 0.0:
                delta = -delta
            if delta > max_delta:
                max_delta = delta
    return max_delta


def nearest_neighbors(double[:, ::1] train, double[:, ::1] queries, Py_ssize_t k):
    """Indices of the k nearest training rows per query, (m, k) int64.

    Euclidean distance; each row is ordered by (distance, training index)
    ascending, so exact distance ties resolve to the lowest index.
    """
    cdef Py_ssize_t n = train.shape[0]
    cdef Py_ssize_t p = train.shape[1]
    cdef Py_ssize_t m = queries.shape[0]
    out = np.empty((m, k), dtype=np.int64)
    cdef long long[:, ::1] out_v = out
    best_d_arr = np.empty(k, dtype=np.float64)
    best_i_arr = np.empty(k, dtype=np.int64)
    cdef double[::1] best_d = best_d_arr
    cdef long long[::1] best_i = best_i_arr
    cdef Py_ssize_t q, i, j, t, pos, filled
    cdef double d, diff
    for q in range(m):
        filled = 0
        for i in range(n):
            d = 0.0
            for j in range(p):
                diff = train[i, j] - queries[q, j]
                d += diff * diff
            if filled < k:
                pos = filled
                # strict comparison keeps earlier (lower) indices ahead of
                # later ones at equal distance
                while pos > 0 and best_d[pos - 1] > d:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = d
                best_i[pos] = i
                filled += 1
            elif d < best_d[k - 1]:
                pos = k - 1
                while pos > 0 and best_d[pos - 1] > d:
                    best_d[pos] = best_d[pos - 1]
                    best_i[pos] = best_i[pos - 1]
                    pos -= 1
                best_d[pos] = d
                best_i[pos] = i
        for t in range(k):
            out_v[q, t] = best_i[t]
    return out
