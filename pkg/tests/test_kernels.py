"""Parity between the compiled kernels and the pure-numpy fallback.

Both backends must agree on neighbor lists exactly (the tie rules are part of
the contract) and on coordinate-descent state to floating-point noise.
"""

from __future__ import annotations

import numpy as np
import pytest

from steelpower import _pykernels, kernels

_ckernels = pytest.importorskip(
    "steelpower._ckernels", reason="compiled extension not built"
)


def test_backend_dispatch_is_consistent():
    assert kernels.backend_name() in ("compiled", "python")
    assert kernels.using_compiled() == (kernels.backend_name() == "compiled")
    assert _pykernels.BACKEND == "python"
    assert _ckernels.BACKEND == "compiled"


def _cd_problem(seed, n=200, p=9):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, p)) * rng.uniform(0.2, 5.0, size=p)
    X[:, p // 2] = 0.0  # one zero-variance column must be skipped
    y = X @ rng.normal(size=p) + rng.normal(size=n)
    Xc = np.asfortranarray(X - X.mean(axis=0))
    yc = y - y.mean()
    col_sq = np.einsum("ij,ij->j", Xc, Xc)
    return Xc, yc, col_sq


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lasso_sweep_parity(seed):
    Xc, yc, col_sq = _cd_problem(seed)
    thr = 0.05 * float(np.max(np.abs(Xc.T @ yc)))
    states = {}
    for name, impl in (("c", _ckernels), ("py", _pykernels)):
        beta = np.zeros(Xc.shape[1])
        residual = yc.copy()
        changes = [impl.lasso_sweep(Xc, residual, beta, col_sq, thr)
                   for _ in range(30)]
        states[name] = (beta, residual, changes)
    beta_c, resid_c, changes_c = states["c"]
    beta_py, resid_py, changes_py = states["py"]
    assert np.allclose(beta_c, beta_py, rtol=1e-12, atol=1e-14)
    assert np.allclose(resid_c, resid_py, rtol=1e-10, atol=1e-12)
    assert changes_c[0] == pytest.approx(changes_py[0], rel=1e-10)
    assert (beta_c == 0.0).tolist() == (beta_py == 0.0).tolist()
    assert beta_c[Xc.shape[1] // 2] == 0.0  # zero-variance column untouched


def test_lasso_sweep_returns_zero_when_converged():
    Xc, yc, col_sq = _cd_problem(3, n=50, p=4)
    thr = 2.0 * float(np.max(np.abs(Xc.T @ yc)))  # above the sparsity threshold
    for impl in (_ckernels, _pykernels):
        beta = np.zeros(4)
        residual = yc.copy()
        change = impl.lasso_sweep(Xc, residual, beta, col_sq, thr)
        assert change == 0.0
        assert np.all(beta == 0.0)
        assert np.array_equal(residual, yc)


@pytest.mark.parametrize("seed,k", [(0, 1), (1, 4), (2, 17), (3, 64)])
def test_nearest_neighbors_parity(seed, k):
    rng = np.random.default_rng(seed)
    train = np.ascontiguousarray(rng.normal(size=(150, 6)))
    queries = np.ascontiguousarray(rng.normal(size=(40, 6)))
    got_c = _ckernels.nearest_neighbors(train, queries, k)
    got_py = _pykernels.nearest_neighbors(train, queries, k)
    assert np.array_equal(got_c, got_py)
    assert got_c.dtype == np.int64 and got_py.dtype == np.int64


def test_nearest_neighbors_parity_with_duplicates():
    base = np.random.default_rng(9).normal(size=(8, 3))
    train = np.ascontiguousarray(np.vstack([base, base, base[:2]]))
    queries = np.ascontiguousarray(base[:5] + 1e-9)
    for k in (1, 3, 10, 18):
        got_c = _ckernels.nearest_neighbors(train, queries, k)
        got_py = _pykernels.nearest_neighbors(train, queries, k)
        assert np.array_equal(got_c, got_py)


def test_smallest_k_boundary_ties():
    dist = np.array([1.0, 0.0, 1.0, 0.0, 1.0])
    assert _pykernels._smallest_k(dist, 3).tolist() == [1, 3, 0]
    assert _pykernels._smallest_k(dist, 5).tolist() == [1, 3, 0, 2, 4]
    # same scenario end to end through the compiled scan
    train = np.array([[1.0], [0.0], [1.0], [0.0], [1.0]])
    query = np.array([[0.0]])
    assert _ckernels.nearest_neighbors(train, query, 3).tolist() == [[1, 3, 0]]
