"""Compare the compiled kernels against the pure-numpy fallback.

Runs the two hot loops — coordinate-descent sweeps for the LASSO penalty
path and the k-nearest-neighbor scan — on a synthetic dataset and times
both backends on identical inputs. Usage:

    python3 benchmarks/bench_kernels.py [--days 90] [--seed 7] [--repeats 3]

The compiled backend must be built (`pip install -e . --no-build-isolation`)
for a meaningful comparison; if it is missing the script reports that and
times the fallback alone.
"""

from __future__ import annotations

import argparse
import contextlib
import time

import numpy as np

from steelpower import ingest, kernels, linear, standardize, synthetic
from steelpower import _pykernels

try:
    from steelpower import _ckernels
except ImportError:
    _ckernels = None


@contextlib.contextmanager
def _backend(module):
    """Route `kernels.lasso_sweep` / `nearest_neighbors` through `module`."""
    saved = kernels.lasso_sweep, kernels.nearest_neighbors
    kernels.lasso_sweep = module.lasso_sweep
    kernels.nearest_neighbors = module.nearest_neighbors
    try:
        yield
    finally:
        kernels.lasso_sweep, kernels.nearest_neighbors = saved


def _build_problem(n_days: int, seed: int):
    schema = ingest.default_schema()
    text = synthetic.generate_csv(n_days=n_days, seed=seed)
    data = ingest.encode_features(ingest.parse_csv(text, schema), schema)
    train, test = ingest.split(data, 0.25, seed=42)
    params = standardize.fit_standardizer(train)
    return (standardize.transform(params, train),
            standardize.transform(params, test))


def _time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_lasso_path(module, train, repeats: int) -> float:
    X = np.asfortranarray(train.X)
    y = train.y

    def run():
        with _backend(module):
            linear.regularization_path(X, y, "lasso", grid_size=100)

    return _time(run, repeats)


def bench_knn_scan(module, train, test, repeats: int) -> float:
    X_train = np.ascontiguousarray(np.delete(train.X, -1, axis=1))
    X_test = np.ascontiguousarray(np.delete(test.X, -1, axis=1))

    def run():
        for k in (1, 5, 10, 20, 40):
            module.nearest_neighbors(X_train, X_test, k)

    return _time(run, repeats)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--days", type=int, default=90,
                        help="synthetic dataset length in days (default 90)")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats; the best run is reported")
    args = parser.parse_args(argv)

    train, test = _build_problem(args.days, args.seed)
    print(f"dataset: {args.days} days -> train {train.X.shape}, "
          f"test {test.X.shape}")

    backends = [("pure numpy", _pykernels)]
    if _ckernels is not None:
        backends.append(("compiled", _ckernels))
    else:
        print("compiled backend not built; timing the fallback only")

    rows = []
    for label, module in backends:
        lasso_s = bench_lasso_path(module, train, args.repeats)
        knn_s = bench_knn_scan(module, train, test, args.repeats)
        rows.append((label, lasso_s, knn_s))

    print(f"\n{'backend':<12} {'lasso path (s)':>15} {'knn scan (s)':>14}")
    for label, lasso_s, knn_s in rows:
        print(f"{label:<12} {lasso_s:>15.3f} {knn_s:>14.3f}")

    if len(rows) == 2:
        (_, pl, pk), (_, cl, ck) = rows
        print(f"\nspeedup (pure / compiled): lasso {pl / cl:.2f}x, "
              f"knn {pk / ck:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
