"""Kernel backend selection.

The compiled extension is preferred when present; setting STEELPOWER_PURE=1
forces the numpy fallback (useful for parity tests and benchmarks). Both
backends expose `lasso_sweep` and `nearest_neighbors` with identical
contracts.
"""

import os

from . import _pykernels

if os.environ.get("STEELPOWER_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

lasso_sweep = _impl.lasso_sweep
nearest_neighbors = _impl.nearest_neighbors


def backend_name() -> str:
    """Name of the active backend: 'compiled' or 'python'."""
    return _impl.BACKEND


def using_compiled() -> bool:
    return _impl.BACKEND == "compiled"
