"""Kernel backend selection: compiled extension with pure-Python fallback.

Set ``POISSONK_PURE=1`` to force the numpy fallback (used by the benchmark
and the backend-equivalence tests).
"""

import os

import numpy as np

from .errors import InvalidParameterError, KernelOverflowError

if os.environ.get("POISSONK_PURE", "").lower() in {"1", "true", "yes"}:
    from . import _kernel_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _ck as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _kernel_py as _impl  # type: ignore[no-redef]

        BACKEND = "python"


def _validate(k: int, lam: float, n_max: int) -> None:
    if k < 1:
        raise InvalidParameterError(f"order k must be >= 1, got {k}")
    if lam < 0.0:
        raise InvalidParameterError(f"rate lambda must be >= 0, got {lam}")
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be >= 0, got {n_max}")


def scaled_pmf_values(k: int, lam: float, n_max: int) -> np.ndarray:
    """Scaled pmf h[0..n_max] in linear space.

    Raises KernelOverflowError if any value overflows a double; callers
    should switch to :func:`log_scaled_pmf_values`.
    """
    _validate(k, lam, n_max)
    h = np.empty(n_max + 1, dtype=np.float64)
    if lam == 0.0:
        h[:] = 0.0
        h[0] = 1.0
        return h
    bad = _impl.scaled_pmf_fill(k, lam, h)
    if bad:
        raise KernelOverflowError(
            f"scaled pmf overflowed at n={bad} (k={k}, lambda={lam}); use log space"
        )
    return h


def log_scaled_pmf_values(k: int, lam: float, n_max: int) -> np.ndarray:
    """log h[0..n_max]; stable for arbitrarily large k*lambda."""
    _validate(k, lam, n_max)
    out = np.empty(n_max + 1, dtype=np.float64)
    if lam == 0.0:
        out[:] = -np.inf
        out[0] = 0.0
        return out
    buf = np.zeros(k + 1, dtype=np.float64)
    _impl.scaled_pmf_log_fill(k, lam, out, buf)
    return out
