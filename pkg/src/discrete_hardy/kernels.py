"""Backend selection for the hot loops.

Set ``DISCRETE_HARDY_DISABLE_JIT=1`` to run the pure-numpy path (no numba
import at all).  ``DISCRETE_HARDY_THREADS`` caps numba's thread pool.
"""

import os
import warnings

import numpy as np

JIT_ENABLED = os.environ.get("DISCRETE_HARDY_DISABLE_JIT", "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)

if JIT_ENABLED:
    # numba probes an outdated system TBB and falls back to another layer anyway
    warnings.filterwarnings("ignore", message=".*TBB.*", module="numba")
    from discrete_hardy import _numba_kernels as _impl
else:
    from discrete_hardy import _numpy_kernels as _impl

BACKEND = "numba" if JIT_ENABLED else "numpy"


def set_threads(n):
    """Cap the number of worker threads (no-op on the numpy backend)."""
    if n is None or not JIT_ENABLED:
        return
    import numba

    numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def threads_from_env():
    raw = os.environ.get("DISCRETE_HARDY_THREADS", "").strip()
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"DISCRETE_HARDY_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"DISCRETE_HARDY_THREADS must be a positive integer, got {raw!r}")
    return n


def _f64(values):
    return np.ascontiguousarray(values, dtype=np.float64)


def _i64(js):
    return np.ascontiguousarray(js, dtype=np.int64)


def hilbert_window(offset, values, js):
    return _impl.hilbert_window(int(offset), _f64(values), _i64(js))


def riesz_window(offset, values, gamma, js):
    return _impl.riesz_window(int(offset), _f64(values), float(gamma), _i64(js))


def frac_window(offset, values, alpha, beta, js):
    return _impl.frac_window(int(offset), _f64(values), float(alpha), float(beta), _i64(js))


def maximal_window(offset, absvals, js):
    return _impl.maximal_window(int(offset), _f64(absvals), _i64(js))


def hilbert_abs_power_sum(offset, values, p, j_lo, j_hi):
    """Sum of |(Hb)(j)|^p over j_lo <= j <= j_hi, without materializing Hb."""
    if j_hi < j_lo:
        return 0.0
    return float(_impl.hilbert_abs_power_sum(int(offset), _f64(values), float(p), int(j_lo), int(j_hi)))


def frac_abs_power_sum(offset, values, alpha, beta, q, j_lo, j_hi):
    if j_hi < j_lo:
        return 0.0
    return float(
        _impl.frac_abs_power_sum(
            int(offset), _f64(values), float(alpha), float(beta), float(q), int(j_lo), int(j_hi)
        )
    )


def ce_term_sum(s, j_lo, j_hi):
    """Return (sum, sum of abs) of (j^2-1)^-s - j^-2s for j_lo <= j <= j_hi."""
    if j_hi < j_lo:
        return 0.0, 0.0
    total, abs_total = _impl.ce_term_sum(float(s), int(j_lo), int(j_hi))
    return float(total), float(abs_total)


def log_example_sums(gamma, alpha, beta, checkpoints):
    return _impl.log_example_sums(float(gamma), float(alpha), float(beta), _i64(checkpoints))
