"""Pure-numpy twins of the compiled kernels.

Used when ``DISCRETE_HARDY_DISABLE_JIT`` is set, and as a cross-check of the
compiled path in the test suite.  Work is blocked so that no temporary holds
more than ``_BLOCK`` doubles.
"""

import math

import numpy as np

_BLOCK = 1 << 22


def _rows_per_block(ncols):
    return max(1, _BLOCK // max(1, ncols))


def _nonzero(offset, values):
    idx = np.flatnonzero(values)
    return (offset + idx).astype(np.int64), values[idx]


def hilbert_window(offset, values, js):
    i, v = _nonzero(offset, values)
    out = np.zeros(js.shape[0])
    step = _rows_per_block(i.size)
    for start in range(0, js.shape[0], step):
        jj = js[start:start + step, None]
        out[start:start + step] = (v / (jj + i + 0.5)).sum(axis=1)
    return out / math.pi


def riesz_window(offset, values, gamma, js):
    i, v = _nonzero(offset, values)
    out = np.zeros(js.shape[0])
    step = _rows_per_block(i.size)
    for start in range(0, js.shape[0], step):
        d = np.abs(i - js[start:start + step, None]).astype(np.float64)
        with np.errstate(divide="ignore"):
            w = np.where(d == 0, 0.0, d ** (gamma - 1.0))
        out[start:start + step] = (w * v).sum(axis=1)
    return out


def frac_window(offset, values, alpha, beta, js):
    i, v = _nonzero(offset, values)
    out = np.zeros(js.shape[0])
    step = _rows_per_block(i.size)
    for start in range(0, js.shape[0], step):
        jj = js[start:start + step, None]
        dm = np.abs(i - jj).astype(np.float64)
        dp = np.abs(i + jj).astype(np.float64)
        excluded = (dm == 0) | (dp == 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(excluded, 0.0, v / (dm ** alpha * dp ** beta))
        out[start:start + step] = w.sum(axis=1)
    return out


def maximal_window(offset, absvals, js):
    n = absvals.shape[0]
    prefix = np.concatenate(([0.0], np.cumsum(absvals)))
    out = np.empty(js.shape[0])
    hi = offset + n - 1
    for t, j in enumerate(js):
        nstar = max(abs(j - offset), abs(j - hi))
        N = np.arange(nstar + 1)
        left = np.clip(j - N - offset, 0, n)
        right = np.clip(j + N - offset + 1, 0, n)
        sums = prefix[right] - prefix[left]
        out[t] = (sums / (2 * N + 1)).max()
    return out


def hilbert_abs_power_sum(offset, values, p, j_lo, j_hi):
    partials = []
    step = _rows_per_block(np.count_nonzero(values))
    for start in range(j_lo, j_hi + 1, step):
        js = np.arange(start, min(start + step, j_hi + 1), dtype=np.int64)
        partials.append(math.fsum((np.abs(hilbert_window(offset, values, js)) ** p).tolist()))
    return math.fsum(partials)


def frac_abs_power_sum(offset, values, alpha, beta, q, j_lo, j_hi):
    partials = []
    step = _rows_per_block(np.count_nonzero(values))
    for start in range(j_lo, j_hi + 1, step):
        js = np.arange(start, min(start + step, j_hi + 1), dtype=np.int64)
        partials.append(math.fsum((np.abs(frac_window(offset, values, alpha, beta, js)) ** q).tolist()))
    return math.fsum(partials)


def ce_term_sum(s, j_lo, j_hi):
    partials = []
    abs_total = 0.0
    for start in range(j_lo, j_hi + 1, _BLOCK):
        j = np.arange(start, min(start + _BLOCK, j_hi + 1), dtype=np.float64)
        term = j ** (-2.0 * s) * np.expm1(-s * np.log1p(-1.0 / (j * j)))
        partials.extend(term.tolist())
        abs_total += float(np.abs(term).sum())
    return math.fsum(partials), abs_total


def log_example_sums(gamma, alpha, beta, checkpoints):
    out = np.empty(checkpoints.shape[0])
    total = 0.0
    lo = 2
    for k, B in enumerate(checkpoints):
        for start in range(lo, int(B) + 1, _BLOCK):
            i = np.arange(start, min(start + _BLOCK, int(B) + 1), dtype=np.float64)
            bval = i ** (-gamma) / np.log(i)
            total += float((2.0 * bval / (i ** alpha * i ** beta)).sum())
        lo = max(lo, int(B) + 1)
        out[k] = total
    return out
