"""Compiled inner loops.

Every function here has a twin with the same signature in ``_numpy_kernels``;
``kernels`` picks one at import time.
"""

import math

import numpy as np
from numba import njit, prange

_INV_PI = 1.0 / math.pi


@njit(parallel=True, cache=True)
def hilbert_window(offset, values, js):
    n = values.shape[0]
    out = np.empty(js.shape[0])
    for t in prange(js.shape[0]):
        j = js[t]
        base = j + offset + 0.5
        acc = 0.0
        for u in range(n):
            acc += values[u] / (base + u)
        out[t] = acc * _INV_PI
    return out


@njit(parallel=True, cache=True)
def riesz_window(offset, values, gamma, js):
    n = values.shape[0]
    e = 1.0 - gamma
    out = np.empty(js.shape[0])
    for t in prange(js.shape[0]):
        j = js[t]
        acc = 0.0
        for u in range(n):
            v = values[u]
            i = offset + u
            if v != 0.0 and i != j:
                acc += v / float(abs(i - j)) ** e
        out[t] = acc
    return out


@njit(parallel=True, cache=True)
def frac_window(offset, values, alpha, beta, js):
    n = values.shape[0]
    out = np.empty(js.shape[0])
    for t in prange(js.shape[0]):
        j = js[t]
        acc = 0.0
        for u in range(n):
            v = values[u]
            i = offset + u
            if v != 0.0 and i != j and i != -j:
                acc += v / (float(abs(i - j)) ** alpha * float(abs(i + j)) ** beta)
        out[t] = acc
    return out


@njit(parallel=True, cache=True)
def maximal_window(offset, absvals, js):
    n = absvals.shape[0]
    hi_idx = offset + n - 1
    out = np.empty(js.shape[0])
    for t in prange(js.shape[0]):
        j = js[t]
        nstar = max(abs(j - offset), abs(j - hi_idx))
        s = 0.0
        best = 0.0
        for N in range(nstar + 1):
            left = j - N - offset
            right = j + N - offset
            if N == 0:
                if 0 <= left < n:
                    s += absvals[left]
            else:
                if 0 <= left < n:
                    s += absvals[left]
                if 0 <= right < n:
                    s += absvals[right]
            avg = s / (2 * N + 1)
            if avg > best:
                best = avg
        out[t] = best
    return out


@njit(cache=True)
def hilbert_abs_power_sum(offset, values, p, j_lo, j_hi):
    # compensated (Neumaier) summation of nonnegative terms
    n = values.shape[0]
    total = 0.0
    comp = 0.0
    for j in range(j_lo, j_hi + 1):
        base = j + offset + 0.5
        acc = 0.0
        for u in range(n):
            acc += values[u] / (base + u)
        term = abs(acc * _INV_PI) ** p
        tmp = total + term
        if total >= term:
            comp += (total - tmp) + term
        else:
            comp += (term - tmp) + total
        total = tmp
    return total + comp


@njit(cache=True)
def frac_abs_power_sum(offset, values, alpha, beta, q, j_lo, j_hi):
    # compensated (Neumaier) summation of nonnegative terms
    n = values.shape[0]
    total = 0.0
    comp = 0.0
    for j in range(j_lo, j_hi + 1):
        acc = 0.0
        for u in range(n):
            v = values[u]
            i = offset + u
            if v != 0.0 and i != j and i != -j:
                acc += v / (float(abs(i - j)) ** alpha * float(abs(i + j)) ** beta)
        term = abs(acc) ** q
        tmp = total + term
        if total >= term:
            comp += (total - tmp) + term
        else:
            comp += (term - tmp) + total
        total = tmp
    return total + comp


@njit(cache=True)
def ce_term_sum(s, j_lo, j_hi):
    # terms (j^2 - 1)^(-s) - j^(-2s), written as j^(-2s) * expm1(-s*log1p(-1/j^2))
    total = 0.0
    comp = 0.0
    abs_total = 0.0
    for j in range(j_lo, j_hi + 1):
        jf = float(j)
        term = jf ** (-2.0 * s) * math.expm1(-s * math.log1p(-1.0 / (jf * jf)))
        tmp = total + term
        if abs(total) >= abs(term):
            comp += (total - tmp) + term
        else:
            comp += (term - tmp) + total
        total = tmp
        abs_total += abs(term)
    return total + comp, abs_total


@njit(cache=True)
def log_example_sums(gamma, alpha, beta, checkpoints):
    # (T b)(0) partial sums for b(i) = |i|^-gamma / log|i|, |i| >= 2, truncated at |i| <= B
    out = np.empty(checkpoints.shape[0])
    total = 0.0
    i = 2
    for k in range(checkpoints.shape[0]):
        B = checkpoints[k]
        while i <= B:
            fi = float(i)
            bval = fi ** (-gamma) / math.log(fi)
            total += 2.0 * bval / (fi ** alpha * fi ** beta)
            i += 1
        out[k] = total
    return out
