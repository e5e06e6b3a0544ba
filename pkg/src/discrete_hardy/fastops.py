"""FFT application of the structured kernels.

I_gamma has a Toeplitz kernel (a function of j - i) and H a Hankel kernel (a
function of j + i); reversing the input turns the second into the first, so
both reduce to one zero-padded linear convolution.  T_{alpha,beta} has a
product kernel |i-j|^-alpha |i+j|^-beta that is neither and is only
available through the direct path in ``operators``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from discrete_hardy import operators
from discrete_hardy.report import ExperimentReport
from discrete_hardy.seqcore import Sequence


class AliasingError(ValueError):
    """The padded transform is too short for an alias-free linear convolution."""


@dataclass(frozen=True)
class WindowPlan:
    """Output window [j_lo, j_hi], input support [i_lo, i_hi] and FFT length."""

    j_lo: int
    j_hi: int
    i_lo: int
    i_hi: int
    n_fft: int

    def __post_init__(self):
        if self.j_hi < self.j_lo or self.i_hi < self.i_lo:
            raise ValueError("empty window or support interval")
        if self.n_fft & (self.n_fft - 1):
            raise ValueError(f"n_fft={self.n_fft} is not a power of two")
        if not self.aliasing_free:
            raise AliasingError(
                f"n_fft={self.n_fft} < output extent {self.out_len} + input extent {self.in_len}"
            )

    @classmethod
    def build(cls, j_lo: int, j_hi: int, i_lo: int, i_hi: int) -> WindowPlan:
        need = (j_hi - j_lo + 1) + (i_hi - i_lo + 1)
        return cls(j_lo, j_hi, i_lo, i_hi, 1 << (need - 1).bit_length())

    @classmethod
    def for_sequence(cls, b: Sequence, j_lo: int, j_hi: int) -> WindowPlan:
        lo, hi = b.support if not b.is_zero else (0, 0)
        return cls.build(j_lo, j_hi, lo, hi)

    @property
    def out_len(self) -> int:
        return self.j_hi - self.j_lo + 1

    @property
    def in_len(self) -> int:
        return self.i_hi - self.i_lo + 1

    @property
    def aliasing_free(self) -> bool:
        # circular length >= kernel length (out_len + in_len - 1) keeps the
        # extracted block clear of wrap-around
        return self.n_fft >= self.out_len + self.in_len

    @property
    def js(self) -> np.ndarray:
        return np.arange(self.j_lo, self.j_hi + 1, dtype=np.int64)


def _dense_input(b: Sequence, plan: WindowPlan) -> np.ndarray:
    block = np.zeros(plan.in_len)
    if b.is_zero:
        return block
    lo, hi = b.support
    if lo < plan.i_lo or hi > plan.i_hi:
        raise AliasingError(f"plan input [{plan.i_lo}, {plan.i_hi}] does not cover support [{lo}, {hi}]")
    block[lo - plan.i_lo:hi - plan.i_lo + 1] = b.values
    return block


def _toeplitz_block(x: np.ndarray, x_lo: int, kernel, out_lo: int, out_len: int, n_fft: int) -> np.ndarray:
    """out[t] = sum_u x[u] kernel(out_lo + t - x_lo - u), t = 0..out_len-1."""
    L = x.shape[0]
    lags = out_lo - (x_lo + L - 1) + np.arange(out_len + L - 1, dtype=np.int64)
    spec = np.fft.rfft(x, n_fft) * np.fft.rfft(kernel(lags), n_fft)
    return np.fft.irfft(spec, n_fft)[L - 1:L - 1 + out_len]


def _riesz_kernel(gamma):
    def k(lags):
        d = np.abs(lags).astype(np.float64)
        out = np.zeros_like(d)
        nz = d != 0
        out[nz] = d[nz] ** (gamma - 1.0)
        return out

    return k


def _hilbert_kernel(lags):
    return 1.0 / (np.pi * (lags + 0.5))


def riesz_window_fast(b: Sequence, gamma: float, plan: WindowPlan) -> np.ndarray:
    """(I_gamma b)(j) for j in the plan window, as an array."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"Riesz potential needs 0 < gamma < 1, got {gamma}")
    x = _dense_input(b, plan)
    return _toeplitz_block(x, plan.i_lo, _riesz_kernel(gamma), plan.j_lo, plan.out_len, plan.n_fft)


def hilbert_window_fast(b: Sequence, plan: WindowPlan) -> np.ndarray:
    """(Hb)(j) for j in the plan window, as an array."""
    x = _dense_input(b, plan)[::-1].copy()
    return _toeplitz_block(x, -plan.i_hi, _hilbert_kernel, plan.j_lo, plan.out_len, plan.n_fft)


def riesz_apply_fast(b: Sequence, gamma: float, plan: WindowPlan) -> Sequence:
    return Sequence(plan.j_lo, riesz_window_fast(b, gamma, plan))


def hilbert_apply_fast(b: Sequence, plan: WindowPlan) -> Sequence:
    return Sequence(plan.j_lo, hilbert_window_fast(b, plan))


def scaling_exponent(sizes, times) -> float:
    """Slope of log(time) against log(size), least squares."""
    return float(np.polyfit(np.log(np.asarray(sizes, float)), np.log(np.asarray(times, float)), 1)[0])


def _best_ns(fn, repeats):
    best = None
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        best = dt if best is None else min(best, dt)
    return best


FAST_EXPONENT_MAX = 1.4
DIRECT_EXPONENT_MIN = 1.8


def throughput_benchmark(sizes, repeats: int, seed: int = 0) -> ExperimentReport:
    """Time direct and FFT evaluation of H on an N-point window for an
    N-point input, for each N in ``sizes``; fit log-log slopes.

    worst_ratio folds three checks: fast slope <= 1.4, direct slope >= 1.8
    and fast faster than direct at the largest size.
    """
    sizes = [int(n) for n in sizes]
    params = {"sizes": sizes, "repeats": int(repeats), "seed": seed}
    if repeats <= 0 or not sizes:
        return ExperimentReport("throughput_benchmark", params, 0, 0.0)
    if min(sizes) < 256:
        raise ValueError("benchmark sizes must be >= 256")
    rng = np.random.default_rng(seed)
    warm = Sequence(0, rng.uniform(-1, 1, 64))
    operators.hilbert_window(warm, np.arange(64))
    hilbert_window_fast(warm, WindowPlan.build(0, 63, 0, 63))

    rows = []
    for n in sizes:
        b = Sequence(0, rng.uniform(0.5, 1.0, n))
        plan = WindowPlan.build(0, n - 1, b.support[0], b.support[1])
        js = plan.js
        direct_ns = _best_ns(lambda: operators.hilbert_window(b, js), repeats)
        fast_ns = _best_ns(lambda: hilbert_window_fast(b, plan), repeats)
        rows.append({"size": n, "direct_ns": int(direct_ns), "fast_ns": int(fast_ns)})

    summary = {}
    worst = 0.0
    if len(rows) >= 2:
        direct_exp = scaling_exponent(sizes, [r["direct_ns"] for r in rows])
        fast_exp = scaling_exponent(sizes, [r["fast_ns"] for r in rows])
        summary.update(direct_exponent=direct_exp, fast_exponent=fast_exp)
        worst = max(fast_exp / FAST_EXPONENT_MAX, DIRECT_EXPONENT_MIN / max(direct_exp, 1e-300))
    last = rows[-1]
    worst = max(worst, last["fast_ns"] / last["direct_ns"])
    summary["backend"] = operators.kernels.BACKEND
    return ExperimentReport("throughput_benchmark", params, len(rows), worst, artifacts=rows, summary=summary)
