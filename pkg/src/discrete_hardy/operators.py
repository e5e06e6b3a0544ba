"""Direct application of H, I_gamma and T_{alpha,beta} to finitely supported
sequences, the two-singularity kernel K and its derivative bounds, and
certified tail bounds for operator images of moment-free sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from discrete_hardy import kernels
from discrete_hardy.seqcore import EPS, Enclosure, Sequence, moment, round_up

PARAM_TOL = 1e-12
MOMENT_TOL = 1e-10


class MomentConditionError(ValueError):
    """A required vanishing moment is not zero within tolerance."""


@dataclass(frozen=True)
class OperatorParams:
    """Exponents of T_{alpha,beta}: kernel |i-j|^-alpha |i+j|^-beta with
    alpha + beta = 1 - gamma."""

    gamma: float
    alpha: float
    beta: float

    def __post_init__(self):
        g, a, b = float(self.gamma), float(self.alpha), float(self.beta)
        if not 0.0 <= g < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {g}")
        if not (a > 0 and b > 0):
            raise ValueError("alpha and beta must be positive")
        if abs(a + b - (1.0 - g)) > PARAM_TOL:
            raise ValueError(f"alpha + beta = {a + b!r} differs from 1 - gamma = {1.0 - g!r}")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def symmetric(cls, gamma: float) -> OperatorParams:
        """alpha = beta = (1 - gamma)/2, the operator U_gamma."""
        s = (1.0 - float(gamma)) / 2.0
        return cls(gamma, s, s)

    @classmethod
    def from_exponents(cls, alpha: float, beta: float) -> OperatorParams:
        return cls(1.0 - alpha - beta, alpha, beta)


@dataclass(frozen=True)
class TaylorTailSpec:
    """Data for the Taylor-remainder tail estimate: expansion order N,
    center n0 and half-width m of the support window, and the l1 mass."""

    N: int
    n0: int
    m: int
    l1_mass: float

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("Taylor order N must be >= 1")
        if int(self.m) < 1:
            raise ValueError("half-width m must be >= 1")

    @classmethod
    def for_sequence(cls, b: Sequence, N: int) -> TaylorTailSpec:
        """Smallest centered window containing supp(b)."""
        if b.is_zero:
            return cls(N, 0, 1, 0.0)
        lo, hi = b.support
        n0 = (lo + hi) // 2
        m = max(hi - n0, n0 - lo, 1)
        return cls(N, n0, m, float(np.abs(b.values).sum()))


def rising_factorial(x: float, n: int) -> float:
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def _window(js) -> np.ndarray:
    return np.atleast_1d(np.asarray(js, dtype=np.int64))


def hilbert_window(b: Sequence, js) -> np.ndarray:
    js = _window(js)
    if b.is_zero:
        return np.zeros(js.shape[0])
    return kernels.hilbert_window(b.offset, b.values, js)


def hilbert_apply(b: Sequence, j: int) -> float:
    """(Hb)(j) = (1/pi) sum_i b(i) / (j + i + 1/2)."""
    return float(hilbert_window(b, j)[0])


def _check_riesz_gamma(gamma):
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"Riesz potential needs 0 < gamma < 1, got {gamma}")


def riesz_window(b: Sequence, gamma: float, js) -> np.ndarray:
    _check_riesz_gamma(gamma)
    js = _window(js)
    if b.is_zero:
        return np.zeros(js.shape[0])
    return kernels.riesz_window(b.offset, b.values, gamma, js)


def riesz_apply(b: Sequence, gamma: float, j: int) -> float:
    """(I_gamma b)(j) = sum_{i != j} b(i) |i - j|^(gamma - 1)."""
    return float(riesz_window(b, gamma, j)[0])


def fractional_window(b: Sequence, params: OperatorParams, js) -> np.ndarray:
    js = _window(js)
    if b.is_zero:
        return np.zeros(js.shape[0])
    return kernels.frac_window(b.offset, b.values, params.alpha, params.beta, js)


def fractional_apply(b: Sequence, params: OperatorParams, j: int) -> float:
    """(T_{alpha,beta} b)(j), skipping i = j and i = -j."""
    return float(fractional_window(b, params, j)[0])


def _check_regular(x, y):
    if x == y or x == -y:
        raise ValueError(f"kernel is singular at x = +-y (x={x}, y={y})")


def kernel_eval(params: OperatorParams, x: float, y: float) -> float:
    _check_regular(x, y)
    return abs(x - y) ** -params.alpha * abs(x + y) ** -params.beta


def derivative_constant(params: OperatorParams, N: int) -> float:
    """C_N = 2 (alpha+beta)_N.

    Leibniz on |x-y|^-alpha |x+y|^-beta gives
    |d^N K| <= K * sum_k C(N,k) (alpha)_k (beta)_{N-k} |x-y|^-k |x+y|^-(N-k).
    Each coefficient satisfies (alpha)_k (beta)_{N-k} <= (alpha+beta)_k
    (alpha+beta+k)_{N-k} = (alpha+beta)_N, and the binomial sum is then
    (|x-y|^-1 + |x+y|^-1)^N; the factor 2 covers d/dx and d/dy together.
    """
    return 2.0 * rising_factorial(params.alpha + params.beta, N)


def kernel_derivative_bound(params: OperatorParams, N: int, x: float, y: float) -> float:
    """Upper bound for |d^N K/dx^N| + |d^N K/dy^N| at (x, y)."""
    if N < 1:
        raise ValueError("derivative order must be >= 1")
    _check_regular(x, y)
    k = kernel_eval(params, x, y)
    s = 1.0 / abs(x - y) + 1.0 / abs(x + y)
    return round_up(derivative_constant(params, N) * k * s**N * (1.0 + 16 * EPS))


def central_abs_moment(b: Sequence, n0: int, N: int) -> float:
    """sum_i |b(i)| |i - n0|^N, rounded up."""
    if b.is_zero:
        return 0.0
    d = np.abs(b.indices - n0).astype(np.float64)
    return round_up(math.fsum((np.abs(b.values) * d**N).tolist()) * (1.0 + 8 * EPS))


def _check_tail_preconditions(b: Sequence, spec: TaylorTailSpec):
    lo, hi = b.support
    if lo < spec.n0 - spec.m or hi > spec.n0 + spec.m:
        raise ValueError(
            f"support [{lo}, {hi}] not inside [{spec.n0 - spec.m}, {spec.n0 + spec.m}]"
        )
    for k in range(spec.N):
        mk = moment(b, k)
        if abs(mk) > MOMENT_TOL:
            raise MomentConditionError(f"moment {k} = {mk!r} does not vanish (tol {MOMENT_TOL})")


def image_tail_bound(
    b: Sequence, params: OperatorParams, spec: TaylorTailSpec, J: int, q: float
) -> Enclosure:
    """Enclose sum_{|j|>J} |(T_{alpha,beta} b)(j)|^q.

    Moments 0..N-1 of b vanish, so (Tb)(j) only sees the Taylor remainder of
    x -> K(x, j) around n0.  For |j| > J the segment between n0 and any
    support point stays at distance >= D = |j| - |n0| - m from both
    singularities, so every Leibniz term is at most (alpha+beta)_N D^-(1-gamma+N)
    and
        |(Tb)(j)| <= (alpha+beta)_N / N! * sum_i |b(i)||i-n0|^N * D^-(1-gamma+N).
    The bound is decreasing in |j|, so the two one-sided sums are bounded by
    integrals from J.
    """
    N, n0, m = int(spec.N), int(spec.n0), int(spec.m)
    if b.is_zero:
        return Enclosure(0.0, 0.0)
    if J < 3 * m + 3 * abs(n0):
        raise ValueError(f"J={J} below the window threshold 3m + 3|n0| = {3 * m + 3 * abs(n0)}")
    e = 1.0 - params.gamma + N
    if not q * e > 1.0:
        raise ValueError(f"q(1 - gamma + N) = {q * e} <= 1: tail not summable by this estimate")
    _check_tail_preconditions(b, spec)
    c = abs(n0) + m
    amp = rising_factorial(params.alpha + params.beta, N) / math.factorial(N) * central_abs_moment(b, n0, N)
    tail = 2.0 * amp**q * float(J - c) ** (1.0 - q * e) / (q * e - 1.0)
    return Enclosure(0.0, round_up(tail * (1.0 + 64 * EPS)))


def hilbert_tail_threshold(spec: TaylorTailSpec) -> int:
    """Smallest J for which |x + n0 + 1/2| - m stays positive on |x| >= J."""
    return abs(int(spec.n0)) + int(spec.m) + 1


def hilbert_tail_bound(b: Sequence, spec: TaylorTailSpec, J: int, p: float) -> Enclosure:
    """Enclose sum_{|j|>J} |(Hb)(j)|^p.

    The N-th derivative of x -> 1/(j + x + 1/2) is exactly
    (-1)^N N!/(j + x + 1/2)^(N+1), so the remainder gives
        |(Hb)(j)| <= (1/pi) sum_i |b(i)||i-n0|^N / (|j + n0 + 1/2| - m)^(N+1).
    """
    N, n0, m = int(spec.N), int(spec.n0), int(spec.m)
    if b.is_zero:
        return Enclosure(0.0, 0.0)
    P = p * (N + 1)
    if not P > 1.0:
        raise ValueError(f"(N+1)p = {P} <= 1: tail not summable by this estimate")
    if J < hilbert_tail_threshold(spec):
        raise ValueError(f"J={J} too small; need J >= |n0| + m + 1 = {hilbert_tail_threshold(spec)}")
    _check_tail_preconditions(b, spec)
    amp = central_abs_moment(b, n0, N) / math.pi
    right = J + n0 + 0.5 - m
    left = J - n0 - 0.5 - m
    tail = amp**p * (right ** (1.0 - P) + left ** (1.0 - P)) / (P - 1.0)
    return Enclosure(0.0, round_up(tail * (1.0 + 64 * EPS)))
