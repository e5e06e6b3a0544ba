"""Discrete (p, q, d)-atoms: validation, seeded synthesis, projection onto
finitely supported sequences with vanishing moments, and enclosures of the
H^p quasi-norm ||b||_p + ||Hb||_p."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from discrete_hardy import kernels
from discrete_hardy.operators import MOMENT_TOL, TaylorTailSpec, hilbert_tail_bound, hilbert_tail_threshold
from discrete_hardy.seqcore import (
    UNIT_ROUNDOFF,
    ZERO,
    Enclosure,
    Sequence,
    lp_norm,
    moment,
    round_up,
)

GRAM_COND_MAX = 1e12
MAX_DRAWS = 32
# keeps ||a||_q a hair under the size bound so rounding cannot push it over
SIZE_SAFETY = 1.0 - 1e-14


class IllConditionedError(ValueError):
    def __init__(self, condition: float, message: str):
        super().__init__(f"{message} (Gram condition estimate {condition:.3e})")
        self.condition = condition


class DegenerateDrawError(RuntimeError):
    pass


@dataclass(frozen=True)
class AtomSpec:
    p: float
    q: float
    d: int
    n0: int
    m: int

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not 0.0 < p <= 1.0 <= q:
            raise ValueError(f"need 0 < p <= 1 <= q, got p={p}, q={q}")
        if not p < q:
            raise ValueError(f"need p < q, got p={p}, q={q}")
        if int(self.d) < 0:
            raise ValueError("d must be a nonnegative integer")
        if int(self.m) < 1:
            raise ValueError("half-width m must be >= 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "n0", int(self.n0))
        object.__setattr__(self, "m", int(self.m))

    @property
    def window(self) -> tuple[int, int]:
        return self.n0 - self.m, self.n0 + self.m

    @property
    def size_bound(self) -> float:
        inv_q = 0.0 if math.isinf(self.q) else 1.0 / self.q
        return float(2 * self.m + 1) ** (inv_q - 1.0 / self.p)


def critical_degree(p: float) -> int:
    """d_p = floor(1/p - 1)."""
    return int(math.floor(1.0 / p - 1.0 + 1e-12))


@dataclass(frozen=True)
class AtomReport:
    support_ok: bool
    size_ok: bool
    moments_ok: bool
    max_moment_residual: float

    @property
    def verdict(self) -> bool:
        return self.support_ok and self.size_ok and self.moments_ok

    def to_dict(self) -> dict:
        return {
            "support_ok": self.support_ok,
            "size_ok": self.size_ok,
            "moments_ok": self.moments_ok,
            "max_moment_residual": self.max_moment_residual,
        }


def validate_atom(a: Sequence, spec: AtomSpec, tol: float) -> AtomReport:
    """Check the support, size and cancellation conditions of a (p,q,d)-atom."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = spec.window
    support_ok = a.is_zero or (lo <= a.support[0] and a.support[1] <= hi)
    size_ok = lp_norm(a, spec.q) <= spec.size_bound + tol if not a.is_zero else True
    residual = max(abs(moment(a, k)) for k in range(spec.d + 1))
    return AtomReport(bool(support_ok), bool(size_ok), bool(residual <= tol), float(residual))


def _scaled_vandermonde(lo: int, hi: int, degree: int) -> np.ndarray:
    # span{i^k} = span{t^k} with t in [-1, 1]; far better conditioned
    i = np.arange(lo, hi + 1, dtype=np.float64)
    c = 0.5 * (lo + hi)
    h = max(0.5 * (hi - lo), 1.0)
    t = (i - c) / h
    return np.vander(t, degree + 1, increasing=True)


def _project_out(x: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, float]:
    G = V.T @ V
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > GRAM_COND_MAX:
        raise IllConditionedError(cond, "moment constraints are ill-conditioned on this window")
    for _ in range(2):
        x = x - V @ np.linalg.solve(G, V.T @ x)
    return x, cond


def random_atom(spec: AtomSpec, seed: int) -> Sequence:
    """Seeded (p, q, d)-atom on the window of ``spec``.

    Uniform values on the window are projected onto the moment-free
    subspace and rescaled to the size bound.  A draw whose projection is
    negligible is replaced by the next substream of ``seed``.
    """
    lo, hi = spec.window
    n = hi - lo + 1
    if not n > spec.d + 1:
        raise ValueError(f"window of {n} points leaves no room for {spec.d + 1} moment constraints")
    V = _scaled_vandermonde(lo, hi, spec.d)
    for attempt in range(MAX_DRAWS):
        rng = np.random.default_rng([int(seed), attempt])
        raw = rng.uniform(-1.0, 1.0, n)
        x, _ = _project_out(raw, V)
        if np.linalg.norm(x) <= 1e-8 * np.linalg.norm(raw):
            continue
        norm_q = float(np.abs(x).max()) if math.isinf(spec.q) else lp_norm(Sequence(lo, x), spec.q)
        return Sequence(lo, x * (spec.size_bound * SIZE_SAFETY / norm_q))
    raise DegenerateDrawError(f"{MAX_DRAWS} consecutive degenerate draws for seed {seed}")


def nearest_moment_free(b: Sequence, L: int, window: tuple[int, int]) -> Sequence:
    """l2-closest sequence supported in ``window`` whose moments 0..L vanish.

    c = b - V (V^T V)^-1 V^T b with V the polynomial constraint vectors
    over the window.
    """
    w_lo, w_hi = int(window[0]), int(window[1])
    n = w_hi - w_lo + 1
    if L < 0:
        raise ValueError("L must be nonnegative")
    if not n > L + 1:
        raise ValueError(f"window size {n} must exceed L + 1 = {L + 1}")
    if b.is_zero:
        return ZERO
    lo, hi = b.support
    if lo < w_lo or hi > w_hi:
        raise ValueError(f"window [{w_lo}, {w_hi}] does not contain supp(b) = [{lo}, {hi}]")
    x = np.zeros(n)
    x[lo - w_lo:hi - w_lo + 1] = b.values
    c, cond = _project_out(x, _scaled_vandermonde(w_lo, w_hi, L))
    out = Sequence(w_lo, c)
    worst = max(abs(moment(out, k)) for k in range(L + 1))
    if worst > MOMENT_TOL:
        raise IllConditionedError(cond, f"projected moments only vanish to {worst:.3e}")
    return out


@dataclass(frozen=True)
class Diverged:
    """||b||_{H^p} = +inf; ``moment_index`` is the first nonvanishing moment."""

    moment_index: int
    moment_value: float

    def to_dict(self) -> dict:
        return {"diverged": True, "moment_index": self.moment_index, "moment_value": self.moment_value}


def first_nonvanishing_moment(b: Sequence, tol: float = MOMENT_TOL) -> tuple[int, float] | None:
    """(k, moment k) for the smallest k with |moment k| > tol.

    A nonzero sequence on n points cannot have moments 0..n-1 all zero, so
    the search stops there.
    """
    if b.is_zero:
        return None
    for k in range(len(b) + 1):
        mk = moment(b, k)
        if abs(mk) > tol:
            return k, mk
    return None


def _hilbert_window_rounding(b: Sequence, J: int, p: float) -> float:
    """Upper bound for sum_{|j|<=J} |fl(Hb)(j) - (Hb)(j)|^p.

    Each computed (Hb)(j) is off by at most (n+3)u/pi * sum_i |b(i)|/|j+i+1/2|
    and |j + i + 1/2| >= max(1/2, |j| - |n0| - m - 1/2); for p <= 1 the p-th
    power of an error bounds the error of the p-th powers.
    """
    spec = TaylorTailSpec.for_sequence(b, 1)
    c = abs(spec.n0) + spec.m
    scale = (len(b) + 3) * UNIT_ROUNDOFF / math.pi * float(np.abs(b.values).sum()) * (1 + 1e-6)
    total = 0.0
    step = 1 << 20
    for start in range(0, J + 1, step):
        k = np.arange(start, min(start + step, J + 1), dtype=np.float64)
        dist = np.maximum(0.5, k - c - 0.5)
        w = np.where(k == 0, 1.0, 2.0)
        total += float((w * (scale / dist) ** p).sum())
    return total * (1 + 1e-6)


def hardy_quasinorm(b: Sequence, p: float, J: int) -> Enclosure | Diverged:
    """Enclose ||b||_p + ||Hb||_p, or report divergence.

    If moments 0..k-1 vanish and moment k does not, |(Hb)(j)| ~ |j|^-(k+1),
    which is p-summable iff (k+1)p > 1.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError(f"p must lie in (0, 1], got {p}")
    if b.is_zero:
        return Enclosure(0.0, 0.0)
    found = first_nonvanishing_moment(b)
    if found is None:
        raise RuntimeError("nonzero sequence with all moments vanishing")
    k, mk = found
    if (k + 1) * p <= 1.0:
        return Diverged(k, mk)
    spec = TaylorTailSpec.for_sequence(b, k)
    if J < hilbert_tail_threshold(spec):
        raise ValueError(f"J={J} below the tail-bound threshold {hilbert_tail_threshold(spec)}")
    tail = hilbert_tail_bound(b, spec, J, p).hi
    s = kernels.hilbert_abs_power_sum(b.offset, b.values, p, -J, J)
    n_terms = 2 * J + 1
    radius = _hilbert_window_rounding(b, J, p) + (8 * UNIT_ROUNDOFF + 4 * n_terms * UNIT_ROUNDOFF**2) * s
    s_lo = max(0.0, s - radius)
    s_hi = round_up(s + radius + tail)
    hb = Enclosure(s_lo, s_hi).power(1.0 / p)
    bp = lp_norm(b, p)
    bp_enc = Enclosure.around(bp, bp * (len(b) + 8) * 4 * UNIT_ROUNDOFF)
    return bp_enc + hb
