"""Finitely supported sequences on the integers, outward-rounded enclosures,
norms, moments and the centered maximal operator."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from discrete_hardy import kernels

EPS = np.finfo(np.float64).eps
UNIT_ROUNDOFF = EPS / 2


def round_down(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -math.inf)
    return x


def round_up(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, math.inf)
    return x


@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] known to contain an exact real number.

    Arithmetic rounds outward by one ulp per operation, which is enough
    because IEEE addition and multiplication are correctly rounded.
    Transcendental helpers widen by a few ulps to cover libm error.
    """

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("enclosure endpoints must not be NaN")
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo!r}, {hi!r}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> Enclosure:
        return cls(x, x)

    @classmethod
    def around(cls, x: float, radius: float) -> Enclosure:
        """[x - radius, x + radius], rounded outward."""
        radius = abs(float(radius))
        return cls(round_down(x - radius), round_up(x + radius))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def excludes_zero(self) -> bool:
        return self.hi < 0.0 or self.lo > 0.0

    def __add__(self, other) -> Enclosure:
        o = _as_enclosure(other)
        return Enclosure(round_down(self.lo + o.lo), round_up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> Enclosure:
        return Enclosure(-self.hi, -self.lo)

    def __sub__(self, other) -> Enclosure:
        return self + (-_as_enclosure(other))

    def __rsub__(self, other) -> Enclosure:
        return _as_enclosure(other) + (-self)

    def __mul__(self, other) -> Enclosure:
        o = _as_enclosure(other)
        products = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Enclosure(round_down(min(products)), round_up(max(products)))

    __rmul__ = __mul__

    def power(self, r: float) -> Enclosure:
        """x -> x**r on a nonnegative enclosure (monotone for r >= 0)."""
        if self.lo < 0:
            raise ValueError("power() needs a nonnegative enclosure")
        if r < 0:
            raise ValueError("power() needs a nonnegative exponent")
        return Enclosure(max(0.0, round_down(self.lo**r, 4)), round_up(self.hi**r, 4))

    def to_json(self, precision: int = 17) -> dict:
        fmt = f"{{:.{precision - 1}e}}"
        return {"lo": fmt.format(self.lo), "hi": fmt.format(self.hi), "precision": precision}

    def __repr__(self) -> str:
        return f"Enclosure({self.lo!r}, {self.hi!r})"


def _as_enclosure(x) -> Enclosure:
    if isinstance(x, Enclosure):
        return x
    return Enclosure.point(float(x))


def sum_enclosure(total: float, abs_total: float, n_terms: int, term_rel_err: float = 0.0) -> Enclosure:
    """Enclose an exact sum of n_terms reals from a floating-point total.

    ``abs_total`` is the floating sum of |computed terms|; ``term_rel_err``
    bounds the relative error of each computed term.  The radius combines
    the order-independent bound (n-1)u/(1-(n-1)u) * sum|t| for recursive or
    pairwise summation with the per-term evaluation error.
    """
    n = max(int(n_terms), 1)
    g = (n - 1) * UNIT_ROUNDOFF
    g = g / (1.0 - g)
    radius = (g + term_rel_err * (1.0 + g)) * abs_total * (1.0 + 4 * EPS)
    return Enclosure.around(total, round_up(radius + abs(total) * EPS))


class Sequence:
    """Finitely supported real sequence, stored densely over its support.

    The stored block is trimmed so its first and last entries are nonzero;
    the zero sequence has an empty block.  Instances are immutable.
    """

    __slots__ = ("_offset", "_values")

    def __init__(self, offset: int, values):
        arr = np.array(values, dtype=np.float64).ravel()
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("sequence values must be finite")
        nz = np.flatnonzero(arr)
        if nz.size == 0:
            offset, arr = 0, np.zeros(0)
        else:
            offset = int(offset) + int(nz[0])
            arr = arr[nz[0]:nz[-1] + 1].copy()
        arr.setflags(write=False)
        self._offset = int(offset)
        self._values = arr

    @property
    def offset(self) -> int:
        return self._offset

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def is_zero(self) -> bool:
        return self._values.size == 0

    def __len__(self) -> int:
        return self._values.size

    @property
    def support(self) -> tuple[int, int] | None:
        if self.is_zero:
            return None
        return self._offset, self._offset + self._values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self._offset, self._offset + self._values.size, dtype=np.int64)

    def __getitem__(self, i: int) -> float:
        k = int(i) - self._offset
        if 0 <= k < self._values.size:
            return float(self._values[k])
        return 0.0

    def _aligned(self, other: Sequence):
        if self.is_zero:
            return other.offset, np.zeros(len(other)), other.values
        if other.is_zero:
            return self.offset, self.values, np.zeros(len(self))
        lo = min(self.offset, other.offset)
        hi = max(self.support[1], other.support[1])
        a = np.zeros(hi - lo + 1)
        b = np.zeros(hi - lo + 1)
        a[self.offset - lo:self.offset - lo + len(self)] = self.values
        b[other.offset - lo:other.offset - lo + len(other)] = other.values
        return lo, a, b

    def __add__(self, other: Sequence) -> Sequence:
        lo, a, b = self._aligned(other)
        return Sequence(lo, a + b)

    def __sub__(self, other: Sequence) -> Sequence:
        lo, a, b = self._aligned(other)
        return Sequence(lo, a - b)

    def __neg__(self) -> Sequence:
        return Sequence(self._offset, -self._values)

    def __mul__(self, c: float) -> Sequence:
        return Sequence(self._offset, float(c) * self._values)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> Sequence:
        return Sequence(self._offset, self._values / float(c))

    def __abs__(self) -> Sequence:
        return Sequence(self._offset, np.abs(self._values))

    def shift(self, k: int) -> Sequence:
        """Translate: result(i) = self(i - k)."""
        return Sequence(self._offset + int(k), self._values)

    def reflect(self) -> Sequence:
        """result(i) = self(-i)."""
        if self.is_zero:
            return self
        return Sequence(-self.support[1], self._values[::-1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self._offset == other._offset and np.array_equal(self._values, other._values)

    def __hash__(self) -> int:
        return hash((self._offset, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"Sequence(offset={self._offset}, values={self._values.tolist()})"

    def to_dict(self) -> dict:
        return {"offset": self._offset, "values": self._values.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> Sequence:
        if not isinstance(obj, dict) or set(obj) != {"offset", "values"}:
            raise ValueError('sequence literal must be {"offset": int, "values": [num, ...]}')
        offset, values = obj["offset"], obj["values"]
        if isinstance(offset, bool) or not isinstance(offset, int):
            raise ValueError("sequence offset must be an integer")
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise ValueError("sequence values must be a list of numbers")
        return make_sequence(offset, values)

    @classmethod
    def from_json(cls, text: str) -> Sequence:
        return cls.from_dict(json.loads(text))


ZERO = Sequence(0, [])


def make_sequence(offset: int, values: Iterable[float]) -> Sequence:
    """Build a trimmed sequence with ``values[k]`` at index ``offset + k``.

    An all-zero block gives the canonical zero sequence ``ZERO``.
    """
    values = list(values)
    if not values:
        raise ValueError("value list must be nonempty")
    seq = Sequence(offset, values)
    return ZERO if seq.is_zero else seq


def delta(i: int = 0, value: float = 1.0) -> Sequence:
    return make_sequence(i, [value])


def lp_norm(b: Sequence, p: float) -> float:
    """(sum |b(i)|^p)^(1/p); sup |b(i)| for p = inf."""
    p = float(p)
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if b.is_zero:
        return 0.0
    a = np.abs(b.values)
    if math.isinf(p):
        return float(a.max())
    if p == 1.0:
        return math.fsum(a.tolist())
    return math.fsum((a**p).tolist()) ** (1.0 / p)


def moment(b: Sequence, k: int) -> float:
    """sum_i i^k b(i), with 0^0 = 1."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if b.is_zero:
        return 0.0
    return math.fsum(float(i**k) * v for i, v in zip(range(b.offset, b.offset + len(b)), b.values.tolist()))


def maximal_window(b: Sequence, js) -> np.ndarray:
    js = np.asarray(js, dtype=np.int64)
    if b.is_zero:
        return np.zeros(js.shape[0])
    return kernels.maximal_window(b.offset, np.abs(b.values), js)


def maximal_apply(b: Sequence, j: int) -> float:
    """Centered maximal function sup_N (2N+1)^-1 sum_{|i-j|<=N} |b(i)|.

    Windows wider than the one reaching the far end of the support only
    lower the average, so the sup is a finite max.
    """
    return float(maximal_window(b, [int(j)])[0])
