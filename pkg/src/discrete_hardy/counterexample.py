"""Certified evaluation of the U_gamma counterexample.

U_gamma = T_{(1-gamma)/2, (1-gamma)/2} applied to b = (1, -2, 1) on
{-1, 0, 1} has total sum

    S(gamma) = -2 + 4 * sum_{j>=2} [(j^2-1)^-s - j^-2s],   s = (1-gamma)/2,

and S(gamma) != 0 puts U_gamma b outside every H^q with q <= 1 (an element of
H^q, q <= 1, has vanishing total sum) although b itself lies in H^p for
1/2 < p <= 1.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from mpmath import iv

from discrete_hardy import kernels
from discrete_hardy.atoms import first_nonvanishing_moment, nearest_moment_free
from discrete_hardy.operators import OperatorParams, TaylorTailSpec, fractional_window, image_tail_bound
from discrete_hardy.report import ExperimentReport, ratio, strict_ratio
from discrete_hardy.seqcore import (
    EPS,
    UNIT_ROUNDOFF,
    Enclosure,
    lp_norm,
    make_sequence,
    moment,
    round_up,
    sum_enclosure,
)

COUNTER_SEQUENCE = make_sequence(-1, [1.0, -2.0, 1.0])
IV_DPS = 40
Q_TOL = 1e-12


class SignCheckError(RuntimeError):
    """An endpoint sign of g - h came out opposite to what the bisection needs."""


class InconclusiveEnclosure(RuntimeError):
    """The total-sum enclosure contains 0; a larger J may settle it."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


def _check_gamma(gamma, upper=1.0):
    if not 0.0 <= gamma < upper:
        raise ValueError(f"gamma must lie in [0, {upper:g}), got {gamma}")


def u_apply_closed(gamma: float, j: int) -> float:
    """Closed form of (U_gamma b)(j) for b = (1, -2, 1)."""
    _check_gamma(gamma)
    j = abs(int(j))
    if j == 1:
        return -2.0
    if j == 0:
        return 2.0
    s = (1.0 - gamma) / 2.0
    return 2.0 / float(j * j - 1) ** s - 2.0 / float(j) ** (1.0 - gamma)


def _term_rel_err(J: int) -> float:
    # 1/j^2, log1p, expm1, pow and the rounding of s each cost a few ulps;
    # the rounded exponent 2s perturbs j^-2s by about ln(j) ulps
    return (24.0 + 2.0 * math.log(J)) * UNIT_ROUNDOFF


def term_tail_bound(s: float, J: int) -> float:
    """Upper bound for sum_{j>J} [(j^2-1)^-s - j^-2s].

    Mean value theorem on x -> x^-s gives term_j <= s (j^2-1)^(-s-1); that is
    decreasing in j, so the sum is at most
    int_J^inf s (x^2-1)^(-s-1) dx <= s (1 - J^-2)^(-s-1) J^(-2s-1) / (2s+1).
    """
    J = float(J)
    val = s * (1.0 - 1.0 / (J * J)) ** (-s - 1.0) * J ** (-2.0 * s - 1.0) / (2.0 * s + 1.0)
    return round_up(val * (1.0 + 64 * EPS))


def term_sum_enclosure(gamma: float, j_start: int, J: int) -> Enclosure:
    """Enclose sum_{j>=j_start} [(j^2-1)^-s - j^-2s] (all terms positive)."""
    s = (1.0 - gamma) / 2.0
    total, abs_total = kernels.ce_term_sum(s, j_start, J)
    partial = sum_enclosure(total, abs_total, J - j_start + 1, _term_rel_err(J))
    partial = Enclosure(max(partial.lo, 0.0), partial.hi)
    return partial + Enclosure(0.0, term_tail_bound(s, J))


def total_sum_enclosure(gamma: float, J: int) -> Enclosure:
    """Enclose S(gamma) = sum_j (U_gamma b)(j) from the exact partial sum to J
    and a one-sided tail interval."""
    _check_gamma(gamma)
    if J < 10:
        raise ValueError("J must be >= 10")
    return -2.0 + 4.0 * term_sum_enclosure(gamma, 2, J)


def g_eval(gamma: float) -> float:
    _check_gamma(gamma)
    return 3.0 ** (-(1.0 - gamma) / 2.0) - 2.0 ** (-(1.0 - gamma))


def h_eval(gamma: float) -> float:
    _check_gamma(gamma, 1.0 / 3.0)
    return 0.5 - 8.0 ** (-(1.0 - gamma) / 2.0)


@contextmanager
def _iv_precision(dps):
    saved = iv.dps
    iv.dps = dps
    try:
        yield
    finally:
        iv.dps = saved


def _g_iv(x):
    return 3 ** (-(1 - x) / 2) - 2 ** (-(1 - x))


def _h_iv(x):
    return iv.mpf(1) / 2 - 8 ** (-(1 - x) / 2)


def _g_minus_h_iv(x):
    with _iv_precision(IV_DPS):
        return _g_iv(x) - _h_iv(x)


def _sign(x) -> int:
    v = _g_minus_h_iv(iv.mpf(x) if not isinstance(x, iv.mpf) else x)
    if v.b < 0:
        return -1
    if v.a > 0:
        return 1
    return 0


def _g_minus_h_increasing() -> bool:
    """Interval check that d/dgamma (g - h) > 0 on all of [0, 1/3]."""
    with _iv_precision(IV_DPS):
        s = (1 - iv.mpf([0, 1]) / 3) / 2
        d = (iv.log(3) * 3 ** (-s) - iv.log(4) * 4 ** (-s) + iv.log(8) * 8 ** (-s)) / 2
        return bool(d.a > 0)


def epsilon_root(tolerance: float) -> Enclosure:
    """Bisection enclosure of the root of g - h in (0, 1/3).

    Endpoint signs and each midpoint sign are decided in interval
    arithmetic; g - h is certified increasing on [0, 1/3], so this root is
    the only one and every gamma below it has g < h.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if _sign(0.0) != -1:
        raise SignCheckError("g - h is not certified negative at gamma = 0")
    with _iv_precision(IV_DPS):
        third = iv.mpf(1) / 3
    if _sign(third) != 1:
        raise SignCheckError("g - h is not certified positive at gamma = 1/3")
    if not _g_minus_h_increasing():
        raise SignCheckError("could not certify that g - h is increasing on [0, 1/3]")
    lo, hi = 0.0, math.nextafter(1.0 / 3.0, 0.0)
    if _sign(hi) != 1:
        hi = 1.0 / 3.0
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        sgn = _sign(mid)
        if sgn < 0:
            lo = mid
        elif sgn > 0:
            hi = mid
        else:
            break
    return Enclosure(lo, hi)


@lru_cache(maxsize=None)
def _epsilon_lower() -> float:
    return epsilon_root(1e-12).lo


def _pow_enclosure(base: float, exponent: float) -> Enclosure:
    v = base**exponent
    return Enclosure.around(v, 4 * EPS * v)


def paper_chain_check(gamma: float, J: int = 10**6) -> ExperimentReport:
    """Verify the inequality chain behind S(gamma) < 0, term by term.

    (i)   sum_{j>=3} term_j <= 8^-s (the intervals [j^-2s, (j^2-1)^-s],
          j >= 3, are disjoint inside (0, 8^-s])
    (ii)  sum_{j>=2} term_j <= 8^-s + g(gamma)
    (iii) 8^-s + g(gamma) < 1/2
    (iv)  S(gamma) < 0
    """
    _check_gamma(gamma, 1.0 / 3.0)
    eps_lo = _epsilon_lower()
    if not gamma < eps_lo:
        raise ValueError(f"gamma={gamma} is not below the certified epsilon lower end {eps_lo}")
    s = (1.0 - gamma) / 2.0
    eight = _pow_enclosure(8.0, -s)
    g = Enclosure.around(g_eval(gamma), 8 * EPS)
    from_three = term_sum_enclosure(gamma, 3, J)
    from_two = term_sum_enclosure(gamma, 2, J)
    total = total_sum_enclosure(gamma, J)

    jj = np.arange(2, 10**4 + 1, dtype=np.float64)
    e = gamma - 1.0
    a = (jj + 1) ** e
    b = ((jj + 1) ** 2 - 1) ** (e / 2)
    c = jj**e
    d = (jj * jj - 1) ** (e / 2)
    ordered = bool(np.all((a < b) & (b < c) & (c < d)))

    bound_ii = eight + g
    rows = [
        {"check": "tail_from_3_le_8^-s", "lhs": from_three.hi, "rhs": eight.lo,
         "ratio": ratio(from_three.hi, eight.lo) if ordered else math.inf,
         "ordering_checked_to": 10**4, "ordering_ok": ordered},
        {"check": "sum_from_2_le_8^-s_plus_g", "lhs": from_two.hi, "rhs": bound_ii.lo,
         "ratio": ratio(from_two.hi, bound_ii.lo)},
        {"check": "8^-s_plus_g_lt_half", "lhs": bound_ii.hi, "rhs": 0.5,
         "ratio": strict_ratio(bound_ii.hi, 0.5)},
        {"check": "total_sum_negative", "lhs": round_up(2.0 + total.hi), "rhs": 2.0,
         "ratio": strict_ratio(round_up(2.0 + total.hi), 2.0)},
    ]
    for row in rows:
        row["verdict"] = row["ratio"] <= 1.0
    worst = max(row["ratio"] for row in rows)
    params = {"gamma": gamma, "J": J, "epsilon_lower": eps_lo}
    return ExperimentReport("paper_chain_check", params, len(rows), worst, artifacts=rows,
                            summary={"total_sum": total})


@dataclass
class CounterexampleCertificate:
    gamma: float
    p: float
    q: float
    sum_enclosure: Enclosure
    b_in_Hp: bool
    witness: dict = field(default_factory=dict)

    @property
    def conclusion(self) -> bool:
        return bool(self.sum_enclosure.excludes_zero() and self.b_in_Hp)

    def to_dict(self, precision: int = 17) -> dict:
        return {
            "gamma": self.gamma,
            "p": self.p,
            "q": self.q,
            "sum_enclosure": self.sum_enclosure.to_json(precision),
            "b_in_Hp": self.b_in_Hp,
            "witness": self.witness,
            "conclusion": self.conclusion,
        }


def hp_membership_witness(p: float) -> tuple[bool, dict]:
    """b = (1, -2, 1) has moments 0, 1 vanishing and moment 2 = 2, so |Hb(j)|
    decays like |j|^-3 and b is in H^p whenever 3p > 1."""
    k, mk = first_nonvanishing_moment(COUNTER_SEQUENCE)
    witness = {
        "moments": [moment(COUNTER_SEQUENCE, i) for i in range(k + 1)],
        "first_nonvanishing_moment": k,
        "decay_exponent_times_p": (k + 1) * p,
    }
    return (k + 1) * p > 1.0, witness


def certify_unbounded(gamma: float, p: float, J: int = 10**6) -> CounterexampleCertificate:
    """Certificate that U_gamma maps b in H^p outside H^q, 1/q = 1/p - gamma."""
    _check_gamma(gamma)
    if not 0.5 < p <= 1.0:
        raise ValueError(f"p must lie in (1/2, 1], got {p}")
    inv_q = 1.0 / p - gamma
    if not inv_q > 0:
        raise ValueError("1/p - gamma must be positive")
    q = 1.0 / inv_q
    if q > 1.0 + Q_TOL:
        raise ValueError(
            f"q = {q!r} > 1: the vanishing-sum property of H^q needs q <= 1, i.e. p <= 1/(1+gamma)"
        )
    in_hp, witness = hp_membership_witness(p)
    witness["gamma_below_epsilon"] = gamma < _epsilon_lower()
    cert = CounterexampleCertificate(gamma, p, q, total_sum_enclosure(gamma, J), in_hp, witness)
    if not cert.sum_enclosure.excludes_zero():
        raise InconclusiveEnclosure(f"sum enclosure {cert.sum_enclosure} contains 0; raise J", cert)
    return cert


def sign_scan(gamma_grid, J: int = 10**6) -> ExperimentReport:
    """Sign of S(gamma) over a grid, from enclosures.

    worst_ratio is max 2 * sum_{j>=2} term_j (upper end); S < 0 exactly when
    that is below 1.
    """
    grid = [float(g) for g in gamma_grid]
    rows = []
    worst = 0.0
    for gamma in grid:
        _check_gamma(gamma)
        enc = total_sum_enclosure(gamma, J)
        if enc.hi < 0:
            sign = "negative"
        elif enc.lo > 0:
            sign = "positive"
        else:
            sign = "inconclusive"
        rows.append({"gamma": gamma, "sum_enclosure": enc, "sign": sign})
        worst = max(worst, strict_ratio(round_up(2.0 + enc.hi), 2.0))
    return ExperimentReport("sign_scan", {"gamma_grid": grid, "J": J}, len(rows), worst, artifacts=rows)


def moment_free_perturbation(gamma: float, L: int, window: tuple[int, int], J: int) -> ExperimentReport:
    """Project b onto sequences with moments 0..L vanishing over ``window`` and
    enclose sum_j (U_gamma c)(j) for the projection c.

    The window part is summed directly; |j| > J is covered by the
    Taylor-remainder tail bound with q = 1.
    """
    _check_gamma(gamma)
    c = nearest_moment_free(COUNTER_SEQUENCE, L, window)
    params = {"gamma": gamma, "L": L, "window": list(window), "J": J}
    if c.is_zero:
        return ExperimentReport("moment_free_perturbation", params, 0, 0.0,
                                summary={"sequence": c.to_dict(), "sum_enclosure": Enclosure(0.0, 0.0)})
    op = OperatorParams.symmetric(gamma)
    spec = TaylorTailSpec.for_sequence(c, L + 1)
    J = max(int(J), 3 * spec.m + 3 * abs(spec.n0))
    js = np.arange(-J, J + 1)
    vals = fractional_window(c, op, js)
    # each computed value is off by at most ~(n + 8) ulps of sum_i |c(i)| K(i, j)
    mass = float(fractional_window(abs(c), op, js).sum())
    part = sum_enclosure(math.fsum(vals.tolist()), mass, vals.size, 4 * (len(c) + 8) * UNIT_ROUNDOFF)
    tail = image_tail_bound(c, op, spec, J, 1.0)
    enc = part + Enclosure(-tail.hi, tail.hi)
    summary = {
        "sequence": c.to_dict(),
        "l2_distance": lp_norm(c - COUNTER_SEQUENCE, 2.0),
        "sum_enclosure": enc,
        "sign": "negative" if enc.hi < 0 else "positive" if enc.lo > 0 else "inconclusive",
    }
    return ExperimentReport("moment_free_perturbation", params, int(vals.size), 0.0, summary=summary)
