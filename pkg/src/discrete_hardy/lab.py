"""Empirical harness for the inequalities, pointwise estimates and
(un)boundedness claims around the fractional series operator.

Checks of proven inequalities must hold on every sample; empirical constants
whose true value is unknown are reported and only their stability is judged.
"""

from __future__ import annotations

import math

import numpy as np

from discrete_hardy import kernels
from discrete_hardy.atoms import AtomSpec, critical_degree, random_atom
from discrete_hardy.operators import (
    MOMENT_TOL,
    PARAM_TOL,
    MomentConditionError,
    OperatorParams,
    TaylorTailSpec,
    fractional_window,
    hilbert_tail_bound,
    hilbert_tail_threshold,
    image_tail_bound,
)
from discrete_hardy.report import ExperimentReport, ratio
from discrete_hardy.seqcore import (
    EPS,
    UNIT_ROUNDOFF,
    Sequence,
    delta,
    lp_norm,
    maximal_apply,
    maximal_window,
    moment,
    round_up,
)

# weak (1,1) constant of the centered maximal operator on Z from the
# Vitali-type covering argument
WEAK_TYPE_REFERENCE = 3.0
HLP_SIZES = (8, 16, 32, 64, 128, 256, 512)


def _seeded(seed):
    return np.random.default_rng(int(seed))


# -- Hilbert's double series ---------------------------------------------------

def hilbert_form(values) -> float:
    """sum_{i,j>=1} b(i) b(j) / (i + j) for b given on 1..len(values)."""
    b = np.asarray(values, dtype=np.float64)
    i = np.arange(1, b.size + 1, dtype=np.float64)
    return float(b @ (1.0 / (i[:, None] + i[None, :])) @ b)


def hilbert_inequality_check(trials: int, max_support: int, seed: int) -> ExperimentReport:
    """Random nonnegative b on {1..S}, S <= max_support, against 2 pi ||b||_2^2."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if max_support < 1:
        raise ValueError("max_support must be >= 1")
    rng = _seeded(seed)
    worst = 0.0
    rows = []
    for t in range(trials):
        size = int(rng.integers(1, max_support + 1))
        b = rng.uniform(0.0, 1.0, size)
        lhs = hilbert_form(b)
        rhs = 2.0 * math.pi * math.fsum((b * b).tolist())
        r = ratio(lhs, rhs)
        worst = max(worst, r)
        rows.append({"trial": t, "support": size, "lhs": lhs, "rhs": rhs, "ratio": r})
    return ExperimentReport(
        name="hilbert_inequality",
        parameters={"trials": trials, "max_support": max_support, "seed": seed},
        samples=trials,
        worst_ratio=worst,
        artifacts=rows,
    )


# -- Hardy-Littlewood-Polya ------------------------------------------------------

def hlp_exponent(p: float, q: float) -> float:
    if not (p > 1.0 and q > 1.0):
        raise ValueError(f"need p > 1 and q > 1, got p={p}, q={q}")
    if not 1.0 / p + 1.0 / q > 1.0:
        raise ValueError(f"need 1/p + 1/q > 1, got {1.0 / p + 1.0 / q}")
    return 2.0 - 1.0 / p - 1.0 / q


def _hlp_matrix(n: int, lam: float) -> np.ndarray:
    d = np.abs(np.subtract.outer(np.arange(n), np.arange(n))).astype(np.float64)
    with np.errstate(divide="ignore"):
        return np.where(d == 0, 0.0, d ** (-lam))


def hlp_form(b: Sequence, c: Sequence, lam: float) -> float:
    """sum_{i != j} |i - j|^-lam b(i) c(j)."""
    if b.is_zero or c.is_zero:
        return 0.0
    d = np.abs(np.subtract.outer(b.indices, c.indices)).astype(np.float64)
    with np.errstate(divide="ignore"):
        k = np.where(d == 0, 0.0, d ** (-lam))
    return float(b.values @ k @ c.values)


def hlp_inequality_check(p: float, q: float, trials: int, seed: int) -> ExperimentReport:
    """Empirical constant |<K b, c>| / (||b||_p ||c||_q) across support sizes.

    Samples are nonnegative so the constant probes the worst case instead
    of averaging out by cancellation.  The verdict only asks the per-size
    maxima to agree within a factor 2.
    """
    lam = hlp_exponent(p, q)
    if trials < len(HLP_SIZES):
        raise ValueError(f"need at least {len(HLP_SIZES)} trials (one per support size)")
    rng = _seeded(seed)
    per_size = trials // len(HLP_SIZES)
    extra = trials - per_size * len(HLP_SIZES)
    rows = []
    best = {}
    for k, n in enumerate(HLP_SIZES):
        K = _hlp_matrix(n, lam)
        count = per_size + (1 if k < extra else 0)
        for _ in range(count):
            b = rng.uniform(0.0, 1.0, n)
            c = rng.uniform(0.0, 1.0, n)
            lhs = abs(float(b @ K @ c))
            rhs = float(np.sum(b**p) ** (1.0 / p) * np.sum(c**q) ** (1.0 / q))
            const = ratio(lhs, rhs)
            best[n] = max(best.get(n, 0.0), const)
            rows.append({"support": n, "constant": const})
    spread = max(best.values()) / min(best.values())
    return ExperimentReport(
        name="hlp_inequality",
        parameters={"p": p, "q": q, "lambda": lam, "trials": trials, "seed": seed},
        samples=trials,
        worst_ratio=spread / 2.0,
        artifacts=rows,
        summary={"max_constant_per_size": {str(n): v for n, v in best.items()}, "spread": spread},
    )


# -- H(Hb) = b ---------------------------------------------------------------------

def _abs_hilbert_bound(weights_offset: int, weights: np.ndarray, js: np.ndarray) -> np.ndarray:
    """(1/pi) sum_i w(i) / |j + i + 1/2| for nonnegative w."""
    out = np.zeros(js.size)
    base = js.astype(np.float64) + weights_offset + 0.5
    for u, w in enumerate(weights):
        if w != 0.0:
            out += w / np.abs(base + u)
    return out / math.pi


def involution_check(b: Sequence, J: int) -> ExperimentReport:
    """Apply H to the truncation of Hb to [-J, J] and compare with b on supp(b).

    H is symmetric with H^2 = I on l^2, so it is an isometry and the
    truncation error is at most the l^2 norm of Hb beyond J.  Rounding of
    both passes is added to the bound explicitly.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    for k in range(2):
        mk = moment(b, k)
        if abs(mk) > MOMENT_TOL:
            raise MomentConditionError(f"moment {k} = {mk!r} does not vanish")
    params = {"sequence": b.to_dict(), "J": J}
    if b.is_zero:
        return ExperimentReport("involution", params, 1, 0.0, summary={"error": 0.0, "bound": 0.0})
    spec = TaylorTailSpec.for_sequence(b, 2)
    if J < hilbert_tail_threshold(spec):
        raise ValueError(f"J must be >= {hilbert_tail_threshold(spec)}")
    grid = np.arange(-J, J + 1, dtype=np.int64)
    c = kernels.hilbert_window(b.offset, b.values, grid)
    # second pass summed exactly (fsum) so the truncation effect is what is measured
    back = np.empty(len(b))
    rho_back = np.empty(len(b))
    rho_c = (len(b) + 3) * UNIT_ROUNDOFF * _abs_hilbert_bound(b.offset, np.abs(b.values), grid)
    for t, j in enumerate(b.indices):
        den = np.abs(grid + (j + 0.5))
        terms = c / (grid + (j + 0.5))
        back[t] = math.fsum(terms.tolist()) / math.pi
        spread = math.fsum(((rho_c + 2 * UNIT_ROUNDOFF * np.abs(c)) / den).tolist()) / math.pi
        rho_back[t] = spread + 4 * UNIT_ROUNDOFF * abs(back[t])
    error = float(np.linalg.norm(back - b.values))

    truncation = math.sqrt(hilbert_tail_bound(b, spec, J, 2.0).hi)
    rounding = float(np.linalg.norm(rho_back))
    bound = round_up((truncation + rounding + 4 * EPS * float(np.linalg.norm(b.values))) * (1.0 + 1e-6))
    return ExperimentReport(
        name="involution",
        parameters=params,
        samples=int(b.indices.size),
        worst_ratio=ratio(error, bound),
        summary={"error": error, "bound": bound, "truncation_bound": truncation, "rounding_bound": rounding},
    )


# -- weak type (1,1) of M ------------------------------------------------------------

def level_set_radius(l1: float, alpha: float) -> int:
    """Mb(j) <= ||b||_1 / (2 d + 1) at distance d from supp(b), so Mb(j) > alpha
    forces d < (||b||_1/alpha - 1)/2."""
    return max(0, math.ceil((l1 / alpha - 1.0) / 2.0))


def weak_type_check(b: Sequence, alphas, window: tuple[int, int] | None = None) -> ExperimentReport:
    """C(alpha) = alpha #{j : Mb(j) > alpha} / ||b||_1 for each level.

    The scanned window always contains the certified level-set radius; a
    caller-supplied window can only enlarge it.
    """
    levels = sorted(float(a) for a in alphas)
    if not levels or levels[0] <= 0:
        raise ValueError("alphas must be a nonempty list of positive levels")
    params = {"sequence": b.to_dict(), "alphas": levels, "window": window}
    if b.is_zero:
        rows = [{"alpha": a, "count": 0, "constant": 0.0} for a in levels]
        return ExperimentReport("weak_type", params, len(levels), 0.0, artifacts=rows)
    l1 = lp_norm(b, 1)
    lo, hi = b.support
    r = level_set_radius(l1, levels[0])
    w_lo, w_hi = lo - r, hi + r
    if window is not None:
        w_lo, w_hi = min(w_lo, int(window[0])), max(w_hi, int(window[1]))
    mb = maximal_window(b, np.arange(w_lo, w_hi + 1))
    rows = []
    counts = []
    for a in levels:
        count = int(np.count_nonzero(mb > a))
        counts.append(count)
        rows.append({"alpha": a, "count": count, "constant": a * count / l1})
    worst = max(row["constant"] for row in rows) / WEAK_TYPE_REFERENCE
    nested = all(c1 >= c2 for c1, c2 in zip(counts, counts[1:]))
    return ExperimentReport(
        name="weak_type",
        parameters=params,
        samples=len(levels),
        worst_ratio=worst if nested else math.inf,
        artifacts=rows,
        summary={"reference_constant": WEAK_TYPE_REFERENCE, "window": [w_lo, w_hi], "nested": nested},
    )


# -- pointwise domination for gamma = 0 ------------------------------------------

def region_constant(exponent: float) -> float:
    """2^(2+a) / (1 - 2^-(1-a)): the dyadic-shell constant for exponent a."""
    return round_up(2.0 ** (2.0 + exponent) / (-math.expm1(-(1.0 - exponent) * math.log(2.0))), 4)


def _power_tail_sum(K: int, r: float, direct: int = 10_000) -> float:
    """Upper bound for sum_{i > K} i^-r, r > 1: direct terms plus an integral.

    x^-r is convex, so each term is at most its integral over [i - 1/2, i + 1/2].
    """
    i = np.arange(K + 1, K + direct + 1, dtype=np.float64)
    head = math.fsum((i ** (-r)).tolist())
    tail = (K + direct + 0.5) ** (1.0 - r) / (r - 1.0)
    return round_up((head + tail) * (1.0 + (direct + 8) * EPS), 4)


def far_region_constant(j0: int, p: float) -> float:
    """Factor F with sum over |i| > 2|j0| of the gamma = 0 kernel <= F ||b||_p.

    There |i -/+ j0| > |i|/2, so each term is at most 2 |b(i)| / |i|, and
    Holder with the conjugate exponent gives the rest.
    """
    K = 2 * abs(int(j0))
    if p == 1.0:
        return round_up(2.0 / (K + 1))
    if not p > 1.0:
        raise ValueError("p must be >= 1")
    if math.isinf(p):
        raise ValueError("p must be finite")
    pc = p / (p - 1.0)
    return round_up(2.0 * (2.0 * _power_tail_sum(K, pc)) ** (1.0 / pc), 4)


def _regions(b: Sequence, j0: int):
    i = b.indices
    a = abs(j0)
    r1 = (np.abs(i - j0) > 0) & (np.abs(i - j0) <= a)
    r2 = (np.abs(i + j0) > 0) & (np.abs(i + j0) <= a)
    r3 = np.abs(i) > 2 * a
    return r1, r2, r3


def pointwise_domination_check(b: Sequence, j0: int, params: OperatorParams, p: float) -> ExperimentReport:
    """Split the sum defining |T b(j0)| over the three index regions and
    test each against its explicit majorant."""
    j0 = int(j0)
    if j0 == 0:
        raise ValueError("j0 must be nonzero")
    if abs(params.gamma) > PARAM_TOL:
        raise ValueError("the regional split applies to gamma = 0 only")
    if not p >= 1.0:
        raise ValueError("p must be >= 1")
    al, be = params.alpha, params.beta
    parameters = {"sequence": b.to_dict(), "j0": j0, "alpha": al, "beta": be, "p": p}
    if b.is_zero:
        sums = [0.0, 0.0, 0.0]
        total = 0.0
        abs_b = b
    else:
        i = b.indices
        abs_b = abs(b)
        terms = np.zeros(i.size)
        live = (i != j0) & (i != -j0)
        terms[live] = np.abs(b.values[live]) / (
            np.abs(i[live] - j0).astype(np.float64) ** al * np.abs(i[live] + j0).astype(np.float64) ** be
        )
        sums = [math.fsum(terms[mask].tolist()) for mask in _regions(b, j0)]
        total = abs(float(fractional_window(b, params, [j0])[0]))
    bounds = [
        round_up(region_constant(al) * maximal_apply(abs_b, j0), 4),
        round_up(region_constant(be) * maximal_apply(abs_b, -j0), 4),
        round_up(far_region_constant(j0, p) * (lp_norm(b, p) if not b.is_zero else 0.0), 4),
    ]
    slack = 1.0 + 64 * EPS
    rows = [
        {"region": name, "lhs": s, "rhs": r, "ratio": ratio(s, r * slack)}
        for name, s, r in zip(("I1", "I2", "I3"), sums, bounds)
    ]
    # |T b(j0)| comes from a plain running sum over the support
    total_slack = 1.0 + (len(b) + 16) * EPS
    rows.append({"region": "total", "lhs": total, "rhs": sum(sums), "ratio": ratio(total, sum(sums) * total_slack)})
    return ExperimentReport(
        name="pointwise_domination",
        parameters=parameters,
        samples=1,
        worst_ratio=max(row["ratio"] for row in rows),
        artifacts=rows,
        summary={"region_worst_ratio": max(row["ratio"] for row in rows[:3])},
    )


def random_sequence(rng: np.random.Generator, max_len: int, offset_range: tuple[int, int]) -> Sequence:
    """Uniform values in [-1, 1] on a random contiguous block."""
    n = int(rng.integers(1, max_len + 1))
    offset = int(rng.integers(offset_range[0], offset_range[1] + 1))
    return Sequence(offset, rng.uniform(-1.0, 1.0, n))


def domination_sweep(trials: int, seed: int, params: OperatorParams, p: float, j0_max: int = 64) -> ExperimentReport:
    """Many seeded (b, j0) samples of ``pointwise_domination_check``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = _seeded(seed)
    worst = 0.0
    region_worst = 0.0
    violations = 0
    rows = []
    for t in range(trials):
        j0 = int(rng.integers(1, j0_max + 1)) * (1 if rng.random() < 0.5 else -1)
        b = random_sequence(rng, 6 * j0_max, (-6 * j0_max, 3 * j0_max))
        rep = pointwise_domination_check(b, j0, params, p)
        worst = max(worst, rep.worst_ratio)
        region_worst = max(region_worst, rep.summary["region_worst_ratio"])
        violations += not rep.verdict
        rows.append({"trial": t, "j0": j0, "worst_ratio": rep.worst_ratio})
    return ExperimentReport(
        name="domination_sweep",
        parameters={"trials": trials, "seed": seed, "alpha": params.alpha, "beta": params.beta, "p": p, "j0_max": j0_max},
        samples=trials,
        worst_ratio=worst,
        artifacts=rows,
        summary={"violations": violations, "region_worst_ratio": region_worst},
    )


# -- uniform bound on atom images ---------------------------------------------------

def image_exponent(p: float, gamma: float) -> float:
    """q with 1/q = 1/p - gamma."""
    inv = 1.0 / p - gamma
    if not inv > 0:
        raise ValueError(f"1/p - gamma = {inv} must be positive")
    return 1.0 / inv


def atom_image_norm(a: Sequence, atom: AtomSpec, gamma: float) -> dict:
    """||T a||_q with alpha = beta = (1 - gamma)/2 and 1/q = 1/p - gamma.

    Window [-J, J] with J = 3m + 3|n0| is summed directly and the rest is
    covered by the certified Taylor tail.  Returns the window sum, the tail
    bound and the resulting estimate.
    """
    params = OperatorParams.symmetric(gamma)
    q = image_exponent(atom.p, gamma)
    N = atom.d + 1
    J = 3 * atom.m + 3 * abs(atom.n0)
    spec = TaylorTailSpec(N, atom.n0, atom.m, lp_norm(a, 1) if not a.is_zero else 0.0)
    window = kernels.frac_abs_power_sum(a.offset, a.values, params.alpha, params.beta, q, -J, J)
    tail = image_tail_bound(a, params, spec, J, q).hi
    return {"q": q, "J": J, "window_sum": window, "tail_bound": tail, "norm": (window + tail) ** (1.0 / q)}


def atom_image_sweep(p: float, gamma: float, m_values, trials_per_m: int, seed: int) -> ExperimentReport:
    """Sup of ||T a||_q over random (p, inf, d_p)-atoms, per half-width m.

    A uniform bound shows up as suprema that do not grow with m; the verdict
    asks the last m's supremum to stay within twice the first one's.
    """
    ms = [int(m) for m in m_values]
    if not ms or min(ms) < 1:
        raise ValueError("m_values must be a nonempty list of positive integers")
    if trials_per_m < 1:
        raise ValueError("trials_per_m must be >= 1")
    q = image_exponent(p, gamma)
    d = critical_degree(p)
    if not q * (1.0 - gamma + d + 1) > 1.0:
        raise ValueError("tail bound inapplicable: q(1 - gamma + N) <= 1")
    rng = _seeded(seed)
    rows = []
    sups = {}
    for m in ms:
        for _ in range(trials_per_m):
            n0 = int(rng.integers(-4 * m, 4 * m + 1))
            atom = AtomSpec(p, math.inf, d, n0, m)
            a = random_atom(atom, int(rng.integers(0, 2**62)))
            res = atom_image_norm(a, atom, gamma)
            sups[m] = max(sups.get(m, 0.0), res["norm"])
            rows.append({"m": m, "n0": n0, **res})
    first, last = sups[ms[0]], sups[ms[-1]]
    return ExperimentReport(
        name="atom_image_sweep",
        parameters={"p": p, "gamma": gamma, "q": q, "d": d, "m_values": ms,
                    "trials_per_m": trials_per_m, "seed": seed},
        samples=len(rows),
        worst_ratio=ratio(last, 2.0 * first),
        artifacts=rows,
        summary={"sup_per_m": {str(m): v for m, v in sups.items()}},
    )


# -- unboundedness examples ---------------------------------------------------------

def unbounded_examples_demo(gamma: float, J_list) -> ExperimentReport:
    """Delta example and, for gamma > 0, the logarithmic example.

    T delta_0 = |j|^(gamma-1), whose q-th power sum with q = 1/(1-gamma)
    is the harmonic sum; for b(i) = |i|^-gamma / log|i| the partial sums of
    (Tb)(0) are sum 2/(i log i), which grow like 2 log log B.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must lie in [0, 1)")
    Js = sorted(int(J) for J in J_list)
    if not Js or Js[0] < 2:
        raise ValueError("J_list must contain integers >= 2")
    params = OperatorParams.symmetric(gamma)
    q = 1.0 / (1.0 - gamma)

    js = np.arange(-1000, 1001)
    got = fractional_window(delta(0), params, js)
    with np.errstate(divide="ignore"):
        want = np.where(js == 0, 0.0, np.abs(js).astype(np.float64) ** (gamma - 1.0))
    delta_err = float(np.max(np.where(want > 0, np.abs(got - want) / np.where(want > 0, want, 1.0), np.abs(got))))
    delta_ok = delta_err <= 8 * EPS

    rows = []
    harmonic = []
    for J in Js:
        k = np.arange(1, J + 1, dtype=np.float64)
        s = 2.0 * math.fsum((k ** ((gamma - 1.0) * q)).tolist())
        harmonic.append(s)
        rows.append({"example": "delta", "J": J, "partial_sum": s, "rate": s / (2.0 * math.log(J))})
    growing = all(b > a for a, b in zip(harmonic, harmonic[1:]))

    if gamma > 0:
        logs = kernels.log_example_sums(gamma, params.alpha, params.beta, np.array(Js))
        for J, s in zip(Js, logs):
            rate = s / (2.0 * math.log(math.log(J))) if J > 2 else math.nan
            rows.append({"example": "log", "J": J, "partial_sum": float(s), "rate": rate})
        growing = growing and all(b > a for a, b in zip(logs, logs[1:]))

    return ExperimentReport(
        name="unbounded_examples",
        parameters={"gamma": gamma, "q": q, "J_list": Js},
        samples=len(rows),
        worst_ratio=0.0 if (delta_ok and growing) else math.inf,
        artifacts=rows,
        summary={"delta_max_rel_error": delta_err, "strictly_increasing": growing},
    )
