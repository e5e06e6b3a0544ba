import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discrete_hardy import lab
from discrete_hardy.atoms import AtomSpec
from discrete_hardy.operators import MomentConditionError, OperatorParams
from discrete_hardy.seqcore import ZERO, Sequence, delta, make_sequence, maximal_apply

B = make_sequence(-1, [1, -2, 1])
HALF = OperatorParams(0.0, 0.5, 0.5)


def brute_hilbert_form(values):
    return sum(values[i] * values[j] / (i + j + 2) for i in range(len(values)) for j in range(len(values)))


class TestHilbertInequality:
    def test_delta(self):
        assert lab.hilbert_form([1.0]) == 0.5

    def test_form_matches_loops(self, rng):
        v = rng.uniform(0, 1, 17)
        assert lab.hilbert_form(v) == pytest.approx(brute_hilbert_form(v), rel=1e-13)

    def test_sweep(self):
        rep = lab.hilbert_inequality_check(200, 64, seed=3)
        assert rep.verdict and rep.samples == 200
        assert all(r["lhs"] <= r["rhs"] for r in rep.artifacts)

    def test_deterministic(self):
        a = lab.hilbert_inequality_check(20, 16, seed=9).to_json()
        b = lab.hilbert_inequality_check(20, 16, seed=9).to_json()
        assert a == b

    def test_trials_validated(self):
        with pytest.raises(ValueError):
            lab.hilbert_inequality_check(0, 8, seed=1)


class TestHLP:
    def test_exponent_domain(self):
        assert lab.hlp_exponent(1.5, 1.5) == pytest.approx(2 / 3)
        for p, q in ((1.0, 2.0), (3.0, 3.0)):
            with pytest.raises(ValueError):
                lab.hlp_exponent(p, q)

    def test_diagonal_excluded(self):
        assert lab.hlp_form(delta(4), delta(4), 0.5) == 0.0

    def test_form_matches_loops(self, rng):
        b = Sequence(-3, rng.uniform(-1, 1, 6))
        c = Sequence(1, rng.uniform(-1, 1, 5))
        want = sum(b[i] * c[j] * abs(i - j) ** -0.7 for i in range(-3, 3) for j in range(1, 6) if i != j)
        assert lab.hlp_form(b, c, 0.7) == pytest.approx(want, rel=1e-13)

    @given(st.floats(0.1, 50.0))
    def test_homogeneous(self, t):
        b = make_sequence(0, [0.3, -1.0, 0.7])
        c = make_sequence(2, [1.0, 0.5])
        assert lab.hlp_form(b * t, c, 0.5) == pytest.approx(t * lab.hlp_form(b, c, 0.5), rel=1e-12)

    def test_constant_stable(self):
        rep = lab.hlp_inequality_check(1.5, 1.5, 350, seed=5)
        assert set(rep.summary["max_constant_per_size"]) == {str(n) for n in lab.HLP_SIZES}
        assert rep.verdict


class TestInvolution:
    def test_zero(self):
        rep = lab.involution_check(ZERO, 100)
        assert rep.summary["error"] == 0.0 and rep.verdict

    def test_moment_precondition(self):
        with pytest.raises(MomentConditionError):
            lab.involution_check(make_sequence(0, [1.0, -1.0]), 100)

    def test_error_below_bound_and_shrinks(self):
        e1 = lab.involution_check(B, 2000)
        e2 = lab.involution_check(B, 4000)
        assert e1.verdict and e2.verdict
        assert e2.summary["error"] < e1.summary["error"] < 1e-3


class TestWeakType:
    @pytest.mark.parametrize("alpha", [0.9, 0.3, 0.05, 0.011, 1e-3])
    def test_delta_count(self, alpha):
        rep = lab.weak_type_check(delta(0), [alpha])
        want = 2 * math.floor((1 / alpha - 1) / 2) + 1
        assert rep.artifacts[0]["count"] == want
        assert rep.artifacts[0]["constant"] <= 1.0

    def test_radius_contains_level_set(self, rng):
        b = Sequence(-4, rng.uniform(-1, 1, 9))
        alpha = 0.02
        r = lab.level_set_radius(float(np.sum(np.abs(b.values))), alpha)
        js = np.arange(-4 - r - 200, -4 - r)
        assert max(maximal_apply(b, int(j)) for j in js[-20:]) <= alpha

    def test_nested(self, rng):
        b = Sequence(3, rng.uniform(-1, 1, 12))
        rep = lab.weak_type_check(b, [0.5, 0.01, 0.2, 0.05])
        counts = [r["count"] for r in rep.artifacts]
        assert counts == sorted(counts, reverse=True)
        assert rep.summary["nested"]

    def test_window_only_enlarges(self):
        a = lab.weak_type_check(delta(0), [0.1])
        b = lab.weak_type_check(delta(0), [0.1], window=(-2, 2))
        assert a.artifacts == b.artifacts

    def test_levels_validated(self):
        with pytest.raises(ValueError):
            lab.weak_type_check(delta(0), [])
        with pytest.raises(ValueError):
            lab.weak_type_check(delta(0), [0.0])


class TestDomination:
    def test_region_constant(self):
        assert lab.region_constant(0.5) >= 2**2.5 / (1 - 2**-0.5)
        assert lab.region_constant(0.5) == pytest.approx(2**2.5 / (1 - 2**-0.5), rel=1e-14)

    @pytest.mark.parametrize("j0", [1, 3, 40])
    def test_far_constant_p2(self, j0):
        K = 2 * j0
        exact = 2 * math.sqrt(2 * float(mp.zeta(2, K + 1)))
        got = lab.far_region_constant(j0, 2.0)
        assert exact <= got <= exact * (1 + 1e-9)

    def test_far_region_only(self):
        b = Sequence(20, np.ones(4))
        rep = lab.pointwise_domination_check(b, 3, HALF, 2.0)
        lhs = {r["region"]: r["lhs"] for r in rep.artifacts}
        assert lhs["I1"] == 0.0 and lhs["I2"] == 0.0 and lhs["I3"] > 0
        assert rep.verdict

    def test_triangle(self, rng):
        for _ in range(20):
            b = lab.random_sequence(rng, 30, (-30, 30))
            j0 = int(rng.integers(1, 10))
            rep = lab.pointwise_domination_check(b, j0, HALF, 2.0)
            assert rep.verdict
            total = rep.artifacts[-1]
            assert total["lhs"] <= total["rhs"] * (1 + 1e-12)

    def test_asymmetric_params(self):
        rep = lab.domination_sweep(100, seed=2, params=OperatorParams(0.0, 0.3, 0.7), p=3.0, j0_max=16)
        assert rep.summary["violations"] == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            lab.pointwise_domination_check(B, 0, HALF, 2.0)
        with pytest.raises(ValueError):
            lab.pointwise_domination_check(B, 1, OperatorParams.symmetric(0.2), 2.0)


class TestAtomImages:
    def test_scaled_sequence_finite(self):
        res = lab.atom_image_norm(B / 6, AtomSpec(1.0, math.inf, 0, 0, 1), 0.0)
        assert math.isfinite(res["norm"]) and res["tail_bound"] > 0

    def test_small_sweep(self):
        rep = lab.atom_image_sweep(1.0, 0.0, [1, 4, 16], 5, seed=1)
        assert rep.samples == 15 and rep.verdict
        assert set(rep.summary["sup_per_m"]) == {"1", "4", "16"}

    def test_exponent(self):
        assert lab.image_exponent(1.0, 0.3) == pytest.approx(1 / 0.7)
        with pytest.raises(ValueError):
            lab.image_exponent(0.5, 2.0)


class TestUnbounded:
    def test_delta_zero(self):
        rep = lab.unbounded_examples_demo(0.0, [10, 100, 1000])
        assert rep.verdict
        assert rep.summary["delta_max_rel_error"] <= 8 * np.finfo(float).eps
        assert all(r["example"] == "delta" for r in rep.artifacts)

    def test_half_harmonic_rate(self):
        rep = lab.unbounded_examples_demo(0.5, [10**3, 10**5, 10**6])
        deltas = [r for r in rep.artifacts if r["example"] == "delta"]
        for r in deltas:
            H = 2 * float(mp.harmonic(r["J"]))
            assert r["partial_sum"] == pytest.approx(H, rel=1e-13)
        logs = [r["partial_sum"] for r in rep.artifacts if r["example"] == "log"]
        assert logs == sorted(logs) and len(set(logs)) == 3
        assert rep.verdict

    def test_domain(self):
        with pytest.raises(ValueError):
            lab.unbounded_examples_demo(1.0, [10])
        with pytest.raises(ValueError):
            lab.unbounded_examples_demo(0.2, [1])
