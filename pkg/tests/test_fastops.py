import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discrete_hardy.fastops import (
    AliasingError,
    WindowPlan,
    hilbert_apply_fast,
    hilbert_window_fast,
    riesz_apply_fast,
    riesz_window_fast,
    scaling_exponent,
    throughput_benchmark,
)
from discrete_hardy.operators import hilbert_window, riesz_window
from discrete_hardy.seqcore import Sequence, delta, make_sequence
from oracles import riesz_direct

B = make_sequence(-1, [1, -2, 1])


class TestPlan:
    def test_build_is_minimal_power_of_two(self):
        plan = WindowPlan.build(-8, 8, 0, 0)
        assert plan.n_fft == 32 and plan.aliasing_free
        assert WindowPlan.build(0, 14, 0, 0).n_fft == 16

    def test_too_short_transform_rejected(self):
        with pytest.raises(AliasingError):
            WindowPlan(0, 15, 0, 0, 16)

    def test_non_power_of_two_rejected(self):
        with pytest.raises(ValueError):
            WindowPlan(0, 3, 0, 0, 24)

    def test_plan_must_cover_support(self):
        plan = WindowPlan.build(-4, 4, 0, 1)
        with pytest.raises(ValueError):
            hilbert_window_fast(B, plan)


class TestExamples:
    def test_riesz_delta(self):
        plan = WindowPlan.for_sequence(delta(0), -8, 8)
        out = riesz_window_fast(delta(0), 0.5, plan)
        js = plan.js
        want = np.zeros(js.size)
        want[js != 0] = np.abs(js[js != 0]) ** -0.5
        np.testing.assert_allclose(out, want, atol=1e-14)

    def test_hilbert_delta(self):
        plan = WindowPlan.for_sequence(delta(0), -8, 8)
        np.testing.assert_allclose(
            hilbert_window_fast(delta(0), plan), 1 / (math.pi * (plan.js + 0.5)), atol=1e-14
        )

    def test_hilbert_counter_sequence(self):
        plan = WindowPlan.for_sequence(B, -3, 3)
        out = hilbert_apply_fast(B, plan)
        assert out[0] == pytest.approx(-16 / (3 * math.pi), abs=1e-9)

    def test_riesz_gamma_domain(self):
        with pytest.raises(ValueError):
            riesz_apply_fast(B, 1.0, WindowPlan.for_sequence(B, -3, 3))


def _random(rng, n):
    return Sequence(int(rng.integers(-n, n)), rng.uniform(-1, 1, n))


@pytest.mark.parametrize("n", [1, 7, 100, 1024])
def test_agrees_with_direct_on_whole_window(n, rng):
    for _ in range(3):
        b = _random(rng, n)
        lo, hi = b.support
        j_lo, j_hi = lo - int(rng.integers(0, 2 * n)), hi + int(rng.integers(0, 2 * n))
        plan = WindowPlan.for_sequence(b, j_lo, j_hi)
        tol = 1e-9 * (1 + np.abs(b.values).sum())
        gamma = float(rng.uniform(0.05, 0.95))
        np.testing.assert_allclose(hilbert_window_fast(b, plan), hilbert_window(b, plan.js), rtol=0, atol=tol)
        np.testing.assert_allclose(riesz_window_fast(b, gamma, plan), riesz_window(b, gamma, plan.js), rtol=0, atol=tol)


def test_riesz_against_loop_oracle(rng):
    b = _random(rng, 40)
    plan = WindowPlan.for_sequence(b, -100, 100)
    np.testing.assert_allclose(
        riesz_window_fast(b, 0.3, plan), riesz_direct(b.offset, b.values, 0.3, plan.js), atol=1e-12
    )


@given(st.integers(0, 2**32 - 1), st.integers(1, 64))
def test_linearity(seed, n):
    rng = np.random.default_rng(seed)
    b1, b2 = Sequence(-n, rng.uniform(-1, 1, n)), Sequence(0, rng.uniform(-1, 1, n))
    plan = WindowPlan.build(-3 * n, 3 * n, -n, n - 1)
    s = b1 + b2
    for f in (hilbert_window_fast, lambda b, p: riesz_window_fast(b, 0.4, p)):
        np.testing.assert_allclose(f(s, plan), f(b1, plan) + f(b2, plan), atol=1e-9)


def test_scaling_exponent_recovers_power():
    sizes = [2**k for k in range(6, 12)]
    assert scaling_exponent(sizes, [3.0 * n**1.5 for n in sizes]) == pytest.approx(1.5)


class TestBenchmarkReport:
    def test_zero_repeats_is_empty(self):
        rep = throughput_benchmark([1024], 0)
        assert rep.samples == 0 and rep.artifacts == []

    def test_small_sizes_rejected(self):
        with pytest.raises(ValueError):
            throughput_benchmark([64, 128], 1)

    def test_rows_shape(self):
        rep = throughput_benchmark([256, 512], 1)
        assert [set(r) for r in rep.artifacts] == [{"size", "direct_ns", "fast_ns"}] * 2
        assert {"direct_exponent", "fast_exponent", "backend"} <= set(rep.summary)
