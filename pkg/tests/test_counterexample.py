import json
import math

import mpmath as mp
import pytest

from discrete_hardy.counterexample import (
    COUNTER_SEQUENCE,
    CounterexampleCertificate,
    InconclusiveEnclosure,
    certify_unbounded,
    epsilon_root,
    g_eval,
    h_eval,
    moment_free_perturbation,
    paper_chain_check,
    sign_scan,
    term_sum_enclosure,
    term_tail_bound,
    total_sum_enclosure,
    u_apply_closed,
)
from discrete_hardy.operators import OperatorParams, fractional_apply
from discrete_hardy.seqcore import Enclosure
from oracles import counter_sum_mp


class TestClosedForm:
    def test_golden_values(self):
        assert [u_apply_closed(0.1, j) for j in (-1, 0, 1)] == [-2.0, 2.0, -2.0]
        assert u_apply_closed(0.0, 2) == pytest.approx(2 / math.sqrt(3) - 1, rel=1e-15)

    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.2, 0.3])
    def test_matches_operator(self, gamma):
        p = OperatorParams.symmetric(gamma)
        for j in range(-1000, 1001):
            assert abs(u_apply_closed(gamma, j) - fractional_apply(COUNTER_SEQUENCE, p, j)) <= 1e-12

    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.2, 0.3])
    def test_terms_positive(self, gamma):
        s = (1 - gamma) / 2
        for j in range(2, 10**4 + 1):
            assert (j * j - 1) ** -s - j ** (-2 * s) > 0

    def test_gamma_domain(self):
        with pytest.raises(ValueError):
            u_apply_closed(1.0, 3)


class TestTotalSum:
    def test_zero_encloses_oracle(self):
        enc = total_sum_enclosure(0.0, 10**6)
        oracle = counter_sum_mp(0.0)
        assert enc.width < 1e-9 and enc.hi < 0
        assert mp.mpf(enc.lo) <= oracle <= mp.mpf(enc.hi)
        assert float(oracle) == pytest.approx(-1.5272306019547377, abs=1e-15)

    @pytest.mark.parametrize("gamma", [0.05, 0.1, 0.15, 0.3])
    def test_encloses_oracle(self, gamma):
        enc = total_sum_enclosure(gamma, 10**6)
        oracle = counter_sum_mp(gamma)
        assert mp.mpf(enc.lo) <= oracle <= mp.mpf(enc.hi)
        assert enc.hi < 0

    def test_tail_bound_dominates_mp_tail(self):
        for gamma in (0.0, 0.2):
            s = (1 - mp.mpf(gamma)) / 2
            J = 1000
            with mp.workdps(30):
                tail = mp.nsum(lambda j: (j * j - 1) ** (-s) - j ** (-2 * s), [J + 1, mp.inf],
                               method="euler-maclaurin")
            assert tail <= term_tail_bound(float(s), J)
            assert term_tail_bound(float(s), J) <= 1.01 * float(tail)

    def test_larger_J_never_widens(self):
        encs = [total_sum_enclosure(0.0, J) for J in (10**3, 10**4, 10**5)]
        oracle = counter_sum_mp(0.0)
        for small, big in zip(encs, encs[1:]):
            assert big.width <= small.width
            assert big.lo >= small.lo
        for enc in encs:
            assert mp.mpf(enc.lo) <= oracle <= mp.mpf(enc.hi)

    def test_partial_sum_from_three(self):
        enc = term_sum_enclosure(0.0, 3, 10**5)
        assert enc.hi <= 8**-0.5

    def test_small_J_rejected(self):
        with pytest.raises(ValueError):
            total_sum_enclosure(0.0, 9)


class TestGH:
    def test_values_at_zero(self):
        assert g_eval(0.0) == pytest.approx(1 / math.sqrt(3) - 0.5, abs=1e-15)
        assert h_eval(0.0) == pytest.approx(0.5 - 1 / math.sqrt(8), abs=1e-15)
        assert g_eval(0.0) < h_eval(0.0)

    def test_domains(self):
        with pytest.raises(ValueError):
            h_eval(1 / 3)
        with pytest.raises(ValueError):
            g_eval(-0.1)

    def test_epsilon(self):
        enc = epsilon_root(1e-10)
        assert 0 < enc.lo and enc.hi < 1 / 3 and enc.width <= 1e-10
        assert g_eval(enc.lo) < h_eval(enc.lo)
        assert g_eval(enc.hi) > h_eval(enc.hi)
        assert g_eval(1 / 3 - 1e-6) > h_eval(1 / 3 - 1e-6)

    def test_epsilon_against_mp_root(self):
        with mp.workdps(40):
            f = lambda x: 3 ** (-(1 - x) / 2) - 2 ** (-(1 - x)) - mp.mpf(1) / 2 + 8 ** (-(1 - x) / 2)
            root = mp.findroot(f, 0.18)
        enc = epsilon_root(1e-12)
        assert mp.mpf(enc.lo) <= root <= mp.mpf(enc.hi)

    def test_tolerance_positive(self):
        with pytest.raises(ValueError):
            epsilon_root(0.0)


class TestChain:
    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.15])
    def test_all_verdicts(self, gamma):
        rep = paper_chain_check(gamma)
        assert rep.verdict
        assert [r["verdict"] for r in rep.artifacts] == [True] * 4

    def test_just_below_epsilon(self):
        gamma = epsilon_root(1e-12).lo - 1e-6
        assert paper_chain_check(gamma).verdict

    def test_above_epsilon_rejected(self):
        with pytest.raises(ValueError):
            paper_chain_check(0.2)


class TestCertificate:
    def test_gamma_zero_p_one(self):
        cert = certify_unbounded(0.0, 1.0)
        assert cert.conclusion and cert.q == 1.0

    def test_gamma_point_one(self):
        cert = certify_unbounded(0.1, 1 / 1.1)
        assert cert.conclusion
        assert cert.q == pytest.approx(1.0)
        d = cert.to_dict()
        assert set(d["sum_enclosure"]) == {"lo", "hi", "precision"}
        assert float(d["sum_enclosure"]["hi"]) < 0
        json.dumps(d)

    def test_q_above_one_rejected(self):
        with pytest.raises(ValueError):
            certify_unbounded(0.3, 1.0)

    def test_p_domain(self):
        with pytest.raises(ValueError):
            certify_unbounded(0.0, 0.5)

    def test_conclusion_needs_both_fields(self):
        neg = Enclosure(-2.0, -1.0)
        assert CounterexampleCertificate(0.0, 1.0, 1.0, neg, True).conclusion
        assert not CounterexampleCertificate(0.0, 1.0, 1.0, neg, False).conclusion
        assert not CounterexampleCertificate(0.0, 1.0, 1.0, Enclosure(-1.0, 1.0), True).conclusion

    def test_inconclusive_carries_certificate(self):
        err = InconclusiveEnclosure("straddles", certificate="c")
        assert err.certificate == "c"


class TestScan:
    def test_grid_all_negative(self):
        grid = [0.05 * k for k in range(7)]
        rep = sign_scan(grid, 10**6)
        assert [r["sign"] for r in rep.artifacts] == ["negative"] * 7
        assert rep.verdict

    def test_single_point_matches_total(self):
        rep = sign_scan([0.0], 10**5)
        assert rep.artifacts[0]["sum_enclosure"] == total_sum_enclosure(0.0, 10**5)

    def test_empty(self):
        rep = sign_scan([], 10**5)
        assert rep.samples == 0 and rep.artifacts == []


def test_moment_free_perturbation_sign():
    rep = moment_free_perturbation(0.1, 2, (-2, 2), 2000)
    c = rep.summary["sequence"]
    assert c["offset"] == -2 and len(c["values"]) == 5
    enc = rep.summary["sum_enclosure"]
    assert enc.hi < 0 and enc.width < 1e-6
