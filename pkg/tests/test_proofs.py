"""Proof-kit verifiers: chain proof, case split, Berry-Esseen quantities."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from binexceed.binom import BinomialSpec, tail_gt_mean
from binexceed.enclosure import PreconditionError, c_enclosure
from binexceed.proofs import (
    C2,
    C3,
    EPSILON_STAR_CEILING,
    anderson_samuels_sweep,
    applicable_cases,
    berry_esseen_epsilon,
    case_coverage_holds,
    chain_steps,
    classify_case,
    epsilon_star,
    main_proof_sweep,
    verify_appendix,
    verify_case1,
    verify_case2,
    verify_case3,
    verify_case4,
    verify_case5,
    verify_main_proof,
    verify_proposition_proof,
)

QUARTER = Fraction(1, 4)


def step(report, step_id):
    return next(s for s in report.steps if s.step_id == step_id)


class TestMainProof:
    def test_equality_case_all_nonstrict(self):
        report = verify_main_proof(BinomialSpec(2, Fraction(1, 2)))
        assert report.passed
        assert step(report, "terminal_identity").ok
        # single-node chain: j runs over {2} only
        assert chain_steps(2, 2) == chain_steps(2, 2)
        assert tail_gt_mean(BinomialSpec(2, Fraction(1, 2))).tail == QUARTER

    def test_three_trials_chain(self):
        report = verify_main_proof(BinomialSpec(3, Fraction(1, 3)))
        assert report.passed
        steps = chain_steps(2, 3)
        assert [s.value for s in steps] == [Fraction(1, 4), Fraction(7, 27)]
        assert [s.p_j for s in steps] == [Fraction(1, 2), Fraction(1, 3)]

    def test_high_p_strictness(self):
        report = verify_main_proof(BinomialSpec(5, Fraction(9, 10)))
        assert report.passed
        record = tail_gt_mean(BinomialSpec(5, Fraction(9, 10)))
        assert record.m == 5
        assert record.tail == Fraction(59049, 100000)
        assert record.tail > Fraction(1024, 3125)  # strict: np = 4.5 not integral

    def test_small_mean_branch(self):
        report = verify_main_proof(BinomialSpec(10, Fraction(3, 100)))
        assert report.passed
        assert step(report, "small_mean_formula").ok

    def test_rejects_out_of_hypothesis(self):
        with pytest.raises(PreconditionError):
            verify_main_proof(BinomialSpec(3, Fraction(1)))
        with pytest.raises(PreconditionError):
            verify_main_proof(BinomialSpec(10, Fraction(1, 100)))

    @given(st.integers(1, 25), st.integers(1, 199))
    @settings(max_examples=60)
    def test_passes_across_hypothesis_grid(self, n, k):
        p = Fraction(k, 200)
        if p == 1 or n * p <= c_enclosure(128).hi:
            return
        assert verify_main_proof(BinomialSpec(n, p)).passed


class TestChain:
    def test_chain_start_identity(self):
        for m in (2, 3, 5, 8):
            assert chain_steps(m, m)[0].value == Fraction(m - 1, m) ** m

    def test_anchor_pair(self):
        values = [s.value for s in chain_steps(2, 3)]
        assert values == [Fraction(1, 4), Fraction(7, 27)]

    def test_anderson_samuels_sweep(self):
        report = anderson_samuels_sweep(6, 40)
        assert report.passed

    def test_sweep_rejects_bad_rectangle(self):
        with pytest.raises(PreconditionError):
            anderson_samuels_sweep(10, 5)

    @given(st.integers(2, 12), st.integers(0, 20))
    def test_strict_increase_property(self, m, extra):
        n = m + extra
        values = [s.value for s in chain_steps(m, n)]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestPropositionProof:
    def test_constant_for_single_trial(self):
        report = verify_proposition_proof(1, 10)
        assert report.passed

    def test_strictly_decreasing_grid(self):
        report = verify_proposition_proof(5, 100)
        assert report.passed

    def test_g_exceeds_b_at_threshold(self):
        report = verify_proposition_proof(10, 50)
        assert report.passed
        witness = step(report, "g_dominates_b_at_threshold").witnesses[0]
        assert Fraction(witness["rational"]) > Fraction("0.869")

    def test_rejects_small_grid(self):
        with pytest.raises(PreconditionError):
            verify_proposition_proof(5, 2)


class TestClassification:
    def test_examples(self):
        assert classify_case(BinomialSpec(10, Fraction(1, 2))).case_id == 1
        assert classify_case(BinomialSpec(2, Fraction(1, 2))).case_id == 5
        assert classify_case(BinomialSpec(3, Fraction(1, 2))).case_id == 3

    def test_rejects_out_of_hypothesis(self):
        with pytest.raises(PreconditionError):
            classify_case(BinomialSpec(10, Fraction(1, 1000)))
        with pytest.raises(PreconditionError):
            classify_case(BinomialSpec(2, Fraction(1)))

    def test_lowest_case_wins_on_overlap(self):
        # n*p = 1, n = 3: cases 3 and 4 both apply (n*q = 2)
        spec = BinomialSpec(3, Fraction(1, 3))
        assert applicable_cases(spec) == [3, 4]
        assert classify_case(spec).case_id == 3

    @given(st.integers(1, 500), st.fractions(min_value=0, max_value=1,
                                             max_denominator=997))
    def test_coverage_under_hypothesis(self, n, p):
        if p >= 1 or n * p <= c_enclosure(128).hi:
            return
        assert case_coverage_holds(BinomialSpec(n, p))

    def test_coverage_ten_thousand_random(self):
        import random

        rng = random.Random(58085)
        c_hi = c_enclosure(128).hi
        checked = 0
        while checked < 10**4:
            n = rng.randint(1, 500)
            den = rng.randint(2, 10**4)
            p = Fraction(rng.randint(1, den - 1), den)
            if n * p <= c_hi:
                continue
            assert case_coverage_holds(BinomialSpec(n, p))
            checked += 1


class TestBerryEsseen:
    def test_four_fair_trials_exact(self):
        ev = berry_esseen_epsilon(4, Fraction(1, 2), 64)
        assert ev.rho == Fraction(1, 8) and ev.sigma_sq == Fraction(1, 4)
        assert ev.ratio.is_point and ev.ratio.lo == 1
        assert ev.epsilon.is_point
        assert ev.epsilon.lo == C3 * (1 + C2) / 2 == Fraction(47838633, 200000000)

    def test_symmetry_in_p(self):
        a = berry_esseen_epsilon(7, Fraction(2, 7), 64)
        b = berry_esseen_epsilon(7, Fraction(5, 7), 64)
        assert a.epsilon == b.epsilon and a.ratio == b.ratio

    def test_rho_identity(self):
        p, q = Fraction(3, 11), Fraction(8, 11)
        ev = berry_esseen_epsilon(9, p, 64)
        assert ev.rho == p**3 * q + q**3 * p

    def test_89_trials(self):
        enc = berry_esseen_epsilon(89, Fraction(2, 89), 200).epsilon
        oracle = Fraction("0.244128076997342695694641")     # 200-bit evaluation
        assert abs(enc.mid - oracle) < Fraction(1, 10**20)
        assert enc.width < Fraction(1, 10**50)

    def test_rejects_degenerate_p(self):
        with pytest.raises(ValueError):
            berry_esseen_epsilon(5, Fraction(0), 64)
        with pytest.raises(ValueError):
            berry_esseen_epsilon(5, Fraction(1), 64)


class TestEpsilonStar:
    def test_at_four(self):
        enc = epsilon_star(4, 200)
        assert Fraction("0.239") < enc.lo and enc.hi < Fraction("0.240")

    def test_three_comparison_points_below_ceiling(self):
        for n in (4, 89, 90):
            assert epsilon_star(n, 200).hi < EPSILON_STAR_CEILING

    def test_90_beats_89(self):
        assert epsilon_star(90, 200).lo > epsilon_star(89, 200).hi


class TestCaseVerifiers:
    def test_case1_passes_at_sufficient_scan(self):
        assert verify_case1(450, 90, 200).passed

    def test_case1_honestly_fails_on_short_scan(self):
        # the dominating bound is above the ceiling at n = 120, so the
        # infinite-tail step must report FALSE rather than pass
        report = verify_case1(120, 90, 200)
        assert not report.passed
        assert not step(report, "dominating_bound_below_ceiling").ok

    def test_case1_rejects_bad_range(self):
        with pytest.raises(PreconditionError):
            verify_case1(80, 90)

    def test_case2(self):
        assert verify_case2(30).passed

    def test_case3_anchors(self):
        report = verify_case3(60)
        assert report.passed
        f3 = lambda n: 1 - (2 - Fraction(1, n)) * (1 - Fraction(1, n)) ** (n - 1)
        assert f3(3) == Fraction(7, 27)
        assert f3(4) == Fraction(67, 256)
        assert f3(4) > f3(3)

    def test_case4_anchors(self):
        report = verify_case4(60)
        assert report.passed
        f1t = lambda n: Fraction(3 * n - 2, n - 2) * (1 - Fraction(2, n)) ** n
        assert f1t(3) == Fraction(7, 27)
        assert f1t(4) == Fraction(5, 16)

    def test_case5_anchors(self):
        report = verify_case5(60)
        assert report.passed
        assert (1 - Fraction(1, 2)) ** 2 == QUARTER
        assert (1 - Fraction(1, 3)) ** 3 == Fraction(8, 27)

    def test_appendix_composition(self):
        report = verify_appendix(450, 100, 200)
        assert report.passed
        assert step(report, "conclusion").ok


class TestMainSweep:
    def test_small_sweep(self):
        report = main_proof_sweep(10, grid=60, jobs=1)
        assert report.passed

    def test_equality_census_needs_even_grid(self):
        report = main_proof_sweep(3, grid=50, jobs=1)
        assert report.passed        # (2, 1/2) present: 25/50


class TestCrossProofConsistency:
    @given(st.integers(1, 60), st.fractions(min_value=Fraction(1, 100),
                                            max_value=Fraction(99, 100),
                                            max_denominator=300))
    @settings(max_examples=50)
    def test_both_routes_agree(self, n, p):
        if n * p <= c_enclosure(128).hi:
            return
        spec = BinomialSpec(n, p)
        assert classify_case(spec).case_id in (1, 2, 3, 4, 5)
        assert verify_main_proof(spec).passed
        tail = tail_gt_mean(spec).tail
        if (n, p) == (2, Fraction(1, 2)):
            assert tail == QUARTER
        else:
            assert tail > QUARTER


class TestReportSerialization:
    def test_json_schema_and_roundtrip(self):
        report = verify_main_proof(BinomialSpec(3, Fraction(1, 3)))
        payload = json.loads(report.to_json())
        assert payload["passed"] is True
        for record in payload["steps"]:
            assert set(record) == {"step_id", "paper_anchor", "verdict", "witnesses"}
            assert record["verdict"] in ("TRUE", "FALSE", "UNDECIDED")
            for witness in record["witnesses"]:
                if "rational" in witness:
                    assert str(Fraction(witness["rational"])) == witness["rational"]
                else:
                    lo, hi = witness["enclosure"]
                    assert Fraction(lo) <= Fraction(hi)

    def test_text_rendering(self):
        report = verify_case5(10)
        text = report.to_text()
        assert "PASS" in text and "anchor_value" in text
