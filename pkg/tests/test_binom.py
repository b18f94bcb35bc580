"""Exact binomial pmf/survival/tail against brute-force enumeration."""

from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from binexceed.binom import (
    BinomialSpec,
    pmf,
    stochastic_dominance_check,
    survival,
    tail_gt_mean,
)

from oracles import survival_by_enumeration, tail_by_enumeration

probabilities = st.fractions(min_value=0, max_value=1, max_denominator=500)
open_probabilities = st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100),
                                  max_denominator=500)
trial_counts = st.integers(min_value=1, max_value=30)


class TestPmf:
    def test_two_fair_trials(self):
        assert pmf(BinomialSpec(2, Fraction(1, 2)), 1) == Fraction(1, 2)

    def test_single_trial_success(self):
        assert pmf(BinomialSpec(1, Fraction(3, 10)), 1) == Fraction(3, 10)

    def test_five_trials_no_success(self):
        assert pmf(BinomialSpec(5, Fraction(1, 5)), 0) == Fraction(1024, 3125)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            pmf(BinomialSpec(3, Fraction(1, 2)), 4)
        with pytest.raises(ValueError):
            pmf(BinomialSpec(3, Fraction(1, 2)), -1)

    @given(trial_counts, probabilities)
    def test_normalization(self, n, p):
        spec = BinomialSpec(n, p)
        assert sum(pmf(spec, k) for k in range(n + 1)) == 1

    @given(trial_counts, probabilities, st.integers(0, 30))
    def test_symmetry_p_to_q(self, n, p, k):
        k = k % (n + 1)
        assert pmf(BinomialSpec(n, p), k) == pmf(BinomialSpec(n, 1 - p), n - k)


class TestSurvival:
    def test_equality_case_value(self):
        assert survival(BinomialSpec(2, Fraction(1, 2)), 2) == Fraction(1, 4)

    def test_survival_at_zero_is_one(self):
        assert survival(BinomialSpec(7, Fraction(3, 11)), 0) == 1

    def test_seven_twenty_sevenths(self):
        assert survival(BinomialSpec(3, Fraction(1, 3)), 2) == Fraction(7, 27)

    def test_degenerate_k(self):
        assert survival(BinomialSpec(4, Fraction(2, 5)), 5) == 0
        with pytest.raises(ValueError):
            survival(BinomialSpec(4, Fraction(2, 5)), 6)

    @given(trial_counts, probabilities, st.integers(0, 31))
    def test_matches_enumeration(self, n, p, k):
        k = k % (n + 2)
        assert survival(BinomialSpec(n, p), k) == survival_by_enumeration(n, p, k)

    @given(trial_counts, probabilities, st.integers(1, 30))
    def test_complement(self, n, p, k):
        k = k % n + 1
        spec = BinomialSpec(n, p)
        below = sum(pmf(spec, j) for j in range(k))
        assert survival(spec, k) + below == 1


class TestTailGtMean:
    def test_equality_case(self):
        record = tail_gt_mean(BinomialSpec(2, Fraction(1, 2)))
        assert record.tail == Fraction(1, 4)
        assert record.m == 2 and record.mean == 1

    def test_p_zero(self):
        assert tail_gt_mean(BinomialSpec(5, Fraction(0))).tail == 0

    def test_p_one(self):
        record = tail_gt_mean(BinomialSpec(5, Fraction(1)))
        assert record.m == 6 and record.tail == 0

    def test_five_trials_fifth(self):
        record = tail_gt_mean(BinomialSpec(5, Fraction(1, 5)))
        assert record.tail == Fraction(821, 3125)
        assert record.m == 2

    def test_matches_enumeration_on_grid(self):
        # exhaustive: every n <= 30 against the per-outcome oracle
        for n in range(1, 31):
            for p in (Fraction(1, 7), Fraction(3, 10), Fraction(1, 2),
                      Fraction(9, 10), Fraction(1, n), Fraction(n - 1, n)):
                assert tail_gt_mean(BinomialSpec(n, p)).tail == tail_by_enumeration(n, p)

    @given(trial_counts, probabilities)
    def test_matches_enumeration_random(self, n, p):
        assert tail_gt_mean(BinomialSpec(n, p)).tail == tail_by_enumeration(n, p)

    @given(trial_counts, probabilities)
    def test_mean_floor_is_exact(self, n, p):
        record = tail_gt_mean(BinomialSpec(n, p))
        assert record.m - 1 <= record.mean < record.m
        assert record.mean == n * p


class TestStochasticMonotonicity:
    def test_instance(self):
        assert stochastic_dominance_check(5, Fraction(1, 4), Fraction(1, 2), 3).value

    def test_equal_probabilities(self):
        verdict = stochastic_dominance_check(6, Fraction(2, 7), Fraction(2, 7), 2)
        assert verdict.value and verdict.witness == 0

    def test_rejects_unordered(self):
        with pytest.raises(ValueError):
            stochastic_dominance_check(4, Fraction(2, 3), Fraction(1, 3), 2)

    @given(st.integers(1, 10), probabilities, probabilities, st.integers(0, 10))
    def test_always_true_for_sorted_pairs(self, n, pa, pb, k):
        p1, p2 = sorted((pa, pb))
        assert stochastic_dominance_check(n, p1, p2, k % (n + 1)).value

    @given(trial_counts, open_probabilities, open_probabilities, st.integers(1, 30))
    def test_strict_inside_the_unit_interval(self, n, pa, pb, k):
        p1, p2 = sorted((pa, pb))
        if p1 == p2:
            return
        k = k % n + 1
        assert survival(BinomialSpec(n, p1), k) < survival(BinomialSpec(n, p2), k)


class TestSpecValidation:
    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            BinomialSpec(0, Fraction(1, 2))

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            BinomialSpec(3, Fraction(5, 4))

    def test_rejects_float_p(self):
        with pytest.raises(TypeError):
            BinomialSpec(3, 0.5)

    def test_q_and_mean(self):
        spec = BinomialSpec(6, Fraction(1, 3))
        assert spec.q == Fraction(2, 3) and spec.mean == 2
