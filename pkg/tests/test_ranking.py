"""Tests for rank correlation and permutation significance."""

import math
import random

import pytest

from algoprob.models import (
    InsufficientSupportError,
    ParameterError,
    SupportPolicy,
    UndefinedCorrelationError,
)
from algoprob.ranking import align, compare_report, permutation_pvalue, spearman
from tests.conftest import make_distribution


def classical_rho(x: list[float], y: list[float]) -> float:
    """1 - 6 Σd² / (m(m² - 1)), valid without ties."""
    def ranks(values):
        order = sorted(range(len(values)), key=values.__getitem__)
        result = [0] * len(values)
        for rank, i in enumerate(order, start=1):
            result[i] = rank
        return result

    m = len(x)
    d2 = sum((a - b) ** 2 for a, b in zip(ranks(x), ranks(y)))
    return 1 - 6 * d2 / (m * (m * m - 1))


class TestAlign:
    def test_intersection_too_small(self):
        a = make_distribution({"00": 1, "01": 1})
        b = make_distribution({"01": 1})
        with pytest.raises(InsufficientSupportError) as exc:
            align(a, b, 2, SupportPolicy.INTERSECTION)
        assert exc.value.pair_count == 1

    def test_union_still_too_small(self):
        a = make_distribution({"00": 1, "01": 1})
        b = make_distribution({"01": 1})
        with pytest.raises(InsufficientSupportError) as exc:
            align(a, b, 2, SupportPolicy.UNION)
        assert exc.value.pair_count == 2

    def test_union_fills_zeros(self):
        a = make_distribution({"00": 2, "01": 1, "10": 1})
        b = make_distribution({"01": 1, "10": 1, "11": 2})
        strings, x, y = align(a, b, 2, SupportPolicy.UNION)
        assert strings == ["00", "01", "10", "11"]
        assert x == [0.5, 0.25, 0.25, 0.0]
        assert y == [0.0, 0.25, 0.25, 0.5]

    def test_other_lengths_ignored(self):
        a = make_distribution({"0": 5, "00": 1, "01": 1, "10": 1})
        strings, x, _ = align(a, a, 2)
        assert strings == ["00", "01", "10"]
        assert x == [0.125, 0.125, 0.125]

    def test_missing_length(self):
        a = make_distribution({"0": 1, "1": 1})
        with pytest.raises(ParameterError):
            align(a, a, 2)


class TestSpearman:
    def test_identical(self):
        assert spearman([3, 2, 1], [3, 2, 1]) == 1.0

    def test_reversed(self):
        assert spearman([1, 2, 3, 4, 5], [5, 4, 3, 2, 1]) == -1.0

    def test_one_swap(self):
        assert spearman([1, 2, 3, 4], [1, 2, 4, 3]) == pytest.approx(0.8, abs=1e-12)

    def test_matches_classical_formula(self):
        rng = random.Random(2024)
        for _ in range(100):
            m = rng.randint(3, 50)
            x = [float(v) for v in rng.sample(range(10_000), m)]
            y = [float(v) for v in rng.sample(range(10_000), m)]
            assert spearman(x, y) == pytest.approx(classical_rho(x, y), abs=1e-12)

    def test_increasing_transform_keeps_rho(self):
        rng = random.Random(7)
        for _ in range(50):
            m = rng.randint(3, 40)
            x = [float(v) for v in rng.choices(range(1, 20), k=m)]
            y = [float(v) for v in rng.choices(range(1, 20), k=m)]
            if len(set(x)) == 1 or len(set(y)) == 1:
                continue
            rho = spearman(x, y)
            assert spearman([v**3 for v in x], y) == rho
            assert spearman(x, [math.log(v) for v in y]) == rho
            assert spearman([2 * v + 7 for v in x], [math.exp(v) for v in y]) == rho

    def test_symmetric_in_arguments(self):
        rng = random.Random(11)
        for _ in range(50):
            m = rng.randint(3, 40)
            x = [float(v) for v in rng.choices(range(30), k=m)]
            y = [float(v) for v in rng.choices(range(30), k=m)]
            if len(set(x)) == 1 or len(set(y)) == 1:
                continue
            assert spearman(x, y) == spearman(y, x)

    def test_ties_use_average_ranks(self):
        rho = spearman([1, 1, 2, 3], [1, 2, 3, 4])
        assert -1.0 < rho < 1.0

    def test_constant_vector(self):
        with pytest.raises(UndefinedCorrelationError):
            spearman([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(ParameterError):
            spearman([1, 2, 3], [1, 2])

    def test_too_short(self):
        with pytest.raises(ParameterError):
            spearman([1, 2], [1, 2])


class TestPermutationPvalue:
    def test_perfect_correlation_is_significant(self):
        x = list(range(8))
        assert permutation_pvalue(x, x, 999, 42) <= 0.01

    def test_deterministic(self):
        x, y = [5, 1, 4, 2, 3, 7], [4, 2, 5, 1, 3, 6]
        assert permutation_pvalue(x, y, 199, 7) == permutation_pvalue(x, y, 199, 7)

    def test_bounds(self):
        x, y = [5, 1, 4, 2, 3, 7], [1, 2, 3, 4, 5, 6]
        p = permutation_pvalue(x, y, 99, 3)
        assert 1 / 100 <= p <= 1.0

    def test_invalid_permutations(self):
        with pytest.raises(ParameterError):
            permutation_pvalue([1, 2, 3], [1, 2, 3], 0, 1)


class TestCompareReport:
    def test_self_comparison(self, skewed):
        report = compare_report(skewed, skewed, 2, permutations=99)
        assert report.rho == 1.0
        assert report.pair_count == 4
        assert report.seed == 42

    def test_reversed_ranking(self, skewed, reversed_skew):
        report = compare_report(skewed, reversed_skew, 2, permutations=99)
        assert report.rho == -1.0

    def test_symmetric_in_arguments(self, skewed):
        other = make_distribution({"00": 5, "01": 6, "10": 1, "11": 2}, "other")
        forward = compare_report(skewed, other, 2, permutations=199, seed=3)
        backward = compare_report(other, skewed, 2, permutations=199, seed=3)
        assert forward.rho == backward.rho
        assert forward.p_value == backward.p_value

    def test_permutations_default_from_settings(self, skewed, monkeypatch):
        monkeypatch.setenv("ALGOPROB_PERMUTATIONS", "49")
        assert compare_report(skewed, skewed, 2).permutations == 49

    def test_probes(self, skewed, reversed_skew):
        report = compare_report(skewed, reversed_skew, 2, permutations=9, probes=["00", "111"])
        first, missing = report.probes
        assert (first.rank_a, first.rank_b) == (1, 4)
        assert missing.rank_a is None and missing.length_rank_b is None

    def test_invalid_probe(self, skewed):
        with pytest.raises(ParameterError):
            compare_report(skewed, skewed, 2, permutations=9, probes=["01a"])

    def test_machines_against_automaton(self, d2):
        from algoprob.automata import cutoff_distribution, eca_run

        ca = cutoff_distribution(eca_run(30, 101, 100), 2)
        report = compare_report(d2, ca, 2, permutations=99)
        assert report.pair_count >= 3
        assert -1.0 <= report.rho <= 1.0
