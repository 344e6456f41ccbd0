import itertools
import random
from fractions import Fraction

import pytest

from intervalqe.clstats import (
    alternation_count, is_shattered, max_asymmetry, med, order_property, read_matrix,
)


def max_min(values):
    n = (len(values) + 1) // 2
    return max(min(s) for s in itertools.combinations(values, n))


def min_max(values):
    n = (len(values) + 1) // 2
    return min(max(s) for s in itertools.combinations(values, n))


class TestMed:
    def test_examples(self):
        assert med([0, 1, 1]) == 1 == max_min([0, 1, 1])
        assert med([Fraction(2, 3)] * 5) == Fraction(2, 3)

    def test_permutation_invariant(self):
        rng = random.Random(1)
        v = [rng.randint(-9, 9) for _ in range(9)]
        m = med(v)
        for _ in range(1000):
            rng.shuffle(v)
            assert med(v) == m

    def test_small_exhaustive(self):
        for n in (1, 3, 5):
            for v in itertools.product((0, Fraction(1, 2), 1), repeat=n):
                assert med(v) == max_min(v) == min_max(v)

    @pytest.mark.parametrize("bad", [[], [1, 2]])
    def test_rejects_even(self, bad):
        with pytest.raises(ValueError):
            med(bad)


class TestOrderProperty:
    def test_strict_upper(self):
        m = [[1 if i < j else 0 for j in range(20)] for i in range(20)]
        w = order_property(m, 1)
        assert w.chain == tuple(range(20)) and not w.budget_exhausted

    def test_symmetric(self):
        m = [[i + j for j in range(6)] for i in range(6)]
        assert order_property(m, Fraction(1, 100)) is None

    def test_small(self):
        w = order_property([[0, 1], [Fraction(1, 2), 0]], Fraction(1, 2))
        assert w.chain == (0, 1)

    def test_chain_is_valid_and_none_iff_symmetric(self):
        rng = random.Random(2)
        for _ in range(200):
            n = rng.randint(1, 7)
            m = [[Fraction(rng.randint(0, 4), 4) for _ in range(n)] for _ in range(n)]
            eps = Fraction(rng.randint(1, 4), 4)
            w = order_property(m, eps)
            assert (w is None) == (max_asymmetry(m) < eps)
            if w is not None:
                assert len(w.chain) >= 2
                for p, q in itertools.combinations(w.chain, 2):
                    assert abs(m[p][q] - m[q][p]) >= eps
                longest = max(
                    (len(c) for k in range(2, n + 1) for c in itertools.combinations(range(n), k)
                     if all(abs(m[p][q] - m[q][p]) >= eps for p, q in itertools.combinations(c, 2))),
                    default=0)
                assert len(w.chain) == longest

    def test_budget_flag(self):
        rng = random.Random(3)
        m = [[rng.randint(0, 1) for _ in range(30)] for _ in range(30)]
        w = order_property(m, 1, budget=5)
        assert w.budget_exhausted

    def test_errors(self):
        with pytest.raises(ValueError):
            order_property([[0]], 0)
        with pytest.raises(ValueError):
            order_property([[0, 1]], 1)


class TestAlternation:
    def test_examples(self):
        assert alternation_count([0, 1, 0, 1], 1, 0) == 3
        assert alternation_count([5] * 6, 1, 0) == 0
        assert alternation_count([0, Fraction(1, 2), 1], 1, 0) == 1

    def test_band_projection(self):
        rng = random.Random(4)
        for _ in range(300):
            v = [Fraction(rng.randint(0, 8), 4) for _ in range(rng.randint(0, 12))]
            bands = [0 if a <= Fraction(1, 2) else 2 if a >= Fraction(3, 2) else 1 for a in v]
            assert alternation_count(v, Fraction(3, 2), Fraction(1, 2)) == alternation_count(bands, 2, 0)

    def test_error(self):
        with pytest.raises(ValueError):
            alternation_count([0], 1, 1)


class TestShatter:
    def test_examples(self):
        assert is_shattered([[0, 0], [0, 1], [1, 0], [1, 1]])
        assert not is_shattered([[a, b, c] for a, b, c in itertools.product((0, 1), repeat=3)][:7])
        assert is_shattered([[0], [1]])

    def test_monotone(self):
        rng = random.Random(5)
        for _ in range(300):
            cols = rng.randint(1, 3)
            rows = [[rng.randint(0, 1) for _ in range(cols)] for _ in range(rng.randint(1, 10))]
            if is_shattered(rows):
                assert is_shattered(rows + [[rng.randint(0, 1) for _ in range(cols)]])


def test_read_matrix(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("0,1/2\n0.25,-3\n")
    assert read_matrix(p) == [[0, Fraction(1, 2)], [Fraction(1, 4), -3]]
