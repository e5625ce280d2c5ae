import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from bruteforge.capset import (
    CapBound,
    DimensionBudgetError,
    all_vectors,
    binary_cap,
    exact_cap,
    exact_cap_enumeration,
    extends_cap,
    format_capset,
    is_cap,
    is_cap_ap,
    parse_capset_file,
    vec_add,
    vec_neg,
    vec_sub,
)


class TestVectors:
    def test_all_vectors_lexicographic(self):
        vs = all_vectors(2)
        assert len(vs) == 9
        assert vs == sorted(vs)
        assert vs[0] == (0, 0) and vs[-1] == (2, 2)

    def test_arithmetic(self):
        assert vec_add((1, 2), (2, 2)) == (0, 1)
        assert vec_sub((0, 1), (2, 2)) == (1, 2)
        assert vec_neg((1, 2)) == (2, 1)


class TestIsCap:
    def test_coordinatewise_progression_is_a_line(self):
        assert not is_cap({(0, 0), (1, 1), (2, 2)})

    def test_square_is_a_cap(self):
        assert is_cap({(0, 0), (0, 1), (1, 0), (1, 1)})

    def test_small_sets_are_caps(self):
        assert is_cap(set())
        assert is_cap({(1, 2)})
        assert is_cap({(0, 0), (2, 1)})

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            is_cap([(0, 0), (0, 0)])

    def test_extends_cap_matches_is_cap(self):
        rng = random.Random(3)
        for _ in range(200):
            n = rng.randint(1, 4)
            vs = rng.sample(all_vectors(n), rng.randint(0, min(5, 3**n)))
            if not is_cap(vs):
                continue
            v = rng.choice(all_vectors(n))
            if v in vs:
                assert not extends_cap(set(vs), v)
            else:
                assert extends_cap(set(vs), v) == is_cap(set(vs) | {v})

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=10**9), st.integers(min_value=1, max_value=5))
    def test_dual_definitions_agree(self, seed, n):
        rng = random.Random(seed)
        vs = rng.sample(all_vectors(n), rng.randint(0, min(6, 3**n)))
        assert is_cap(vs) == is_cap_ap(vs)


class TestBinaryCap:
    def test_size_and_capness(self):
        for n in range(1, 8):
            b = binary_cap(n)
            assert len(b) == 2**n
            assert is_cap(b)

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            binary_cap(0)


class TestExactCap:
    def test_tiny_dimensions_cross_checked(self):
        assert exact_cap_enumeration(1) == 2
        assert exact_cap_enumeration(2) == 4
        assert exact_cap(1) == CapBound(2, True)
        assert exact_cap(2) == CapBound(4, True)

    def test_bounds_sandwich(self):
        for n in (1, 2):
            size = exact_cap(n).size
            assert 2**n <= size <= 3**n

    def test_budget_exhaustion_reports_lower_bound(self):
        bound = exact_cap(3, budget=10)
        assert not bound.exact
        assert 1 <= bound.size <= 9

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            exact_cap(0)


class TestCapsetFiles:
    def test_roundtrip(self):
        vectors = [(0, 2, 1), (1, 1, 0)]
        text = format_capset(vectors)
        assert parse_capset_file(text) == sorted(vectors)

    def test_comments_and_blanks(self):
        assert parse_capset_file("# header\n\n012\n") == [(0, 1, 2)]

    def test_bad_digit(self):
        with pytest.raises(ValueError):
            parse_capset_file("013\n")

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            parse_capset_file("01\n012\n")
