import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gibbsolver import (admissible_words, entropy, full_shift, is_exact, periodic_orbits,
                        validate_system)
from gibbsolver.errors import CapExceededError, InvalidSystemError, NotExactError
from gibbsolver.symbolic import pattern_is_primitive

from conftest import GOLDEN


def test_full_shift_metadata(full2):
    assert full2.is_full and full2.irreducible and full2.primitive
    assert full2.primitivity_exponent == 1


def test_golden_mean_metadata(golden):
    assert not golden.is_full
    assert golden.irreducible and golden.primitive
    assert golden.primitivity_exponent == 2


def test_flip_is_irreducible_not_primitive(flip):
    assert flip.irreducible and not flip.primitive
    assert flip.primitivity_exponent is None
    assert not is_exact(flip)


@pytest.mark.parametrize("A, msg", [
    ([[1, 2], [1, 1]], "not 0 or 1"),
    ([[1, 1], [0, 0]], "row 1"),
    ([[1, 0], [1, 0]], "column 1"),
    ([[1, 1, 1], [1, 1, 1]], "2x2"),
])
def test_validate_rejects(A, msg):
    with pytest.raises(InvalidSystemError, match=msg):
        validate_system(2, A)


def test_validate_rejects_small_alphabet():
    with pytest.raises(InvalidSystemError):
        validate_system(1, [[1]])


def test_reducible_matrix():
    sys = validate_system(3, [[1, 1, 0], [0, 1, 1], [0, 1, 1]])
    assert not sys.irreducible and not sys.primitive


def test_is_exact_trio(full2, golden, flip):
    assert is_exact(full2) and is_exact(golden) and not is_exact(flip)


def test_admissible_words_examples(full2, golden):
    assert admissible_words(full2, 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert admissible_words(golden, 2) == [(0, 0), (0, 1), (1, 0)]
    A3 = np.linalg.matrix_power(golden.A, 3)
    assert len(admissible_words(golden, 4)) == A3.sum() == 8


def test_admissible_words_cap(full2):
    with pytest.raises(CapExceededError):
        admissible_words(full2, 11, cap=1000)
    sys = full_shift(2, word_cap=16)
    assert len(admissible_words(sys, 4)) == 16
    with pytest.raises(CapExceededError):
        admissible_words(sys, 5)


def test_periodic_orbit_examples(full2, golden):
    orbits = periodic_orbits(full2, 3)
    assert [o.representative for o in orbits] == [(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)]
    assert [o.representative for o in periodic_orbits(golden, 2)] == [(0,), (0, 1)]


def test_periodic_orbit_fixed_points():
    sys = validate_system(3, [[1, 1, 0], [1, 0, 1], [1, 1, 1]])
    assert [o.representative for o in periodic_orbits(sys, 1)] == [(0,), (2,)]


def test_periodic_orbit_cap(full2):
    with pytest.raises(CapExceededError):
        periodic_orbits(full2, 12, cap=100)


def _divisors(p):
    return [d for d in range(1, p + 1) if p % d == 0]


# systems for the trace identity: every row and column nonzero on <= 3 symbols
matrices = st.integers(2, 3).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                       min_size=n, max_size=n)).filter(
    lambda A: all(any(r) for r in A) and all(any(c) for c in zip(*A)))


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_orbit_count_matches_trace(A):
    sys = validate_system(len(A), A)
    orbits = periodic_orbits(sys, 8)
    by_period = {}
    for o in orbits:
        assert sys.is_cyclically_admissible(o.representative)
        assert min(o.rotations()) == o.representative
        assert len(set(o.rotations())) == o.period
        by_period[o.period] = by_period.get(o.period, 0) + 1
    for p in range(1, 9):
        points = sum(d * by_period.get(d, 0) for d in _divisors(p))
        assert points == np.trace(np.linalg.matrix_power(sys.A, p))


@settings(max_examples=40, deadline=None)
@given(matrices, st.integers(1, 6))
def test_admissible_words_sorted_and_admissible(A, length):
    sys = validate_system(len(A), A)
    words = admissible_words(sys, length)
    assert all(sys.is_admissible(w) for w in words)
    assert all(a < b for a, b in zip(words, words[1:]))
    # brute force over all n^length words
    brute = [w for w in np.ndindex(*(sys.n,) * length) if sys.is_admissible(w)]
    assert words == brute


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_exactness_matches_wielandt_bound(A):
    sys = validate_system(len(A), A)
    n = sys.n
    B = sys.A.copy()
    some_power_positive = False
    P = np.identity(n, dtype=np.int64)
    for _ in range((n - 1) ** 2 + 1):
        P = np.minimum(P @ B, 1)
        some_power_positive |= bool(P.all())
    assert is_exact(sys) == some_power_positive
    if sys.primitive:
        k = sys.primitivity_exponent
        assert k <= (n - 1) ** 2 + 1
        assert np.linalg.matrix_power(sys.A, k).all()
        if k > 1:
            assert not np.linalg.matrix_power(sys.A, k - 1).all()


def test_pattern_primitive_matches_system(golden, flip):
    assert pattern_is_primitive(golden.A) == (True, True)
    assert pattern_is_primitive(flip.A) == (True, False)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_entropy_full_shift(n):
    assert entropy(full_shift(n)) == pytest.approx(math.log(n), abs=1e-10)


def test_entropy_golden(golden):
    assert entropy(golden) == pytest.approx(math.log(GOLDEN), abs=1e-12)
    assert entropy(golden) > 0


def test_entropy_rejects_non_exact(flip):
    with pytest.raises(NotExactError):
        entropy(flip)
