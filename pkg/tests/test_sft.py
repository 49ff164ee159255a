import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermoflow import errors
from thermoflow.sft import (
    brute_periodic_points,
    enumerate_words_dfs,
    full_shift,
    golden_mean,
    higher_block,
    periodic_point_count,
    primitivity_exponent,
    validate,
    wielandt_bound,
    word_count,
    word_index,
    words,
)

from conftest import shift_index
from thermoflow.verify import standard_shifts


def test_golden_mean_words_of_length_three():
    # a^2 = [[2,1],[1,1]] sums to 5; listed lexicographically, 1-based: 111 112 121 211 212
    assert words(golden_mean(), 3) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 0, 1)]
    assert word_count(golden_mean(), 3) == 5


def test_lucas_numbers():
    lucas = [1, 3, 4, 7, 11, 18, 29, 47, 76, 123]
    assert [periodic_point_count(golden_mean(), p) for p in range(1, 11)] == lucas


def test_full_shift_counts():
    s = full_shift(3)
    assert word_count(s, 4) == 81
    assert periodic_point_count(s, 5) == 243


@pytest.mark.parametrize(
    "a, exc",
    [
        ([[1]], errors.RejectAlphabetTooSmall),
        ([[1, 1], [0, 0]], errors.RejectDeadSymbol),
        ([[1, 0], [1, 0]], errors.RejectDeadSymbol),
        ([[1, 0], [0, 1]], errors.RejectNotPrimitive),
        ([[0, 1], [1, 0]], errors.RejectNotPrimitive),
        ([[1, 2], [1, 1]], errors.ValidationError),
        ([[1, 1, 1], [1, 1, 1]], errors.ValidationError),
    ],
)
def test_validate_rejects(a, exc):
    with pytest.raises(exc):
        validate(a)


def test_wielandt_matrix_is_tight():
    # the Wielandt matrix attains the bound n^2 - 2n + 2
    n = 4
    a = np.zeros((n, n), dtype=int)
    for i in range(n - 1):
        a[i, i + 1] = 1
    a[n - 1, 0] = a[n - 1, 1] = 1
    assert primitivity_exponent(a.astype(bool)) == wielandt_bound(n) == 10
    assert validate(a).primitivity_exponent == 10


def test_sft_is_immutable():
    s = golden_mean()
    with pytest.raises(ValueError):
        s.a[0, 0] = 0
    assert s == validate([[1, 1], [1, 0]])
    assert hash(s) == hash(validate([[1, 1], [1, 0]]))


@given(shift_index, st.integers(min_value=1, max_value=7))
def test_words_match_dfs_and_count(i, k):
    s = standard_shifts()[i]
    listed = words(s, k)
    assert listed == sorted(enumerate_words_dfs(s, k))
    assert len(listed) == word_count(s, k)
    assert all(s.admissible(w) for w in listed)


@given(shift_index, st.integers(min_value=1, max_value=10))
def test_trace_matches_brute_force(i, p):
    s = standard_shifts()[i]
    assert periodic_point_count(s, p) == brute_periodic_points(s, p)


@given(shift_index, st.integers(min_value=1, max_value=4))
def test_higher_block_conjugacy(i, m):
    s = standard_shifts()[i]
    hb, states = higher_block(s, m)
    assert [tuple(w) for w in states] == words(s, m)
    # periodic orbits are preserved by the conjugacy
    for p in range(1, 6):
        assert periodic_point_count(hb, p) == periodic_point_count(s, p)
    idx = word_index(s, m)
    for j, w in enumerate(states):
        assert idx[tuple(w)] == j


def test_word_index_marks_forbidden_words():
    idx = word_index(golden_mean(), 2)
    assert idx[1, 1] == -1
