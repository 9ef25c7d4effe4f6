from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from artifact.seifert import alexander_from_seifert, alexander_of_braid, seifert_matrix, trim, v2_from_alexander
from artifact.tangles import braid_permutation, load_knots


@pytest.mark.parametrize("word, expected", [
    ((), [1]),
    ((1,), [1]),
    ((1, 1, 1), [1, -1, 1]),
    ((-1, -1, -1), [1, -1, 1]),
    ((1, -2, 1, -2), [-1, 3, -1]),
    ((1, 1, 1, 1, 1), [1, -1, 1, -1, 1]),
    ((1, 1, 1, 2, -1, 2), [2, -3, 2]),
])
def test_small_braids(word, expected):
    assert alexander_of_braid(word) == expected


def test_trefoil_matrix():
    V = seifert_matrix((1, 1, 1))
    assert V == [[-1, 1], [0, -1]]
    assert alexander_from_seifert(V) == [1, -1, 1]


def test_odd_matrix_rejected():
    with pytest.raises(ValueError):
        alexander_from_seifert([[1]])


def test_trim():
    assert trim([0, 0, 1, 0, 0]) == [1]
    assert trim([0, 1, -1, 1, 0]) == [1, -1, 1]
    assert trim([1]) == [1]


def test_v2():
    assert v2_from_alexander([1]) == 0
    assert v2_from_alexander([1, -1, 1]) == 1
    assert v2_from_alexander([-1, 3, -1]) == -1
    assert v2_from_alexander([2, -3, 2]) == 2


def test_matches_reference_table():
    for rec in load_knots().values():
        if rec.braid is not None:
            assert alexander_of_braid(rec.braid) == list(rec.alexander), rec.name


def _is_knot(word, n):
    perm = braid_permutation(word, n)
    seen, i = 0, 0
    while True:
        i = perm[i]
        seen += 1
        if i == 0:
            return seen == n


@given(st.integers(2, 4).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(1, n - 1).flatmap(
        lambda g: st.sampled_from([g, -g])), max_size=9))))
@settings(max_examples=150, deadline=None)
def test_random_closures_are_symmetric_and_normalized(args):
    n, word = args
    assume(set(map(abs, word)) == set(range(1, n)))
    assume(_is_knot(word, n))
    cs = alexander_of_braid(word)
    assert cs == cs[::-1]
    assert sum(cs) == 1
    # mirror image has the same polynomial
    assert alexander_of_braid([-g for g in word]) == cs
    assert isinstance(v2_from_alexander(cs), Fraction)
