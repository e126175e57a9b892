import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from latsamp.freqsets import (
    build_dyadic_block,
    build_hyperbolic_cross,
    build_rectangle,
    build_step_hyperbolic_cross,
    difference_set,
    explicit_set,
    level_vectors,
)


def as_set(Q):
    return set(Q)


def test_rectangle_examples():
    assert len(build_rectangle((2, 2))) == 9
    assert as_set(build_rectangle((1, 1))) == {(0, 0)}
    R = build_rectangle((3, 2))
    assert (2, 1) in R
    assert (3, 1) not in R


def test_hyperbolic_cross_examples():
    assert len(build_hyperbolic_cross(1, 2)) == 9
    assert len(build_hyperbolic_cross(2, 3)) == 81
    G = build_hyperbolic_cross(5, 1)
    assert as_set(G) == {(k,) for k in range(-5, 6)}


def test_dyadic_block_examples():
    assert as_set(build_dyadic_block((0,))) == {(0,)}
    assert as_set(build_dyadic_block((2,))) == {(-3,), (-2,), (2,), (3,)}
    B = build_dyadic_block((1, 1))
    assert as_set(B) == {(a, b) for a in (-1, 1) for b in (-1, 1)}


def test_step_cross_examples():
    assert as_set(build_step_hyperbolic_cross(3, 1)) == {(k,) for k in range(-7, 8)}
    assert as_set(build_step_hyperbolic_cross(0, 2)) == {(0, 0)}
    Q = build_step_hyperbolic_cross(2, 2)
    assert (1, 1) in Q and (3, 0) in Q and (2, 2) not in Q


def test_difference_set_examples():
    assert as_set(difference_set(explicit_set([[0]]))) == {(0,)}
    assert as_set(difference_set(build_rectangle((2,)))) == {(k,) for k in range(-2, 3)}
    D = difference_set(build_rectangle((2, 2)))
    assert len(D) == 25
    assert as_set(D) == set(itertools.product(range(-2, 3), repeat=2))


def brute_cross(N, d):
    box = itertools.product(range(-N, N + 1), repeat=d)
    return {k for k in box if math.prod(max(abs(v), 1) for v in k) <= N}


@pytest.mark.parametrize("N,d", [(1, 1), (7, 1), (6, 2), (13, 2), (4, 3), (9, 3), (3, 4)])
def test_hyperbolic_cross_matches_box_enumeration(N, d):
    assert as_set(build_hyperbolic_cross(N, d)) == brute_cross(N, d)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("r", [0, 1, 2, 4, 6, 8])
def test_blocks_are_disjoint_and_tile_the_step_cross(r, d):
    if d == 3 and r > 6:
        pytest.skip("enumeration kept small for d = 3")
    Q = build_step_hyperbolic_cross(r, d)
    seen = set()
    total = 0
    for s in level_vectors(r, d):
        B = as_set(build_dyadic_block(s))
        assert not (B & seen)
        seen |= B
        total += len(B)
    assert total == len(Q)
    assert seen == as_set(Q)


@pytest.mark.parametrize("r,d", [(3, 2), (5, 2), (4, 3)])
def test_step_cross_nested_in_hyperbolic_cross(r, d):
    G = build_hyperbolic_cross(2**r, d)
    assert np.all(G.contains_many(build_step_hyperbolic_cross(r, d).freqs))


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3))
def test_rectangle_nested_in_cross_and_symmetric(j):
    R = build_rectangle(j)
    assert np.all(build_hyperbolic_cross(math.prod(j), len(j)).contains_many(R.freqs))
    assert np.all(R.contains_many(-R.freqs))
    assert len(R) == math.prod(2 * v - 1 for v in j)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=2))
def test_difference_set_of_rectangle_bound(j):
    D = difference_set(build_rectangle(j))
    assert np.all(np.abs(D.freqs) <= 2 * np.array(j) - 2)


@given(st.integers(0, 12), st.integers(1, 3))
def test_built_sets_symmetric_and_sorted(N, d):
    for Q in (build_hyperbolic_cross(max(N, 1), d), build_step_hyperbolic_cross(min(N, 6), d)):
        assert np.all(Q.contains_many(-Q.freqs))
        rows = [tuple(r) for r in Q.freqs.tolist()]
        assert rows == sorted(rows)
        assert len(set(rows)) == len(rows) == Q.cardinality


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=20))
def test_explicit_set_membership_matches_iteration(rows):
    Q = explicit_set(rows, 2)
    members = as_set(Q)
    assert members == {tuple(r) for r in rows}
    for k in itertools.product(range(-5, 6), repeat=2):
        assert (k in Q) == (k in members)


def test_contains_many_agrees_with_iteration_for_every_kind():
    sets = [build_rectangle((3, 2)), build_hyperbolic_cross(5, 2), build_dyadic_block((2, 1)),
            build_step_hyperbolic_cross(3, 2)]
    box = np.array(list(itertools.product(range(-9, 10), repeat=2)))
    for Q in sets:
        expected = np.array([tuple(k) in as_set(Q) for k in box.tolist()])
        assert np.array_equal(Q.contains_many(box), expected)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        build_rectangle((0, 2))
    with pytest.raises(ValueError):
        build_hyperbolic_cross(0, 2)
    with pytest.raises(ValueError):
        build_dyadic_block((-1,))
    with pytest.raises((TypeError, ValueError)):
        build_step_hyperbolic_cross(1.5, 2)
    with pytest.raises(ValueError):
        build_rectangle((2, 2)).contains((1, 1, 1))


def test_to_json_roundtrip_fields():
    import json

    obj = json.loads(build_rectangle((2, 1)).to_json())
    assert obj["dim"] == 2
    assert obj["kind"] == "rectangle"
