from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from wreathdist.tsp import SupportCapExceeded, _solve_numpy, l1, nearest_neighbor_tsp, path_tsp

pts2 = st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=0, max_size=6, unique=True)


def brute(points, start, end):
    best = None
    for perm in permutations(sorted(points)):
        seq = [start, *perm, end]
        c = sum(l1(a, b) for a, b in zip(seq, seq[1:]))
        if best is None or (c, list(perm)) < best:
            best = (c, list(perm))
    return best


@given(pts2, st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_matches_permutation_oracle(points, end):
    assert path_tsp(points, (0, 0), end) == brute(points, (0, 0), end)


@given(pts2.filter(lambda p: len(p) >= 1), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_vectorized_table_matches_oracle(points, end):
    pts = tuple(sorted(points))
    cost, order = _solve_numpy(pts, (0, 0), end)
    assert (cost, [pts[i] for i in order]) == brute(points, (0, 0), end)


def test_large_support_is_a_valid_tour():
    points = [(i % 4, i // 4) for i in range(12)]
    cost, order = path_tsp(points, (0, 0), (0, 0))
    assert sorted(order) == sorted(points)
    assert cost == sum(l1(a, b) for a, b in zip([(0, 0), *order], [*order, (0, 0)]))
    assert cost <= nearest_neighbor_tsp(points, (0, 0), (0, 0))[0]
    assert cost == 12  # a closed boustrophedon tour of the 4 x 3 grid


def test_cap():
    with pytest.raises(SupportCapExceeded):
        path_tsp([(i, 0) for i in range(5)], (0, 0), (0, 0), cap=4)


def test_empty():
    assert path_tsp([], (0, 0), (2, -1)) == (3, [])
