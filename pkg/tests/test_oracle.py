from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icpkit.core import Decomposition
from icpkit.errors import InvalidInstance, ResourceCapExceeded
from icpkit.oracle import (
    HullFacets,
    VertexInstance,
    caratheodory_rank_search,
    check_icp,
    check_idp,
    enumerate_integer_points,
    hull_contains,
    is_valid_decomposition,
    min_decomposition,
    reachable,
    sumset,
)
from icpkit.polyhedron import HPolyhedron, box

SQUARE = [(0, 0), (0, 1), (1, 0), (1, 1)]
# conv of these is a tetrahedron with no other integer points; (1,1,1) is in 2P but no sum of two points
TETRA = [(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
BRUNS = [
    (1, 1, 0, 0, 0), (1, 1, 1, 0, 0), (1, 0, 1, 1, 0), (1, 0, 0, 1, 1), (1, 0, 0, 0, 1),
    (0, 0, 1, 0, 1), (0, 0, 0, 1, 0), (0, 1, 0, 0, 1), (0, 0, 1, 0, 0), (0, 1, 0, 1, 0),
]


def test_enumerate_integer_points():
    assert enumerate_integer_points(box([0, 0], [1, 1])) == SQUARE
    P = HPolyhedron([[-1, 0], [0, -1], [1, 2]], [0, 0, 2])
    assert enumerate_integer_points(P) == [(0, 0), (0, 1), (1, 0), (2, 0)]
    assert enumerate_integer_points([(0, 0), (2, 2)]) == [(0, 0), (1, 1), (2, 2)]
    assert enumerate_integer_points([(0, 0), (2, 0), (0, 2)], ([1, 0], [5, 5])) == [(1, 0), (1, 1), (2, 0)]
    with pytest.raises(ResourceCapExceeded):
        enumerate_integer_points(box([0, 0], [1000, 1000]), limit=100)
    with pytest.raises(InvalidInstance):
        VertexInstance.create([])


def test_hull_contains_exact():
    assert hull_contains(SQUARE, (1, 1), 1)
    assert hull_contains(SQUARE, (3, 1), 3)
    assert not hull_contains(SQUARE, (3, 1), 2)
    assert hull_contains([(0, 0), (2, 1)], (1, Fraction(1, 2)), 1)
    assert not hull_contains([(0, 0), (2, 1)], (1, Fraction(1, 3)), 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2)), min_size=1, max_size=7, unique=True), st.integers(1, 3))
def test_hull_facets_match_lp(points, k):
    H = HullFacets(points)
    grid = np.array(list(itertools.product(range(-1, 3 * k + 2), range(-1, 3 * k + 2), range(-1, 2 * k + 2))))
    mask = H.contains(grid, k)
    rng = np.random.default_rng(len(points) * 10 + k)
    for i in rng.choice(len(grid), size=25, replace=False):
        assert mask[i] == hull_contains(points, grid[i].tolist(), k)
    for p in points:
        assert H.contains(np.array([p]))[0]


def test_sumset_and_reachable():
    assert sorted(map(tuple, sumset(SQUARE, 2).tolist())) == [(a, b) for a in range(3) for b in range(3)]
    assert reachable(TETRA, (2, 1, 1), 2)
    assert not reachable(TETRA, (1, 1, 1), 2)


def test_min_decomposition():
    t, dec = min_decomposition(SQUARE, (3, 3), 3)
    assert t == 1 and dec.points == ((1, 1),)
    t, dec = min_decomposition(SQUARE, (2, 1), 3)
    assert t == 2 and is_valid_decomposition(dec, (2, 1), 3, SQUARE, True)
    assert min_decomposition(SQUARE, (4, 0), 3) is None
    assert min_decomposition(TETRA, (1, 1, 1), 2) is None


def test_is_valid_decomposition():
    dec = Decomposition(((0, 0), (1, 1), (2, 2)), (1, 1, 1), 3)
    assert is_valid_decomposition(dec, (3, 3), 3, [(0, 0), (1, 1), (2, 2)])
    assert not is_valid_decomposition(dec, (3, 3), 3, [(0, 0), (1, 1), (2, 2)], require_affine_independence=True)
    assert not is_valid_decomposition(dec, (3, 3), 3, SQUARE)


def test_idp_failure_example():
    rep = check_idp(TETRA, 3)
    assert not rep.holds
    assert rep.counterexample == {"k": 2, "w": [1, 1, 1], "reason": "not a sum of k integer points"}
    assert not check_icp(TETRA, 3).holds


def test_square_properties():
    assert check_idp(SQUARE, 4).holds
    assert check_icp(SQUARE, 4).holds


def test_square_rank():
    # every sum of k <= 3 points of the square needs at most 2 distinct points
    rep = caratheodory_rank_search(SQUARE, 3)
    assert rep.caratheodory_rank_lower_bound == 2
    assert rep.worst_t == {1: 1, 2: 2, 3: 2}
    assert rep.completed


def test_bruns_small_range():
    assert enumerate_integer_points(BRUNS) == sorted(BRUNS)
    H = HullFacets(BRUNS)
    assert H.dim == 5 and len(H.facets) == 27
    assert check_idp(BRUNS, 6).holds
    rep = caratheodory_rank_search(BRUNS, 6)
    assert rep.worst_t == {1: 1, 2: 2, 3: 3, 4: 4, 5: 5, 6: 5}


def test_bruns_witness_decomposition():
    # witness found by the rank search (see the acceptance suite and tests/fixtures)
    w, k = (9, 8, 8, 8, 8), 20
    t, dec = min_decomposition(BRUNS, w, k)
    assert t == 7 and is_valid_decomposition(dec, w, k, BRUNS)
    assert min_decomposition(BRUNS, w, k, max_t=6) is None
    assert min_decomposition(BRUNS, w, k, require_affine_independence=True) is None
