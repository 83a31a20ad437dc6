from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icpkit.core import icp_decompose
from icpkit.errors import EmptyPolyhedron, InvalidInstance, NotBoxIntegral, NotMember, ResourceCapExceeded
from icpkit.linalg import det
from icpkit.oracle import enumerate_integer_points, reachable
from icpkit.polyhedron import HPolyhedron, check_box_integral, condition_intersection
from icpkit.tu import NtuInstance, TuInstance, check_tu, ntu_icp_decompose, ntu_membership, tu_family

COUNTER = NtuInstance.create([[-1, 0], [0, -1], [1, 0]], 1, [0, 0, -2], [0, 0, 2])


def brute_tu(A) -> bool:
    m, n = len(A), len(A[0])
    for s in range(1, min(m, n) + 1):
        for rows in itertools.combinations(range(m), s):
            for cols in itertools.combinations(range(n), s):
                if abs(det([[A[i][j] for j in cols] for i in rows])) > 1:
                    return False
    return True


def test_small_examples():
    rep = check_tu([[1, 1], [-1, 1]])
    assert not rep.is_tu and abs(rep.determinant) == 2
    assert rep.rows == (0, 1) and rep.cols == (0, 1)
    assert not check_tu([[2]]).is_tu
    assert check_tu([[1, 0], [0, 1]]).is_tu
    # odd cycle incidence (undirected, unsigned) is not TU
    assert not check_tu([[1, 1, 0], [0, 1, 1], [1, 0, 1]]).is_tu


def test_digraph_incidence_is_structural():
    arcs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 2)]
    A = [[(1 if v == h else 0) - (1 if v == t else 0) for t, h in arcs] for v in range(4)]
    rep = check_tu(A)
    assert rep.is_tu and rep.exhaustive and rep.reason == "digraph incidence matrix"
    assert check_tu(A, structural=False).is_tu


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-1, 1), min_size=n, max_size=n), min_size=m, max_size=m))))
def test_exhaustive_matches_brute_force(A):
    assert check_tu(A, structural=False).is_tu == brute_tu(A)
    assert check_tu(A).is_tu == brute_tu(A)


def test_cap_and_sampling():
    A = np.eye(10, dtype=int).tolist()
    A[0][1] = 1  # break the incidence structure so the fast path does not apply
    A[2][1] = 1
    with pytest.raises(ResourceCapExceeded):
        check_tu(A, max_dim=8)
    with pytest.warns(UserWarning):
        rep = check_tu(A, max_dim=8, sample=True, samples=200)
    assert rep.is_tu and rep.unverified


def test_instance_validation():
    with pytest.raises(InvalidInstance):
        TuInstance.create([[1, 1], [-1, 1]], [1, 1])
    with pytest.raises(InvalidInstance):
        TuInstance.create([[1, 0]], [1, 2])
    inst = TuInstance.create([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 0, 0])
    assert inst.tu_verified and inst.n == 2


def _points(P, lo, hi):
    return {p for p in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]) if P.contains(p)}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_closed_form_intersection_matches_generic(k, data):
    P = HPolyhedron([[1, 1, 0], [0, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]], [1, 1, 0, 0, 0], lower=[None, None, None], upper=[1, None, None])
    r = data.draw(st.integers(0, k))
    w = data.draw(st.lists(st.integers(-1, k + 1), min_size=3, max_size=3))
    fam = tu_family(P)
    lo, hi = [-2] * 3, [k + 2] * 3
    assert _points(fam.intersection(r, k, w), lo, hi) == _points(condition_intersection(P, r, k, w), lo, hi)


def test_ntu_counterexample_shape():
    assert COUNTER.A == ((-1, 0), (0, -1), (1, 2))
    assert COUNTER.a == (0, -1)
    assert sorted(enumerate_integer_points(COUNTER.relaxation)) == [(0, 0), (0, 1), (1, 0), (2, 0)]
    rep = check_box_integral(COUNTER.relaxation)
    assert not rep.box_integral and rep.witness_vertex == (1, Fraction(1, 2))


def test_ntu_layers():
    assert sorted(enumerate_integer_points(COUNTER.layer(0), ([0, 0], [3, 3]))) == [(0, 0), (1, 0), (2, 0)]
    assert sorted(enumerate_integer_points(COUNTER.layer(-1), ([-3, -3], [3, 3]))) == [(0, 1)]


def test_ntu_membership_matches_oracle():
    pts = enumerate_integer_points(COUNTER.relaxation)
    for k in range(1, 5):
        for w in itertools.product(range(-1, 2 * k + 2), range(-1, k + 2)):
            member, y = ntu_membership(COUNTER, w, k)
            assert member == reachable(pts, w, k), (w, k)


def test_ntu_decompose():
    dec = ntu_icp_decompose(COUNTER, (1, 1), 2)
    assert sorted(dec.points) == [(0, 1), (1, 0)]
    with pytest.raises(NotMember):
        ntu_icp_decompose(COUNTER, (3, 1), 2)
    for k in range(1, 5):
        for w in itertools.product(range(5), repeat=2):
            if not ntu_membership(COUNTER, w, k)[0]:
                continue
            dec = ntu_icp_decompose(COUNTER, w, k)
            assert dec.total == w and dec.k == k
            assert all(COUNTER.contains_integer(p) for p in dec.points)
            assert dec.is_affinely_independent()


def test_generic_recursion_is_not_enough_for_ntu():
    """The relaxation is not in the class, so the plain recursion can fail where the NTU path succeeds."""
    failures = 0
    for k in range(2, 5):
        for w in itertools.product(range(5), repeat=2):
            if not ntu_membership(COUNTER, w, k)[0]:
                continue
            try:
                dec = icp_decompose(COUNTER.relaxation, w, k)
                failures += not all(COUNTER.contains_integer(p) for p in dec.points)
            except (NotBoxIntegral, EmptyPolyhedron):
                failures += 1
    assert failures > 0
    with pytest.raises(NotBoxIntegral):
        icp_decompose(COUNTER.relaxation, (1, 1), 2)


def test_ntu_rejects_non_tu_base():
    with pytest.raises(InvalidInstance):
        NtuInstance.create([[1, 1], [-1, 1]], 0, [0, 0], [1, 1])
    with pytest.raises(InvalidInstance):
        NtuInstance.create([[1, 0]], 3, [0], [1])
