from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icpkit.core import icp_decompose
from icpkit.errors import InvalidInstance, NotMember
from icpkit.polyhedron import condition_intersection
from icpkit.polymatroid import (
    MatroidSpec,
    SubmodularFn,
    bases,
    is_base,
    linkage_rank,
    matroid_base_decompose,
    polymatroid_family,
    rank_from_constructor,
    submodularity_violation,
)

K4 = MatroidSpec.graphic([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def brute_submodular(values, n) -> bool:
    return all(values[A] + values[B] >= values[A | B] + values[A & B] for A in range(1 << n) for B in range(1 << n))


def coverage(n, sets):
    """f(U) = |union of sets[j] for j in U|, a standard submodular function."""
    return SubmodularFn.from_function(n, lambda U: len(set().union(*[sets[j] for j in U])) if U else 0)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 3), min_size=1 << n, max_size=1 << n))))
def test_local_condition_equals_full_condition(case):
    n, values = case
    values[0] = 0
    assert (submodularity_violation(values, n) is None) == brute_submodular(values, n)


def test_mutation_breaks_submodularity():
    f = coverage(4, [{0, 1}, {1, 2}, {2, 3}, {0, 3}])
    assert submodularity_violation(f.values, 4) is None
    caught = 0
    for U in range(1, 16):
        bumped = list(f.values)
        bumped[U] += 1
        if not brute_submodular(bumped, 4):
            with pytest.raises(InvalidInstance):
                SubmodularFn(4, tuple(bumped))
            caught += 1
        else:
            SubmodularFn(4, tuple(bumped))
    assert caught > 0


def test_empty_set_value_is_normalized():
    f = SubmodularFn(2, (3, 3, 3, 3))
    assert f.values[0] == 0 and f({0, 1}) == 3
    with pytest.raises(InvalidInstance):
        SubmodularFn(1, (-1, 0))
    with pytest.raises(InvalidInstance):
        SubmodularFn(2, (0, 1, 1))


def test_matroid_constructors():
    assert len(bases(rank_from_constructor(MatroidSpec.uniform(3, 2)))) == 3
    assert len(bases(rank_from_constructor(K4))) == 16
    part = rank_from_constructor(MatroidSpec.partition([[0, 1], [2, 3], [4, 5]], [1, 1, 1]))
    assert len(bases(part)) == 8
    ex = rank_from_constructor(MatroidSpec.explicit_bases(4, [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3]]))
    assert not is_base(ex, (0, 0, 1, 1)) and is_base(ex, (0, 1, 0, 1))
    with pytest.raises(InvalidInstance):
        # missing {1, 3} violates basis exchange
        rank_from_constructor(MatroidSpec.explicit_bases(4, [[0, 1], [0, 2], [0, 3], [1, 2]]))
    with pytest.raises(InvalidInstance):
        MatroidSpec.uniform(2, 3)
    with pytest.raises(InvalidInstance):
        MatroidSpec.partition([[0], [2]], [1, 1])


def test_gammoid_rank():
    verts = ["u", "v", "a", "b", "c"]
    arcs = [("u", "a"), ("u", "b"), ("v", "b"), ("v", "c")]
    assert linkage_rank(verts, arcs, ["u", "v"], ["a", "b", "c"]) == 2
    assert linkage_rank(verts, arcs, ["u", "v"], ["a"]) == 1
    assert linkage_rank(verts, arcs, ["u"], ["c"]) == 0
    f = rank_from_constructor(MatroidSpec.gammoid(verts, arcs, ["u", "v"], ["a", "b", "c"]))
    assert bases(f) == [(1, 1, 0), (1, 0, 1), (0, 1, 1)]


def _inside(P, X):
    G, h, is_eq, _ = P.constraint_system()
    G, h, eq = np.array(G), np.array(h), np.array(is_eq, dtype=bool)
    V = X @ G.T
    return ((V <= h) & (~eq | (V == h))).all(axis=1)


@pytest.mark.parametrize("kind", ["extended", "polymatroid", "base"])
def test_closed_form_intersection_matches_generic(kind):
    f = coverage(3, [{0}, {0, 1}, {1, 2}])
    fam = polymatroid_family(f, kind)
    for k in range(1, 4):
        for r in range(k + 1):
            for w in [(1, 1, 1), (2, 2, 1), (0, 3, 2), (k, k, k)]:
                a = fam.intersection(r, k, w)
                b = condition_intersection(fam.polyhedron, r, k, w)
                grid = np.array(list(itertools.product(range(-k - 2, 3 * k + 3), repeat=3)))
                assert (_inside(a, grid) == _inside(b, grid)).all(), (kind, k, r, w)


def test_base_polytope_bounds_are_implied():
    f = coverage(3, [{0}, {0, 1}, {1, 2}])
    P = polymatroid_family(f, "base").polyhedron
    # f({e}) upper bound and f(E) - f(E - e) lower bound
    assert P.upper == (1, 2, 2)
    assert P.lower == (0, 0, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_k4_base_sums(k, data):
    f = rank_from_constructor(K4)
    B = bases(f)
    chosen = data.draw(st.lists(st.sampled_from(B), min_size=k, max_size=k))
    w = tuple(map(sum, zip(*chosen)))
    dec = matroid_base_decompose(K4, w, k)
    assert dec.total == w and dec.k == k
    assert all(is_base(f, p) for p in dec.points)
    assert dec.is_affinely_independent()
    assert dec.t <= f.n


def test_matroid_decompose_rejects_wrong_total():
    with pytest.raises(NotMember):
        matroid_base_decompose(MatroidSpec.uniform(3, 2), (1, 1, 1), 2)
    with pytest.raises(NotMember):
        matroid_base_decompose(MatroidSpec.uniform(3, 2), (3, 1, 0), 2)


def test_polymatroid_decompose():
    f = coverage(3, [{0}, {0, 1}, {1, 2}])
    fam = polymatroid_family(f, "polymatroid")
    dec = icp_decompose(fam, (1, 3, 2), 2)
    assert dec.total == (1, 3, 2)
    assert all(fam.polyhedron.contains(p) for p in dec.points)
    assert dec.is_affinely_independent()
