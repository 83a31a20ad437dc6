from __future__ import annotations

import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from icpkit.errors import InvalidInstance, NotMember
from icpkit.gammoid import GammoidPresentation, common_base_decompose, common_bases, flow_supports, glue
from icpkit.tu import check_tu

FREE1 = GammoidPresentation.create(["a"], [], ["a"], ["a"])


def test_free_matroid_on_one_element():
    net = glue(FREE1, FREE1)
    assert len(net.nodes) == 6 and len(net.arcs) == 6
    assert net.arcs[0] == ("1:a:out", "2:a:in")
    assert net.arcs[net.return_arc] == ("s", "r")
    assert flow_supports(net) == {(1,)}
    assert common_bases(FREE1, FREE1) == [(1,)]
    # exhaustive minors, without the incidence shortcut
    assert check_tu(net.incidence_matrix(), structural=False).is_tu


def test_rank_one_pair():
    # M1: {a} and {b} are bases (a reaches b); M2: only {a}
    m1 = GammoidPresentation.create(["a", "b"], [("a", "b")], ["a"], ["a", "b"])
    m2 = GammoidPresentation.create(["a", "b"], [], ["a"], ["a", "b"])
    net = glue(m1, m2)
    assert len(net.arcs) == 10
    assert flow_supports(net) == set(common_bases(m1, m2)) == {(1, 0)}
    flow = [0] * len(net.arcs)
    path = [("1:a:out", "2:a:in"), ("1:a:in", "1:a:out"), ("2:a:in", "2:a:out"), ("r", "1:a:in"), ("2:a:out", "s"), ("s", "r")]
    for arc in path:
        flow[net.arcs.index(arc)] = 1
    assert net.is_flow(flow)
    flow[0] = 0
    assert not net.is_flow(flow)


def test_disjoint_common_bases_are_empty():
    m1 = GammoidPresentation.create(["a", "b"], [], ["a"], ["a", "b"])
    m2 = GammoidPresentation.create(["a", "b"], [], ["b"], ["a", "b"])
    net = glue(m1, m2)
    assert flow_supports(net) == set() == set(common_bases(m1, m2))


def test_glue_validation():
    m1 = GammoidPresentation.create(["a", "b"], [], ["a", "b"], ["a", "b"])
    m2 = GammoidPresentation.create(["a", "b"], [], ["a"], ["a", "b"])
    with pytest.raises(InvalidInstance):
        glue(m1, m2)  # ranks 2 and 1
    m3 = GammoidPresentation.create(["x", "y"], [], ["x", "y"], ["x", "y"])
    with pytest.raises(InvalidInstance):
        glue(m1, m3)  # labels differ and no phi
    net = glue(m1, m3, {"a": "y", "b": "x"})
    assert net.arcs[0] == ("1:a:out", "2:y:in")
    assert flow_supports(net) == {(1, 1)}


@st.composite
def presentations(draw, S=("a", "b", "c")):
    extra = draw(st.lists(st.sampled_from(["u", "v"]), unique=True, max_size=2))
    vertices = list(S) + extra
    pairs = [(p, q) for p in vertices for q in vertices if p != q]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=4))
    U = draw(st.lists(st.sampled_from(vertices), unique=True, min_size=1, max_size=2))
    return GammoidPresentation.create(vertices, arcs, U, list(S))


@settings(max_examples=60, deadline=None)
@given(presentations(), presentations())
def test_flow_supports_equal_common_bases(m1, m2):
    assume(m1.rank == m2.rank)
    net = glue(m1, m2)
    assume(len(net.arcs) - 1 <= 18)
    assert flow_supports(net) == set(common_bases(m1, m2))


def test_common_base_decomposition():
    m1 = GammoidPresentation.create(["u", "a", "b", "c"], [("u", "a"), ("u", "b"), ("u", "c")], ["u"], ["a", "b", "c"])
    m2 = GammoidPresentation.create(["v", "a", "b", "c"], [("v", "a"), ("v", "b")], ["v"], ["a", "b", "c"])
    net = glue(m1, m2)
    B = common_bases(m1, m2)
    assert B == [(1, 0, 0), (0, 1, 0)]
    for k in range(1, 5):
        for combo in itertools.combinations_with_replacement(B, k):
            w = tuple(map(sum, zip(*combo)))
            dec = common_base_decompose(net, w, k)
            assert dec.total == w and dec.k == k
            assert set(dec.points) <= set(B)
            assert dec.is_affinely_independent()
    with pytest.raises(NotMember):
        common_base_decompose(net, (0, 0, 1), 1)
