"""Common bases of two gammoids as projections of a flow polytope.

Two gammoid presentations ``(D_1, U_1, S)`` and ``(D_2, U_2, S)`` are glued
into one digraph: every vertex is split into ``v_in -> v_out``, ``D_1`` keeps
its arcs, ``D_2`` is reversed, each ground element ``s`` gets an arc
``s_out(1) -> phi(s)_in(2)``, a source ``r`` feeds ``U_1`` and ``U_2`` drains
into a sink ``s`` with a return arc ``s -> r``.  Integer circulations that put
flow ``k`` on the return arc correspond to ``k`` vertex-disjoint paths that
cross the element arcs exactly on a common base.  The flow polytope is
defined by a network matrix, so it is TU and the common-base polytope, its
projection onto the element arcs, inherits the decomposition property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import Decomposition, project_decompose
from .errors import InvalidInstance, ResourceCapExceeded
from .polyhedron import HPolyhedron
from .polymatroid import MatroidSpec, SubmodularFn, _members, rank_from_constructor
from .tu import tu_family

SOURCE = "r"
SINK = "s"


@dataclass(frozen=True)
class GammoidPresentation:
    vertices: tuple
    arcs: tuple
    U: tuple
    S: tuple
    rank_table: SubmodularFn = field(compare=False, repr=False, default=None)

    @classmethod
    def create(cls, vertices, arcs, U, S) -> "GammoidPresentation":
        spec = MatroidSpec.gammoid(vertices, arcs, U, S)
        return cls(*spec.params, rank_table=rank_from_constructor(spec))

    @property
    def rank(self) -> int:
        return self.rank_table.values[self.rank_table.full]

    def is_base(self, subset: Sequence) -> bool:
        """``subset`` lists elements of ``S``."""
        idx = {s: j for j, s in enumerate(self.S)}
        m = sum(1 << idx[s] for s in subset)
        return self.rank_table.values[m] == len(subset) == self.rank


@dataclass(frozen=True)
class GluedFlowNetwork:
    """Split-node network; ``arcs[:len(elements)]`` are the element arcs in ground-set order."""

    nodes: tuple[str, ...]
    arcs: tuple[tuple[str, str], ...]
    elements: tuple
    k: int

    @property
    def element_arcs(self) -> dict:
        return {e: self.arcs[j] for j, e in enumerate(self.elements)}

    @property
    def return_arc(self) -> int:
        return len(self.arcs) - 1

    def incidence_matrix(self) -> list[list[int]]:
        """Node-arc incidence: ``-1`` at the tail, ``+1`` at the head."""
        pos = {v: i for i, v in enumerate(self.nodes)}
        X = [[0] * len(self.arcs) for _ in self.nodes]
        for j, (a, b) in enumerate(self.arcs):
            X[pos[a]][j] -= 1
            X[pos[b]][j] += 1
        return X

    def flow_polytope(self, value: int | None = None) -> HPolyhedron:
        """``{f : X f = 0, 0 <= f <= 1, f(return) = value}``; ``value`` defaults to ``k``."""
        value = self.k if value is None else value
        X = self.incidence_matrix()
        m = len(self.arcs)
        lo = [0] * m
        hi = [1] * m
        lo[-1] = hi[-1] = value
        return HPolyhedron(X, [0] * len(X), n=m, eq_rows=range(len(X)), lower=lo, upper=hi)

    def is_flow(self, f: Sequence[int]) -> bool:
        if len(f) != len(self.arcs) or f[-1] != self.k:
            return False
        if any(v not in (0, 1) for v in f[:-1]):
            return False
        return all(sum(a * b for a, b in zip(row, f)) == 0 for row in self.incidence_matrix())


def _name(side: int, v, port: str) -> str:
    return f"{side}:{v}:{port}"


def glue(M1: GammoidPresentation, M2: GammoidPresentation, phi: Mapping | None = None) -> GluedFlowNetwork:
    """Build the split-node network whose value-``k`` flows encode common bases."""
    if len(M1.S) != len(M2.S):
        raise InvalidInstance("ground sets differ in size")
    if phi is None:
        if set(M1.S) != set(M2.S):
            raise InvalidInstance("phi is required when the ground sets use different labels")
        phi = {s: s for s in M1.S}
    if set(phi) != set(M1.S) or sorted(map(str, phi.values())) != sorted(map(str, M2.S)):
        raise InvalidInstance("phi must be a bijection from S1 onto S2")
    phi = {s: next(t for t in M2.S if str(t) == str(phi[s])) for s in M1.S}
    if M1.rank != M2.rank:
        raise InvalidInstance(f"gammoid ranks differ: {M1.rank} vs {M2.rank}")
    nodes: list[str] = []
    for side, M in ((1, M1), (2, M2)):
        for v in M.vertices:
            nodes += [_name(side, v, "in"), _name(side, v, "out")]
    nodes += [SOURCE, SINK]
    arcs = [(_name(1, s, "out"), _name(2, phi[s], "in")) for s in M1.S]
    for side, M in ((1, M1), (2, M2)):
        arcs += [(_name(side, v, "in"), _name(side, v, "out")) for v in M.vertices]
    arcs += [(_name(1, u, "out"), _name(1, v, "in")) for u, v in M1.arcs]
    arcs += [(_name(2, u, "out"), _name(2, v, "in")) for v, u in M2.arcs]
    arcs += [(SOURCE, _name(1, u, "in")) for u in M1.U]
    arcs += [(_name(2, u, "out"), SINK) for u in M2.U]
    arcs.append((SINK, SOURCE))
    return GluedFlowNetwork(tuple(nodes), tuple(arcs), tuple(M1.S), M1.rank)


def common_base_decompose(net: GluedFlowNetwork, w: Sequence[int], k_budget: int, *, stats: dict | None = None) -> Decomposition:
    """Decompose ``w`` into ``k_budget`` common bases (0/1 vectors indexed like ``S``)."""
    Q = net.flow_polytope()
    return project_decompose(tu_family(Q), len(net.elements), w, k_budget, stats=stats)


def common_bases(M1: GammoidPresentation, M2: GammoidPresentation, phi: Mapping | None = None) -> list[tuple[int, ...]]:
    """Incidence vectors (indexed like ``M1.S``) of sets that are bases of both, from the rank tables."""
    phi = phi or {s: s for s in M1.S}
    out = []
    for m in range(1 << len(M1.S)):
        B = [M1.S[j] for j in _members(m)]
        if M1.is_base(B) and M2.is_base([next(t for t in M2.S if str(t) == str(phi[s])) for s in B]):
            out.append(tuple((m >> j) & 1 for j in range(len(M1.S))))
    return out


def flow_supports(net: GluedFlowNetwork, max_arcs: int = 22) -> set[tuple[int, ...]]:
    """Element-arc patterns of all 0/1 flows of value ``k``, by exhaustive enumeration."""
    m = len(net.arcs) - 1
    if m > max_arcs:
        raise ResourceCapExceeded(f"{m} free arcs exceed the enumeration cap {max_arcs}")
    X = np.array(net.incidence_matrix(), dtype=np.int64)
    out = set()
    chunk = 1 << min(m, 16)
    for start in range(0, 1 << m, chunk):
        codes = np.arange(start, min(start + chunk, 1 << m), dtype=np.int64)
        F = (codes[:, None] >> np.arange(m)) & 1
        ok = ~((F @ X[:, :m].T + net.k * X[:, m]).any(axis=1))
        out.update(map(tuple, F[ok][:, : len(net.elements)].tolist()))
    return out
