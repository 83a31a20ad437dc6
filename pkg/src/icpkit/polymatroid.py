"""Submodular functions, matroid rank tables and their polyhedra.

A set function on ``E = {0, ..., n-1}`` is stored as a table of ``2**n``
integers indexed by bitmask.  For submodular ``f`` the extended polymatroid
``EP_f = {x : x(U) <= f(U)}``, the polymatroid ``P_f = EP_f ∩ {x >= 0}`` and
the base polytope ``B_f = {x in EP_f : x(E) = f(E)}`` all have the property
that ``rP ∩ (w - (k-r)P)`` is box-integer, because ``x(U) <= r f(U)`` and
``x(U) >= w(U) - (k-r) f(U)`` pair a submodular upper bound with a
supermodular lower bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .caps import cap
from .core import Decomposition, PFamily, icp_decompose
from .errors import InvalidInstance, NotMember
from .polyhedron import HPolyhedron, box, intersect

KINDS = ("extended", "polymatroid", "base")


def _popcount(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        out += (masks >> j) & 1
    return out


@dataclass(frozen=True)
class SubmodularFn:
    """Integer set function ``f`` with ``f(∅) = 0``, validated submodular on construction."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= cap("ground_size"):
            raise InvalidInstance(f"ground size {self.n} outside 0..{cap('ground_size')}")
        if len(self.values) != 1 << self.n:
            raise InvalidInstance(f"expected {1 << self.n} values, got {len(self.values)}")
        if self.values[0] < 0:
            raise InvalidInstance("f(∅) < 0 makes every polyhedron of f empty")
        if self.values[0] > 0:
            # x(∅) = 0 <= f(∅) always holds, so lowering f(∅) changes no polyhedron
            object.__setattr__(self, "values", (0,) + tuple(self.values[1:]))
        bad = submodularity_violation(self.values, self.n)
        if bad is not None:
            A, B = bad
            raise InvalidInstance(f"not submodular: f({_members(A)}) + f({_members(B)}) < f(A∪B) + f(A∩B)")

    @classmethod
    def from_function(cls, n: int, fn) -> "SubmodularFn":
        return cls(n, tuple(int(fn(frozenset(_members(S)))) for S in range(1 << n)))

    def __call__(self, subset) -> int:
        return self.values[_mask(subset)]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def is_matroid_rank(self) -> bool:
        v = np.array(self.values, dtype=np.int64)
        if (v < 0).any() or (v > _popcount(self.n)).any():
            return False
        masks = np.arange(1 << self.n)
        return all((v[masks | (1 << j)] >= v).all() for j in range(self.n))


def _mask(subset) -> int:
    if isinstance(subset, (int, np.integer)):
        return int(subset)
    m = 0
    for e in subset:
        m |= 1 << int(e)
    return m


def _members(mask: int) -> list[int]:
    return [j for j in range(mask.bit_length()) if mask >> j & 1]


def submodularity_violation(values: Sequence[int], n: int) -> tuple[int, int] | None:
    """Return ``(A, B)`` bitmasks violating submodularity, or ``None``.

    Uses the local form ``f(S+i) + f(S+j) >= f(S+i+j) + f(S)``, which is
    equivalent to the full condition.
    """
    v = np.asarray(values, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        S = masks[((masks >> i) & 1 == 0) & ((masks >> j) & 1 == 0)]
        Si, Sj = S | (1 << i), S | (1 << j)
        gap = v[Si] + v[Sj] - v[Si | Sj] - v[S]
        bad = np.nonzero(gap < 0)[0]
        if len(bad):
            return int(Si[bad[0]]), int(Sj[bad[0]])
    return None


# --------------------------------------------------------------------------
#  Polyhedra
# --------------------------------------------------------------------------


def _subset_rows(n: int) -> list[tuple[int, ...]]:
    return [tuple((U >> j) & 1 for j in range(n)) for U in range(1, 1 << n)]


class PolymatroidFamily(PFamily):
    """PFamily for ``EP_f``, ``P_f`` or ``B_f`` with the closed-form intersection builder."""

    def __init__(self, f: SubmodularFn, kind: str):
        if kind not in KINDS:
            raise InvalidInstance(f"unknown polymatroid kind {kind!r}")
        self.f = f
        self.kind = kind
        self._rows = _subset_rows(f.n)
        super().__init__(self._build(), name=f"{kind}(n={f.n})")

    def _bounds(self, scale_: int):
        f, n = self.f, self.f.n
        if self.kind == "polymatroid":
            return [0] * n, [None] * n
        if self.kind == "base":
            full = f.full
            lo = [scale_ * (f.values[full] - f.values[full & ~(1 << e)]) for e in range(n)]
            hi = [scale_ * f.values[1 << e] for e in range(n)]
            return lo, hi
        return [None] * n, [None] * n

    def _eq(self) -> list[int]:
        return [len(self._rows) - 1] if self.kind == "base" and self.f.n else []

    def _build(self) -> HPolyhedron:
        lo, hi = self._bounds(1)
        return HPolyhedron(self._rows, self.f.values[1:], n=self.f.n, eq_rows=self._eq(), lower=lo, upper=hi)

    def intersection(self, r: int, k: int, w: Sequence[int]) -> HPolyhedron:
        """``{x(U) <= r f(U), x(U) >= w(U) - (k-r) f(U)}`` plus the kind's bounds / face rows."""
        if not 0 <= r <= k:
            raise ValueError("need 0 <= r <= k")
        n, vals, s = self.f.n, self.f.values, k - r
        w = [int(v) for v in w]
        wU = [sum(w[j] for j in range(n) if U >> j & 1) for U in range(1 << n)]
        rows = self._rows + [tuple(-a for a in row) for row in self._rows]
        rhs = [r * vals[U] for U in range(1, 1 << n)] + [s * vals[U] - wU[U] for U in range(1, 1 << n)]
        eq = self._eq() + [e + len(self._rows) for e in self._eq()]
        lo1, hi1 = self._bounds(r)
        lo2, hi2 = self._bounds(s)
        first = box(lo1, hi1) if r else box([0] * n, [0] * n)
        second = (
            box([None if u is None else wj - u for wj, u in zip(w, hi2)], [None if l is None else wj - l for wj, l in zip(w, lo2)])
            if s
            else box(w, w)
        )
        return intersect(HPolyhedron(rows, rhs, n=n, eq_rows=eq), intersect(first, second))


def polymatroid_family(f: SubmodularFn, kind: str = "base") -> PolymatroidFamily:
    return PolymatroidFamily(f, kind)


# --------------------------------------------------------------------------
#  Matroids
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MatroidSpec:
    """A matroid given by one of the supported constructors.

    ``tag`` is one of ``uniform``, ``partition``, ``graphic``,
    ``explicit_bases`` or ``gammoid``; ``params`` holds the constructor's
    arguments in canonical (hashable) form.
    """

    tag: str
    params: tuple
    n: int

    @classmethod
    def uniform(cls, n: int, r: int) -> "MatroidSpec":
        if not 0 <= r <= n:
            raise InvalidInstance("uniform matroid needs 0 <= r <= n")
        return cls("uniform", (n, r), n)

    @classmethod
    def partition(cls, blocks: Sequence[Sequence[int]], capacities: Sequence[int]) -> "MatroidSpec":
        blocks = tuple(tuple(sorted(int(e) for e in b)) for b in blocks)
        caps_ = tuple(int(c) for c in capacities)
        elems = sorted(e for b in blocks for e in b)
        if elems != list(range(len(elems))):
            raise InvalidInstance("partition blocks must partition 0..n-1")
        if len(blocks) != len(caps_) or any(c < 0 for c in caps_):
            raise InvalidInstance("one nonnegative capacity per block required")
        return cls("partition", (blocks, caps_), len(elems))

    @classmethod
    def graphic(cls, edges: Sequence[Sequence]) -> "MatroidSpec":
        edges = tuple((u, v) for u, v in edges)
        return cls("graphic", (edges,), len(edges))

    @classmethod
    def explicit_bases(cls, n: int, bases: Sequence[Sequence[int]]) -> "MatroidSpec":
        bases = tuple(sorted({tuple(sorted(int(e) for e in b)) for b in bases}))
        if not bases:
            raise InvalidInstance("a matroid has at least one base")
        if any(e < 0 or e >= n for b in bases for e in b):
            raise InvalidInstance("base element out of range")
        return cls("explicit_bases", (n, bases), n)

    @classmethod
    def gammoid(cls, vertices, arcs, U, S) -> "MatroidSpec":
        vertices = tuple(vertices)
        vs = set(vertices)
        arcs = tuple((a, b) for a, b in arcs)
        if any(a not in vs or b not in vs for a, b in arcs) or not set(U) <= vs or not set(S) <= vs:
            raise InvalidInstance("gammoid arcs, U and S must use listed vertices")
        if len(set(S)) != len(S):
            raise InvalidInstance("S has repeated vertices")
        return cls("gammoid", (vertices, arcs, tuple(U), tuple(S)), len(S))


def _graphic_rank(edges, mask: int) -> int:
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    r = 0
    for j, (u, v) in enumerate(edges):
        if mask >> j & 1:
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
    return r


def linkage_rank(vertices, arcs, U, targets) -> int:
    """Maximum number of vertex-disjoint directed paths from ``U`` to ``targets``."""
    G = nx.DiGraph()
    for v in vertices:
        G.add_edge(("in", v), ("out", v), capacity=1)
    for a, b in arcs:
        G.add_edge(("out", a), ("in", b), capacity=1)
    for u in U:
        G.add_edge("SRC", ("in", u), capacity=1)
    for t in targets:
        G.add_edge(("out", t), "SNK", capacity=1)
    if "SRC" not in G or "SNK" not in G:
        return 0
    return int(nx.maximum_flow_value(G, "SRC", "SNK"))


def rank_from_constructor(spec: MatroidSpec) -> SubmodularFn:
    """Materialize the rank table of ``spec`` and validate it as a matroid rank function."""
    n = spec.n
    if n > cap("ground_size"):
        raise InvalidInstance(f"ground size {n} exceeds cap {cap('ground_size')}")
    pc = _popcount(n)
    if spec.tag == "uniform":
        values = np.minimum(pc, spec.params[1])
    elif spec.tag == "partition":
        blocks, caps_ = spec.params
        masks = np.arange(1 << n, dtype=np.int64)
        values = np.zeros(1 << n, dtype=np.int64)
        for blk, c in zip(blocks, caps_):
            bm = sum(1 << e for e in blk)
            values += np.minimum(_popcount_arr(masks & bm), c)
    elif spec.tag == "graphic":
        values = [_graphic_rank(spec.params[0], S) for S in range(1 << n)]
    elif spec.tag == "explicit_bases":
        bases = [sum(1 << e for e in b) for b in spec.params[1]]
        masks = np.arange(1 << n, dtype=np.int64)
        values = np.max(np.stack([_popcount_arr(masks & b) for b in bases]), axis=0)
    elif spec.tag == "gammoid":
        vertices, arcs, U, S = spec.params
        values = [linkage_rank(vertices, arcs, U, [S[j] for j in _members(m)]) for m in range(1 << n)]
    else:
        raise InvalidInstance(f"unknown matroid constructor {spec.tag!r}")
    f = SubmodularFn(n, tuple(int(v) for v in values))
    if not f.is_matroid_rank():
        raise InvalidInstance(f"{spec.tag} constructor does not define a matroid rank function")
    if spec.tag == "explicit_bases":
        r = f.values[f.full]
        got = {tuple(_members(m)) for m in range(1 << n) if pc[m] == r and f.values[m] == r}
        if got != set(spec.params[1]):
            raise InvalidInstance("explicit base list is not the base family of a matroid")
    return f


def _popcount_arr(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    x = a.copy()
    while x.any():
        out += x & 1
        x >>= 1
    return out


def bases(f: SubmodularFn) -> list[tuple[int, ...]]:
    """0/1 incidence vectors of the bases of the matroid with rank table ``f``."""
    r = f.values[f.full]
    pc = _popcount(f.n)
    return [
        tuple((m >> j) & 1 for j in range(f.n))
        for m in range(1 << f.n)
        if pc[m] == r and f.values[m] == r
    ]


def is_base(f: SubmodularFn, x: Sequence[int]) -> bool:
    if any(v not in (0, 1) for v in x):
        return False
    m = _mask(j for j, v in enumerate(x) if v)
    return f.values[m] == bin(m).count("1") == f.values[f.full]


def matroid_base_decompose(spec, w: Sequence[int], k: int, *, stats: dict | None = None) -> Decomposition:
    """Write ``w`` as a sum of ``k`` bases using affinely independent bases."""
    f = spec if isinstance(spec, SubmodularFn) else rank_from_constructor(spec)
    w = tuple(int(v) for v in w)
    if len(w) != f.n:
        raise ValueError("target has the wrong dimension")
    if sum(w) != k * f.values[f.full]:
        raise NotMember(f"w(E) = {sum(w)} differs from k*rank = {k * f.values[f.full]}")
    return icp_decompose(polymatroid_family(f, "base"), w, k, stats=stats)
