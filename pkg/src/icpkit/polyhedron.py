"""H-representation polyhedra and the face / box / scaling calculus.

An :class:`HPolyhedron` is ``{x : A x <= b}`` where the rows listed in
``eq_rows`` hold with equality, intersected with per-coordinate bounds
``lower <= x <= upper`` (``None`` means unbounded on that side).  All
coefficients are integers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyPolyhedron, NotBoxIntegral, NotMember, ResourceCapExceeded
from .linalg import INFEASIBLE, OPTIMAL, UNBOUNDED, as_rat, lex_solve, lp_solve, nullspace, rank

Bound = int | None


def _int(v) -> int:
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise ValueError(f"expected an integer, got {v}")
        return int(v.numerator)
    return int(v)


class HPolyhedron:
    """Integer inequality/equality system with coordinate bounds."""

    __slots__ = ("A", "b", "eq_rows", "lower", "upper")

    def __init__(
        self,
        A: Iterable[Sequence[int]],
        b: Iterable[int],
        *,
        n: int | None = None,
        eq_rows: Iterable[int] = (),
        lower: Sequence[Bound] | None = None,
        upper: Sequence[Bound] | None = None,
    ):
        rows = [tuple(_int(v) for v in row) for row in A]
        if n is None:
            if rows:
                n = len(rows[0])
            elif lower is not None:
                n = len(lower)
            elif upper is not None:
                n = len(upper)
            else:
                raise ValueError("cannot infer dimension of an HPolyhedron without rows")
        if any(len(r) != n for r in rows):
            raise ValueError("constraint matrix is not rectangular")
        self.A = tuple(rows)
        self.b = tuple(_int(v) for v in b)
        if len(self.b) != len(self.A):
            raise ValueError("A and b have different numbers of rows")
        self.eq_rows = frozenset(int(i) for i in eq_rows)
        if any(i < 0 or i >= len(self.A) for i in self.eq_rows):
            raise ValueError("eq_rows index out of range")
        lo = tuple(None if v is None else _int(v) for v in (lower if lower is not None else [None] * n))
        hi = tuple(None if v is None else _int(v) for v in (upper if upper is not None else [None] * n))
        if len(lo) != n or len(hi) != n:
            raise ValueError("bounds have the wrong length")
        for a, c in zip(lo, hi):
            if a is not None and c is not None and a > c:
                raise ValueError("lower bound exceeds upper bound")
        self.lower = lo
        self.upper = hi

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def m(self) -> int:
        return len(self.A)

    def __repr__(self) -> str:
        return f"HPolyhedron(n={self.n}, m={self.m}, eq={sorted(self.eq_rows)})"

    def key(self) -> tuple:
        return (self.A, self.b, tuple(sorted(self.eq_rows)), self.lower, self.upper)

    def __eq__(self, other) -> bool:
        return isinstance(other, HPolyhedron) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def constraint_system(self):
        """Expand rows and bounds into ``(G, h, is_eq, labels)``.

        Labels are ``("row", i)``, ``("lower", j)``, ``("upper", j)`` or
        ``("fixed", j)`` for coordinates with ``lower == upper``.
        """
        G = [list(r) for r in self.A]
        h = list(self.b)
        is_eq = [i in self.eq_rows for i in range(self.m)]
        labels: list[tuple] = [("row", i) for i in range(self.m)]
        n = self.n
        for j in range(n):
            lo, hi = self.lower[j], self.upper[j]
            e = [0] * n
            if lo is not None and lo == hi:
                e[j] = 1
                G.append(e)
                h.append(lo)
                is_eq.append(True)
                labels.append(("fixed", j))
                continue
            if hi is not None:
                e[j] = 1
                G.append(e)
                h.append(hi)
                is_eq.append(False)
                labels.append(("upper", j))
            if lo is not None:
                e = [0] * n
                e[j] = -1
                G.append(e)
                h.append(-lo)
                is_eq.append(False)
                labels.append(("lower", j))
        return G, h, is_eq, tuple(labels)

    def slack(self, x: Sequence) -> list[Fraction]:
        x = [as_rat(v) for v in x]
        return [Fraction(bi) - sum(a * xv for a, xv in zip(row, x) if a) for row, bi in zip(self.A, self.b)]

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.n:
            raise ValueError("point has the wrong dimension")
        x = [as_rat(v) for v in x]
        for j, v in enumerate(x):
            if self.lower[j] is not None and v < self.lower[j]:
                return False
            if self.upper[j] is not None and v > self.upper[j]:
                return False
        for i, s in enumerate(self.slack(x)):
            if s < 0 or (s != 0 and i in self.eq_rows):
                return False
        return True

    def is_bounded_box(self) -> bool:
        return all(v is not None for v in self.lower) and all(v is not None for v in self.upper)

    def tighten(self, rows: Iterable[int] = (), lower: Iterable[int] = (), upper: Iterable[int] = ()) -> "HPolyhedron":
        """Turn inequality rows / bounds into equalities (the face they define)."""
        lo, hi = list(self.lower), list(self.upper)
        for j in lower:
            hi[j] = lo[j]
        for j in upper:
            lo[j] = hi[j]
        return HPolyhedron(self.A, self.b, n=self.n, eq_rows=self.eq_rows | frozenset(rows), lower=lo, upper=hi)

    def with_bounds(self, lower: Sequence[Bound], upper: Sequence[Bound]) -> "HPolyhedron":
        return intersect(self, box(lower, upper))

    def fix(self, coord: int, value: int) -> "HPolyhedron":
        lo = [None] * self.n
        hi = [None] * self.n
        lo[coord] = hi[coord] = value
        return intersect(self, box(lo, hi))


def box(lower: Sequence[Bound], upper: Sequence[Bound]) -> HPolyhedron:
    """The box ``lower <= x <= upper`` (``None`` entries unbounded)."""
    return HPolyhedron([], [], n=len(lower), lower=lower, upper=upper)


def point(x: Sequence[int]) -> HPolyhedron:
    return box(list(x), list(x))


def full_space(n: int) -> HPolyhedron:
    return HPolyhedron([], [], n=n)


def scale(P: HPolyhedron, r: int) -> HPolyhedron:
    """``{r x : x in P}`` for ``r >= 0``; ``r == 0`` gives ``{0}`` (P assumed nonempty)."""
    if r < 0:
        raise ValueError("scale factor must be nonnegative")
    if r == 0:
        zeros = [0] * P.n
        return HPolyhedron(P.A, [0] * P.m, n=P.n, eq_rows=P.eq_rows, lower=zeros, upper=zeros)
    return HPolyhedron(
        P.A,
        [r * v for v in P.b],
        n=P.n,
        eq_rows=P.eq_rows,
        lower=[None if v is None else r * v for v in P.lower],
        upper=[None if v is None else r * v for v in P.upper],
    )


def reflect_shift(P: HPolyhedron, w: Sequence[int]) -> HPolyhedron:
    """``{w - x : x in P} = {y : -A y <= b - A w}``."""
    w = [_int(v) for v in w]
    if len(w) != P.n:
        raise ValueError("shift vector has the wrong dimension")
    A = [tuple(-a for a in row) for row in P.A]
    b = [bi - sum(a * wv for a, wv in zip(row, w)) for row, bi in zip(P.A, P.b)]
    lo = [None if u is None else wj - u for wj, u in zip(w, P.upper)]
    hi = [None if l is None else wj - l for wj, l in zip(w, P.lower)]
    return HPolyhedron(A, b, n=P.n, eq_rows=P.eq_rows, lower=lo, upper=hi)


def intersect(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """Stacked system; bounds merged.  Crossing bounds yield the row ``0 <= -1``."""
    if P.n != Q.n:
        raise ValueError("polyhedra live in different dimensions")
    lo, hi = [], []
    empty = False
    for a, c, a2, c2 in zip(P.lower, P.upper, Q.lower, Q.upper):
        l = a if a2 is None else (a2 if a is None else max(a, a2))
        u = c if c2 is None else (c2 if c is None else min(c, c2))
        if l is not None and u is not None and l > u:
            empty = True
            u = l
        lo.append(l)
        hi.append(u)
    A = list(P.A) + list(Q.A)
    b = list(P.b) + list(Q.b)
    eq = set(P.eq_rows) | {i + P.m for i in Q.eq_rows}
    if empty:
        A.append((0,) * P.n)
        b.append(-1)
    return HPolyhedron(A, b, n=P.n, eq_rows=eq, lower=lo, upper=hi)


def condition_intersection(P: HPolyhedron, r: int, k: int, w: Sequence[int]) -> HPolyhedron:
    """``rP ∩ (w - (k - r)P)``, the polyhedron whose box-integrality defines the class."""
    if not 0 <= r <= k:
        raise ValueError("need 0 <= r <= k")
    return intersect(scale(P, r), reflect_shift(scale(P, k - r), w))


def rounding_box(w: Sequence[int], k: int) -> HPolyhedron:
    """``floor(w/k) <= x <= ceil(w/k)``."""
    lo = [wi // k for wi in w]
    hi = [-((-wi) // k) for wi in w]
    return box(lo, hi)


# --------------------------------------------------------------------------
#  Vertices and faces
# --------------------------------------------------------------------------


def _first_fractional(x) -> int | None:
    return next((j for j, v in enumerate(x) if v.denominator != 1), None)


def lex_extreme(P: HPolyhedron, sense: str = "min") -> tuple:
    """The lexicographically smallest (or largest) point of ``P``.

    Equals the result of fixing coordinates one at a time to their optimum in
    ascending index order.
    """
    units = [[int(i == j) for i in range(P.n)] for j in range(P.n)]
    res = lex_solve(P, units, sense)
    if res.status == INFEASIBLE:
        raise EmptyPolyhedron("polyhedron is empty")
    if res.status == UNBOUNDED:
        raise ValueError("lexicographic optimum is unbounded; intersect with a box first")
    return res.witness


def integral_vertex(P: HPolyhedron, *, probe_max: bool = True) -> tuple[int, ...]:
    """An integral vertex of a nonempty, bounded, box-integer polyhedron.

    Coordinates are fixed in ascending order at their minimum (done as one
    lexicographic LP).  Each fixing intersects with a box, so for box-integer
    input every optimum is an integer; a fractional optimum proves the input is
    not box-integer.  With ``probe_max`` the lexicographic maximum is checked
    too, which catches polyhedra whose minimum side happens to be integral.
    """
    x = lex_extreme(P, "min")
    j = _first_fractional(x)
    if j is not None:
        raise NotBoxIntegral(j, x[j])
    if probe_max and P.n:
        y = lex_extreme(P, "max")
        j = _first_fractional(y)
        if j is not None:
            raise NotBoxIntegral(j, y[j])
    return tuple(int(v) for v in x)


@dataclass(frozen=True)
class Face:
    """Face of ``parent`` cut out by forcing extra rows / bounds to equality."""

    parent: HPolyhedron
    tight_rows: frozenset
    tight_bounds: frozenset  # of (coordinate, "lower" | "upper")

    @property
    def polyhedron(self) -> HPolyhedron:
        return self.parent.tighten(
            self.tight_rows,
            lower=[j for j, side in self.tight_bounds if side == "lower"],
            upper=[j for j, side in self.tight_bounds if side == "upper"],
        )


def tight_set(P: HPolyhedron, y: Sequence) -> tuple[frozenset, frozenset]:
    y = [as_rat(v) for v in y]
    rows = frozenset(i for i, s in enumerate(P.slack(y)) if s == 0 and i not in P.eq_rows)
    bounds = set()
    for j, v in enumerate(y):
        if P.lower[j] is not None and P.lower[j] == P.upper[j]:
            continue
        if P.lower[j] is not None and v == P.lower[j]:
            bounds.add((j, "lower"))
        if P.upper[j] is not None and v == P.upper[j]:
            bounds.add((j, "upper"))
    return rows, frozenset(bounds)


def minimal_face_containing(P: HPolyhedron, y: Sequence) -> Face:
    """The face whose tight set is exactly the constraints active at ``y``."""
    if not P.contains(y):
        raise NotMember("point is not in the polyhedron")
    rows, bounds = tight_set(P, y)
    return Face(P, rows, bounds)


def implicit_equalities(P: HPolyhedron) -> list[int] | None:
    """Indices (into ``constraint_system()``) of rows tight on all of ``P``.

    Returns ``None`` for an empty polyhedron.  Repeatedly maximizes the total
    slack of the undecided rows; any row slack at the optimum is not implicit,
    and a zero optimum means every remaining row is.
    """
    G, h, is_eq, _ = P.constraint_system()
    system = (G, h, is_eq)
    cand = [i for i in range(len(G)) if not is_eq[i]]
    implicit: list[int] = []
    n = P.n
    while cand:
        obj = [-sum(G[i][j] for i in cand) for j in range(n)]
        res = lp_solve(system, obj, "max")
        if res.status == INFEASIBLE:
            return None
        if res.status == UNBOUNDED:
            for i in cand:
                r = lp_solve(system, [-v for v in G[i]], "max")
                if r.status == OPTIMAL and r.optimum + h[i] == 0:
                    implicit.append(i)
            break
        x = res.witness
        slack = {i: h[i] - sum(a * v for a, v in zip(G[i], x)) for i in cand}
        loose = [i for i in cand if slack[i] > 0]
        if not loose:
            implicit.extend(cand)
            break
        cand = [i for i in cand if slack[i] == 0]
    if not cand and not implicit and lp_solve(system, [0] * n, "max").status == INFEASIBLE:
        return None
    return sorted(implicit)


def equality_system(P: HPolyhedron) -> list[list[int]] | None:
    """Rows spanning the equalities of the affine hull (``None`` if empty)."""
    imp = implicit_equalities(P)
    if imp is None:
        return None
    G, _, is_eq, _ = P.constraint_system()
    return [G[i] for i in range(len(G)) if is_eq[i]] + [G[i] for i in imp]


def dimension(P: HPolyhedron) -> int:
    """Affine dimension; ``-1`` for the empty polyhedron."""
    eqs = equality_system(P)
    if eqs is None:
        return -1
    return P.n - (rank(eqs) if eqs else 0)


def direction_space(P: HPolyhedron) -> list[tuple]:
    """Basis of the linear space parallel to the affine hull of a nonempty ``P``."""
    eqs = equality_system(P)
    if eqs is None:
        raise EmptyPolyhedron("polyhedron is empty")
    return nullspace(eqs, P.n)


def coordinate_range(P: HPolyhedron) -> tuple[list[Fraction], list[Fraction]]:
    """Exact min and max of every coordinate over a nonempty bounded ``P``."""
    lo, hi = [], []
    for j in range(P.n):
        e = [int(i == j) for i in range(P.n)]
        mn = lp_solve(P, e, "min")
        mx = lp_solve(P, e, "max")
        if mn.status == INFEASIBLE:
            raise EmptyPolyhedron("polyhedron is empty")
        if mn.status == UNBOUNDED or mx.status == UNBOUNDED:
            raise ValueError(f"coordinate {j} is unbounded")
        lo.append(mn.optimum)
        hi.append(mx.optimum)
    return lo, hi


def integer_bounding_box(P: HPolyhedron) -> tuple[list[int], list[int]]:
    lo, hi = coordinate_range(P)
    return [math.floor(v) for v in lo], [math.ceil(v) for v in hi]


# --------------------------------------------------------------------------
#  Exhaustive vertex enumeration (small instances only)
# --------------------------------------------------------------------------

VERTEX_COMBO_CAP = 3_000_000


def _batch_gauss_jordan(Ms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fraction-free Gauss-Jordan on a batch of ``(n, n+1)`` integer systems.

    Returns ``(D, num)`` with ``x = num / D``; ``D == 0`` marks singular systems.
    """
    C, n, _ = Ms.shape
    A = Ms.copy()
    idx = np.arange(C)
    one = A.dtype.type(1) if A.dtype != object else 1
    prev = np.full(C, one, dtype=A.dtype)
    singular = np.zeros(C, dtype=bool)
    for k in range(n):
        nz = A[:, k:, k] != 0
        has = nz.any(axis=1)
        singular |= ~has
        p = k + np.argmax(nz, axis=1)
        rowk = A[idx, k].copy()
        A[idx, k] = A[idx, p]
        A[idx, p] = rowk
        piv = A[:, k, k].copy()
        piv[singular] = one
        colk = A[:, :, k].copy()
        colk[singular] = 0
        new = (piv[:, None, None] * A - colk[:, :, None] * A[:, k, None, :]) // prev[:, None, None]
        new[:, k] = A[:, k]
        A = new
        prev = piv
    D = prev.copy()
    D[singular] = 0
    return D, A[:, :, n]


def _reduced_system(P: HPolyhedron):
    """Expanded system with pinned coordinates substituted out."""
    G, h, is_eq, _ = P.constraint_system()
    fixed = {j: P.lower[j] for j in range(P.n) if P.lower[j] is not None and P.lower[j] == P.upper[j]}
    free = [j for j in range(P.n) if j not in fixed]
    Gr, hr, er = [], [], []
    for g, hv, e in zip(G, h, is_eq):
        if all(g[j] == 0 for j in free):
            rest = hv - sum(g[j] * v for j, v in fixed.items())
            if (e and rest != 0) or rest < 0:
                return None
            continue
        Gr.append([g[j] for j in free])
        hr.append(hv - sum(g[j] * v for j, v in fixed.items()))
        er.append(e)
    return Gr, hr, er, free, fixed


def enumerate_vertices(P: HPolyhedron, cap: int = VERTEX_COMBO_CAP) -> list[tuple[Fraction, ...]]:
    """All vertices of ``P`` by exhaustive basis enumeration (exact)."""
    red = _reduced_system(P)
    if red is None:
        return []
    G, h, is_eq, free, fixed = red
    nf = len(free)
    if nf == 0:
        return [tuple(Fraction(fixed[j]) for j in range(P.n))]
    p = len(G)
    if p < nf or (G and rank(G) < nf):
        return []
    total = math.comb(p, nf)
    if total > cap:
        raise ResourceCapExceeded(f"{total} bases exceed the vertex enumeration cap {cap}")
    Gi = np.array(G, dtype=object)
    hi_ = np.array(h, dtype=object)
    aug_norm = math.prod(max(1.0, math.sqrt(sum(v * v for v in g) + hv * hv)) for g, hv in zip(G, h))
    dtype = np.int64 if aug_norm ** 2 * 4 < 2.0**62 else object
    G64 = Gi.astype(dtype)
    h64 = hi_.astype(dtype)
    eq_mask = np.array(is_eq, dtype=bool)
    found: set[tuple[Fraction, ...]] = set()
    combos_iter = itertools.combinations(range(p), nf)
    chunk = 20000
    while True:
        combos = np.array(list(itertools.islice(combos_iter, chunk)), dtype=np.int64)
        if combos.size == 0:
            break
        combos = combos.reshape(-1, nf)
        Ms = np.concatenate([G64[combos], h64[combos][:, :, None]], axis=2)
        D, num = _batch_gauss_jordan(Ms)
        ok = D != 0
        D, num = D[ok], num[ok]
        neg = D < 0
        D = np.where(neg, -D, D)
        num = np.where(neg[:, None], -num, num)
        lhs = num @ G64.T
        rhs = D[:, None] * h64[None, :]
        feas = np.all(lhs <= rhs, axis=1) & np.all(lhs[:, eq_mask] == rhs[:, eq_mask], axis=1)
        for dv, nv in zip(D[feas], num[feas]):
            x = [Fraction(0)] * P.n
            for j, v in fixed.items():
                x[j] = Fraction(v)
            for j, v in zip(free, nv):
                x[j] = Fraction(int(v), int(dv))
            found.add(tuple(x))
    return sorted(found)


@dataclass(frozen=True)
class BoxIntegralityReport:
    box_integral: bool
    witness_lower: tuple | None = None
    witness_upper: tuple | None = None
    witness_vertex: tuple | None = None
    boxes_checked: int = 0


def check_box_integral(
    P: HPolyhedron,
    search_box: tuple[Sequence[int], Sequence[int]] | None = None,
    *,
    cap: int = 200_000,
    vertex_cap: int = VERTEX_COMBO_CAP,
) -> BoxIntegralityReport:
    """Exhaustively test box-integrality inside ``search_box``.

    A vertex of ``P ∩ [c, d]`` is also a vertex of the slice of ``P`` obtained
    by pinning the coordinates where it touches the box, so it suffices to scan
    the "flat" boxes: every coordinate subset ``J`` pinned to every integer
    value in range, the other coordinates left at the search box.
    """
    if search_box is None:
        lo, hi = integer_bounding_box(P)
    else:
        lo, hi = [int(v) for v in search_box[0]], [int(v) for v in search_box[1]]
    n = P.n
    base = P.with_bounds(lo, hi)
    total = sum(
        math.prod(hi[j] - lo[j] + 1 for j in J)
        for size in range(n + 1)
        for J in itertools.combinations(range(n), size)
    )
    if total > cap:
        raise ResourceCapExceeded(f"{total} boxes exceed the box-integrality cap {cap}")
    checked = 0
    for size in range(n + 1):
        for J in itertools.combinations(range(n), size):
            for vals in itertools.product(*[range(lo[j], hi[j] + 1) for j in J]):
                c, d = list(lo), list(hi)
                for j, v in zip(J, vals):
                    c[j] = d[j] = v
                sl = base.with_bounds(c, d)
                checked += 1
                for v in enumerate_vertices(sl, vertex_cap):
                    if _first_fractional(v) is not None:
                        return BoxIntegralityReport(False, tuple(c), tuple(d), v, checked)
    return BoxIntegralityReport(True, boxes_checked=checked)
