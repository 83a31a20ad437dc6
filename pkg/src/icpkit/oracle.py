"""Brute-force ground truth on small instances.

Nothing here uses the decomposition engine.  Integer points come from lattice
scans (exact constraint checks or exact LP hull membership), decompositions
from exhaustive support enumeration, and the IDP / ICP / Carathéodory-rank
checks from sumsets of the integer points.
"""

from __future__ import annotations

import itertools
import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .caps import cap
from .core import Decomposition
from .errors import InvalidInstance, ResourceCapExceeded
from .linalg import OPTIMAL, affinely_independent, det, lp_solve, nullspace, rref
from .polyhedron import HPolyhedron, _batch_gauss_jordan, integer_bounding_box

IntVec = tuple[int, ...]


@dataclass(frozen=True)
class VertexInstance:
    """Polytope given as the convex hull of integer vectors."""

    vertices: tuple[IntVec, ...]

    @classmethod
    def create(cls, vertices: Iterable[Sequence[int]]) -> "VertexInstance":
        vs = tuple(dict.fromkeys(tuple(int(v) for v in p) for p in vertices))
        if not vs:
            raise InvalidInstance("vertex list is empty")
        if len({len(p) for p in vs}) != 1:
            raise InvalidInstance("vertices have different dimensions")
        return cls(vs)

    @property
    def n(self) -> int:
        return len(self.vertices[0])

    def bounding_box(self) -> tuple[list[int], list[int]]:
        V = np.array(self.vertices, dtype=np.int64)
        return V.min(axis=0).tolist(), V.max(axis=0).tolist()

    def contains(self, w: Sequence, k: int = 1) -> bool:
        return hull_contains(self.vertices, w, k)


def hull_contains(vertices: Sequence[Sequence[int]], w: Sequence, k: int = 1) -> bool:
    """Exact test of ``w in k * conv(vertices)`` via the LP ``sum l_i v_i = w, sum l_i = k, l >= 0``."""
    m = len(vertices)
    n = len(w)
    rows = [[int(v[j]) for v in vertices] for j in range(n)] + [[1] * m]
    rhs = [Fraction(x) for x in w] + [Fraction(k)]
    den = math.lcm(*(x.denominator for x in rhs))
    P = HPolyhedron(rows, [int(x * den) for x in rhs], n=m, eq_rows=range(n + 1), lower=[0] * m)
    # scaling the right-hand side by den scales the feasible lambdas, not feasibility
    return lp_solve(P, [0] * m).status == OPTIMAL


def affine_hull_equations(points: Sequence[Sequence[int]]) -> list[tuple[list[int], int]]:
    """Integer equations ``a.x = beta`` cutting out the affine hull of ``points``."""
    n = len(points[0])
    H = [[*map(int, p), -1] for p in points]
    out = []
    for vec in nullspace(H, n + 1):
        den = math.lcm(*(v.denominator for v in vec))
        iv = [int(v * den) for v in vec]
        out.append((iv[:n], iv[n]))
    return out


def _lattice(lo: Sequence[int], hi: Sequence[int], limit: int) -> np.ndarray:
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    if any(s <= 0 for s in sizes):
        return np.zeros((0, len(lo)), dtype=np.int64)
    vol = math.prod(sizes)
    if vol > limit:
        raise ResourceCapExceeded(f"lattice box of {vol} points exceeds cap {limit}")
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)]
    if not axes:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))


def _satisfies(P: HPolyhedron, X: np.ndarray) -> np.ndarray:
    big = max([1] + [abs(v) for row in P.A for v in row]) * max(1, int(np.abs(X).max(initial=0))) * max(1, P.n)
    dt = np.int64 if big < 2**60 else object
    A = np.array(P.A, dtype=dt).reshape(P.m, P.n)
    b = np.array(P.b, dtype=dt)
    lhs = X.astype(dt) @ A.T
    ok = np.ones(len(X), dtype=bool)
    for i in range(P.m):
        ok &= (lhs[:, i] == b[i]) if i in P.eq_rows else (lhs[:, i] <= b[i])
    for j in range(P.n):
        if P.lower[j] is not None:
            ok &= X[:, j] >= P.lower[j]
        if P.upper[j] is not None:
            ok &= X[:, j] <= P.upper[j]
    return ok


def enumerate_integer_points(P, box=None, *, limit: int | None = None) -> list[IntVec]:
    """Sorted integer points of ``P`` (an :class:`HPolyhedron`, :class:`VertexInstance` or point list) in ``box``."""
    limit = cap("lattice_volume") if limit is None else limit
    if not isinstance(P, (HPolyhedron, VertexInstance)):
        P = VertexInstance.create(P)
    if isinstance(P, HPolyhedron):
        if box is None:
            lo, hi = integer_bounding_box(P)
        else:
            lo, hi = list(box[0]), list(box[1])
        X = _lattice(lo, hi, limit)
        X = X[_satisfies(P, X)]
        return [tuple(r) for r in X.tolist()]
    vlo, vhi = P.bounding_box()
    if box is not None:
        vlo = [max(a, int(b)) for a, b in zip(vlo, box[0])]
        vhi = [min(a, int(b)) for a, b in zip(vhi, box[1])]
    X = _lattice(vlo, vhi, limit)
    for a, beta in affine_hull_equations(P.vertices):
        X = X[X @ np.array(a, dtype=np.int64) == beta]
    verts = set(P.vertices)
    return [tuple(x) for x in X.tolist() if tuple(x) in verts or hull_contains(P.vertices, x)]


# --------------------------------------------------------------------------
#  Sumsets and decompositions
# --------------------------------------------------------------------------


class _Codec:
    """Packs integer vectors with coordinates in a known range into int64 keys."""

    def __init__(self, points: np.ndarray, k_max: int):
        self.lo = points.min(axis=0)
        span = points.max(axis=0) - self.lo
        self.radix = int(span.max(initial=0)) * k_max + 1
        if self.radix ** max(1, points.shape[1]) >= 2**62:
            raise ResourceCapExceeded("sumset keys would overflow 64 bits")
        self.weights = self.radix ** np.arange(points.shape[1] - 1, -1, -1, dtype=np.int64)

    def encode(self, sums: np.ndarray, k: int) -> np.ndarray:
        return (sums - k * self.lo) @ self.weights


def sumset(points: Sequence[Sequence[int]], k: int) -> np.ndarray:
    """All sums of ``k`` points (repetition allowed), as sorted unique rows."""
    V = np.array(points, dtype=np.int64)
    S = np.zeros((1, V.shape[1]), dtype=np.int64)
    for _ in range(k):
        S = np.unique((S[:, None, :] + V[None]).reshape(-1, V.shape[1]), axis=0)
        if len(S) > cap("lattice_volume") * 50:
            raise ResourceCapExceeded("sumset too large")
    return S


def _compositions(k: int, t: int) -> np.ndarray:
    """All ways to write ``k`` as an ordered sum of ``t`` positive integers."""
    if t == 0:
        return np.zeros((1 if k == 0 else 0, 0), dtype=np.int64)
    combos = list(itertools.combinations(range(1, k), t - 1))
    cuts = np.array(combos, dtype=np.int64).reshape(len(combos), t - 1)
    full = np.concatenate([np.zeros((len(cuts), 1), dtype=np.int64), cuts, np.full((len(cuts), 1), k)], axis=1)
    return np.diff(full, axis=1)


def _independent_mask(V: np.ndarray, supports: np.ndarray) -> np.ndarray:
    """Exact affine-independence test for a batch of supports (rows of indices into ``V``)."""
    if supports.shape[1] <= 1:
        return np.ones(len(supports), dtype=bool)
    H = np.concatenate([np.ones((len(V), 1), dtype=np.int64), V], axis=1)[supports]  # B x t x (n+1)
    if supports.shape[1] > H.shape[2]:
        return np.zeros(len(supports), dtype=bool)
    gram = H @ H.transpose(0, 2, 1)
    t = gram.shape[1]
    bound = (float(np.abs(gram).max()) * math.sqrt(t)) ** t
    dt = np.int64 if bound * bound * 4 < 2.0**62 else object
    Ms = np.concatenate([gram.astype(dt), np.zeros((len(gram), t, 1), dtype=dt)], axis=2)
    D, _ = _batch_gauss_jordan(Ms)
    return D != 0


def reachable(points: Sequence[Sequence[int]], w: Sequence[int], k: int) -> bool:
    """True iff ``w`` is a sum of ``k`` of the given points (repetition allowed)."""
    return bool(_candidates(points, tuple(int(v) for v in w), k))


def _candidates(points, w: IntVec, k: int) -> list[int]:
    """Indices of points that occur in some ``k``-term decomposition of ``w``."""
    pts = [tuple(int(v) for v in p) for p in points]
    if k == 0:
        return []
    n = len(w)
    lo = [min(p[j] for p in pts) for j in range(n)]
    hi = [max(p[j] for p in pts) for j in range(n)]
    memo: dict = {}
    limit = sys.getrecursionlimit()
    if k + 50 > limit:
        sys.setrecursionlimit(k + 100)

    def ok(res: IntVec, j: int) -> bool:
        if j == 0:
            return not any(res)
        if any(r < j * a or r > j * b for r, a, b in zip(res, lo, hi)):
            return False
        key = (res, j)
        if key in memo:
            return memo[key]
        out = False
        for p in pts:
            if ok(tuple(r - v for r, v in zip(res, p)), j - 1):
                out = True
                break
        memo[key] = out
        return out

    return [i for i in range(len(pts)) if ok(tuple(a - b for a, b in zip(w, pts[i])), k - 1)]


def min_decomposition(
    points: Sequence[Sequence[int]],
    w: Sequence[int],
    k: int,
    require_affine_independence: bool = False,
    max_t: int | None = None,
) -> tuple[int, Decomposition] | None:
    """Fewest distinct points whose positive integer combination with total ``k`` is ``w``.

    Supports are scanned by ascending size and lexicographically within a
    size; for each support every multiplicity vector is tried.  Returns
    ``None`` when no decomposition exists (with the independence restriction
    if requested).
    """
    w = tuple(int(v) for v in w)
    pts = [tuple(int(v) for v in p) for p in points]
    cand = _candidates(pts, w, k)
    if not cand:
        return None
    V = np.array(pts, dtype=np.int64)[cand]
    target = np.array(w, dtype=np.int64)
    n = V.shape[1]
    top = min(k, len(cand))
    if require_affine_independence:
        top = min(top, n + 1)
    if max_t is not None:
        top = min(top, max_t)
    for t in range(1, top + 1):
        comps = _compositions(k, t)
        combos_iter = itertools.combinations(range(len(cand)), t)
        while True:
            rows = list(itertools.islice(combos_iter, 4096))
            if not rows:
                break
            S = np.array(rows, dtype=np.int64).reshape(len(rows), t)
            if require_affine_independence:
                S = S[_independent_mask(V, S)]
                if not len(S):
                    continue
            sums = np.einsum("ct,stn->scn", comps, V[S])
            hit = np.argwhere((sums == target).all(axis=2))
            if len(hit):
                s, c = hit[0]
                dec = Decomposition(tuple(tuple(V[i].tolist()) for i in S[s]), tuple(int(x) for x in comps[c]), k)
                return t, dec
    return None


def is_valid_decomposition(dec: Decomposition, w, k: int, points, require_affine_independence=False) -> bool:
    """Independent re-validation used by tests."""
    pts = {tuple(p) for p in points}
    ok = dec.k == k and tuple(dec.total) == tuple(w) and all(p in pts for p in dec.points)
    if require_affine_independence:
        ok = ok and affinely_independent(dec.points)
    return ok


# --------------------------------------------------------------------------
#  Property checks
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    holds: bool
    k_max: int
    counterexample: dict | None = None
    checked: int = 0


class HullFacets:
    """Exact H-description of ``conv(points)``: affine-hull equations plus facet inequalities.

    Facets are found by brute force: every affinely independent ``d``-subset
    of the points (``d`` the dimension) spans a candidate hyperplane inside
    the affine hull, kept when all points lie on one side.  The hull is
    handled in ``d`` coordinates on which the affine hull projects
    injectively.
    """

    def __init__(self, points: Sequence[Sequence[int]], combo_cap: int = 500_000):
        pts = [tuple(int(v) for v in p) for p in points]
        V = np.array(pts, dtype=np.int64)
        self.n = V.shape[1]
        self.equations = affine_hull_equations(pts)
        E = [a for a, _ in self.equations]
        dirs = nullspace(E, self.n) if E else nullspace([], self.n)
        self.dim = len(dirs)
        self.coords = rref([list(d) for d in dirs])[1] if dirs else []
        d = self.dim
        self.facets: list[tuple[list[int], int]] = []
        if d == 0:
            return
        if math.comb(len(pts), d) > combo_cap:
            raise ResourceCapExceeded("too many point subsets for facet enumeration")
        Vp = V[:, self.coords]
        H = np.concatenate([Vp, -np.ones((len(Vp), 1), dtype=np.int64)], axis=1)  # rows [x_J, -1]
        found = set()
        for S in itertools.combinations(range(len(pts)), d):
            rows = H[list(S)].tolist()
            # generalized cross product: rows . normal == 0 by Laplace expansion
            vec = [(-1) ** c * det([r[:c] + r[c + 1:] for r in rows]) for c in range(d + 1)]
            if not any(vec[:d]):
                continue
            g = math.gcd(*vec)
            a, beta = [v // g for v in vec[:d]], vec[d] // g
            vals = Vp @ np.array(a, dtype=np.int64)
            if (vals <= beta).all():
                found.add((tuple(a), beta))
            elif (vals >= beta).all():
                found.add((tuple(-x for x in a), -beta))
        self.facets = sorted((list(a), b) for a, b in found)

    def contains(self, X: np.ndarray, k: int = 1) -> np.ndarray:
        """Mask of rows of ``X`` lying in ``k * conv(points)``."""
        X = np.asarray(X, dtype=np.int64).reshape(-1, self.n)
        ok = np.ones(len(X), dtype=bool)
        for a, beta in self.equations:
            ok &= X @ np.array(a, dtype=np.int64) == k * beta
        if self.facets:
            A = np.array([a for a, _ in self.facets], dtype=np.int64)
            b = np.array([beta for _, beta in self.facets], dtype=np.int64)
            ok &= (X[:, self.coords] @ A.T <= k * b).all(axis=1)
        return ok


def _kP_lattice_chunks(points, k: int, box, chunk: int = 1 << 18):
    V = np.array(points, dtype=np.int64)
    lo, hi = (k * V.min(axis=0)).tolist(), (k * V.max(axis=0)).tolist()
    if box is not None:
        lo = [max(a, k * int(b)) for a, b in zip(lo, box[0])]
        hi = [min(a, k * int(b)) for a, b in zip(hi, box[1])]
    sizes = [h - l + 1 for l, h in zip(lo, hi)]
    if any(s <= 0 for s in sizes):
        return
    total = math.prod(sizes)
    if total > cap("lattice_volume") * 100:
        raise ResourceCapExceeded(f"lattice box of {total} points exceeds the scan cap")
    lo_a = np.array(lo, dtype=np.int64)
    sz = np.array(sizes, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = np.empty((len(idx), len(sizes)), dtype=np.int64)
        for j in range(len(sizes) - 1, -1, -1):
            X[:, j] = idx % sz[j]
            idx //= sz[j]
        yield X + lo_a


def _idp_gap(points, k: int, box, hull: HullFacets, codec: "_Codec", sums: np.ndarray):
    """First integer point of ``k * conv`` (inside ``box``) that is not a sum of ``k`` points, and the count scanned."""
    keys = codec.encode(sums, k)
    scanned = 0
    for X in _kP_lattice_chunks(points, k, box):
        X = X[hull.contains(X, k)]
        scanned += len(X)
        rest = X[~np.isin(codec.encode(X, k), keys)]
        if len(rest):
            return rest[0].tolist(), scanned
    return None, scanned


def check_idp(points, k_max: int, box=None) -> PropertyReport:
    """Is every integer vector of ``k * conv(points)`` a sum of ``k`` of the points, for ``k <= k_max``?

    ``points`` must be all integer points of the polytope.
    """
    pts = [tuple(int(v) for v in p) for p in points]
    V = np.array(pts, dtype=np.int64)
    codec = _Codec(V, k_max)
    hull = HullFacets(pts)
    checked = 0
    S = np.zeros((1, V.shape[1]), dtype=np.int64)
    for k in range(1, k_max + 1):
        S = np.unique((S[:, None, :] + V[None]).reshape(-1, V.shape[1]), axis=0)
        gap, scanned = _idp_gap(pts, k, box, hull, codec, S)
        checked += scanned
        if gap is not None:
            return PropertyReport(False, k_max, {"k": k, "w": gap, "reason": "not a sum of k integer points"}, checked)
    return PropertyReport(True, k_max, None, checked)


def _reach_by_supports(V: np.ndarray, k: int, t_values, codec: _Codec, independent_only: bool, deadline=None):
    """Keys of all sums reachable with supports of the given sizes."""
    keys = []
    for t in t_values:
        if t > k or t > len(V):
            continue
        comps = _compositions(k, t)
        for S in _chunks(itertools.combinations(range(len(V)), t), t):
            if independent_only:
                S = S[_independent_mask(V, S)]
                if not len(S):
                    continue
            sums = np.einsum("ct,stn->scn", comps, V[S]).reshape(-1, V.shape[1])
            keys.append(np.unique(codec.encode(sums, k)))
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError
    return np.unique(np.concatenate(keys)) if keys else np.zeros(0, dtype=np.int64)


def _chunks(it, t: int, size: int = 512):
    while True:
        rows = list(itertools.islice(it, size))
        if not rows:
            return
        S = np.array(rows, dtype=np.int64).reshape(len(rows), t)
        if not len(S):
            return
        yield S


def check_icp(points, k_max: int, box=None) -> PropertyReport:
    """IDP plus: every sum of ``k`` points also has an affinely independent decomposition.

    Per ``k`` the cheap independent-cover test on the sumset runs before the
    lattice scan, so a failure is reported at the smallest ``k``.
    """
    pts = [tuple(int(v) for v in p) for p in points]
    V = np.array(pts, dtype=np.int64)
    codec = _Codec(V, k_max)
    hull = HullFacets(pts)
    S = np.zeros((1, V.shape[1]), dtype=np.int64)
    checked = 0
    for k in range(1, k_max + 1):
        S = np.unique((S[:, None, :] + V[None]).reshape(-1, V.shape[1]), axis=0)
        S_k = S
        if box is not None:
            S_k = S[np.all((S >= k * np.array(box[0])) & (S <= k * np.array(box[1])), axis=1)]
        reach = _reach_by_supports(V, k, range(1, hull.dim + 2), codec, True)
        miss = S_k[~np.isin(codec.encode(S_k, k), reach)]
        if len(miss):
            w = miss[0].tolist()
            return PropertyReport(False, k_max, {"k": k, "w": w, "reason": "no affinely independent decomposition"}, checked + len(S_k))
        gap, scanned = _idp_gap(pts, k, box, hull, codec, S)
        checked += scanned
        if gap is not None:
            return PropertyReport(False, k_max, {"k": k, "w": gap, "reason": "not a sum of k integer points"}, checked)
    return PropertyReport(True, k_max, None, checked)


@dataclass(frozen=True)
class RankReport:
    k_max: int
    worst_t: dict = field(default_factory=dict)
    witness_k: int | None = None
    witness_w: tuple | None = None
    witness_decomposition: Decomposition | None = None
    caratheodory_rank_lower_bound: int = 0
    completed: bool = True

    def to_dict(self) -> dict:
        return {
            "k_max": self.k_max,
            "worst_t": {str(k): v for k, v in sorted(self.worst_t.items())},
            "witness": None
            if self.witness_w is None
            else {"k": self.witness_k, "w": list(self.witness_w), "decomposition": self.witness_decomposition.to_dict()},
            "caratheodory_rank_lower_bound": self.caratheodory_rank_lower_bound,
            "completed": self.completed,
        }


def caratheodory_rank_search(
    points,
    k_max: int,
    *,
    budget_seconds: float | None = None,
    stop_at: int | None = None,
) -> RankReport:
    """Lower bound on the Carathéodory rank from all sums of ``k <= k_max`` points.

    For each ``k`` the smallest support size covering every sum is found by
    growing the support size; the lexicographically first sum missed at the
    previous size is recorded when it beats the best witness so far.  Stops
    early once ``stop_at`` is reached.
    """
    budget = cap("rank_budget_seconds") if budget_seconds is None else budget_seconds
    deadline = time.monotonic() + budget
    pts = [tuple(int(v) for v in p) for p in points]
    V = np.array(pts, dtype=np.int64)
    codec = _Codec(V, k_max)
    S = np.zeros((1, V.shape[1]), dtype=np.int64)
    worst: dict[int, int] = {}
    best = (0, None, None)
    completed = True
    try:
        for k in range(1, k_max + 1):
            S = np.unique((S[:, None, :] + V[None]).reshape(-1, V.shape[1]), axis=0)
            keys = codec.encode(S, k)
            covered = np.zeros(len(S), dtype=bool)
            t = 0
            while not covered.all():
                t += 1
                prev_missing = S[~covered]
                reach = _reach_by_supports(V, k, [t], codec, False, deadline)
                covered |= np.isin(keys, reach)
            worst[k] = t
            if t > best[0]:
                best = (t, k, tuple(prev_missing[0].tolist()) if t > 1 else tuple(S[0].tolist()))
            if stop_at is not None and best[0] >= stop_at:
                break
            if time.monotonic() > deadline:
                completed = k == k_max
                break
    except TimeoutError:
        completed = False
    t, k, w = best
    dec = None
    if w is not None:
        t_found, dec = min_decomposition(pts, w, k)
        assert t_found == t
    return RankReport(k_max, worst, k, w, dec, t, completed)
