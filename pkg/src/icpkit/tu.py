"""Totally unimodular and nearly totally unimodular frontends.

For a TU matrix ``A`` and integer ``b`` the polyhedron ``{Ax <= b}`` is in the
decomposable class directly: stacking ``A, -A, I, -I`` keeps total
unimodularity, so every ``rP ∩ (w - (k-r)P)`` intersected with a box is
integral.

An NTU matrix is ``A = A_hat + c a^T`` with ``A_hat`` TU and ``a`` a row of
``A_hat``.  Its integer hull ``P_{A,b}`` is generally not box-integer, but
slicing by the value of ``a^T x`` reduces membership and decomposition to two
TU systems.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .caps import cap
from .core import Decomposition, PFamily, _merge, icp_decompose
from .errors import AffineDependence, EmptyPolyhedron, InvalidInstance, NotMember, ResourceCapExceeded
from .linalg import det, lp_solve
from .polyhedron import (
    HPolyhedron,
    _batch_gauss_jordan,
    box,
    integral_vertex,
    intersect,
    lex_extreme,
    minimal_face_containing,
    reflect_shift,
    scale,
)


@dataclass(frozen=True)
class TuReport:
    is_tu: bool
    exhaustive: bool
    rows: tuple[int, ...] | None = None
    cols: tuple[int, ...] | None = None
    determinant: int | None = None
    reason: str = ""

    @property
    def unverified(self) -> bool:
        return self.is_tu and not self.exhaustive


def _is_incidence(A: np.ndarray) -> bool:
    return bool(((A == 1).sum(axis=0) <= 1).all() and ((A == -1).sum(axis=0) <= 1).all())


def _violation(A: np.ndarray, rows, cols) -> TuReport:
    sub = A[np.ix_(rows, cols)]
    return TuReport(False, True, tuple(int(r) for r in rows), tuple(int(c) for c in cols), det(sub.tolist()), "square submatrix with determinant outside {-1, 0, 1}")


def check_tu(
    A: Sequence[Sequence[int]],
    *,
    max_dim: int | None = None,
    sample: bool = False,
    samples: int | None = None,
    seed: int = 0,
    structural: bool = True,
) -> TuReport:
    """Decide total unimodularity by checking every square submatrix.

    With ``structural`` set, a matrix (or transpose) whose columns each hold
    at most one ``+1`` and one ``-1`` is accepted at once: it is a digraph
    incidence matrix, which is TU.  Otherwise matrices with more than
    ``max_dim`` rows or columns are refused unless ``sample`` is set, in which
    case random square submatrices are checked and a passing result is flagged
    as unverified.
    """
    A = np.array(A, dtype=np.int64).reshape(len(A), -1) if len(A) else np.zeros((0, 0), dtype=np.int64)
    m, n = A.shape
    max_dim = cap("tu_exhaustive") if max_dim is None else max_dim
    bad = np.argwhere(np.abs(A) > 1)
    if len(bad):
        i, j = bad[0]
        return TuReport(False, True, (int(i),), (int(j),), int(A[i, j]), "entry outside {-1, 0, 1}")
    if structural and A.size and (_is_incidence(A) or _is_incidence(A.T)):
        return TuReport(True, True, reason="digraph incidence matrix")
    if max(m, n) > max_dim:
        if not sample:
            raise ResourceCapExceeded(
                f"{m}x{n} matrix exceeds the exhaustive TU cap {max_dim}; pass sample=True to sample submatrices"
            )
        warnings.warn("TU check by sampling only; result is unverified", stacklevel=2)
        rng = np.random.default_rng(seed)
        for _ in range(samples or cap("tu_samples")):
            s = int(rng.integers(2, min(m, n) + 1)) if min(m, n) >= 2 else 1
            rows = np.sort(rng.choice(m, s, replace=False))
            cols = np.sort(rng.choice(n, s, replace=False))
            if abs(det(A[np.ix_(rows, cols)].tolist())) > 1:
                return _violation(A, rows, cols)
        return TuReport(True, False, reason="sampled submatrices only")
    for s in range(2, min(m, n) + 1):
        row_sets = np.array(list(itertools.combinations(range(m), s)), dtype=np.int64)
        col_sets = np.array(list(itertools.combinations(range(n), s)), dtype=np.int64)
        for rows in row_sets:
            sub = A[rows]  # s x n
            blocks = sub[:, col_sets].transpose(1, 0, 2)  # C x s x s
            Ms = np.concatenate([blocks, np.zeros((len(col_sets), s, 1), dtype=np.int64)], axis=2)
            D, _ = _batch_gauss_jordan(Ms)
            hit = np.nonzero(np.abs(D) > 1)[0]
            if len(hit):
                return _violation(A, rows, col_sets[hit[0]])
    return TuReport(True, True, reason="all square submatrices checked")


@dataclass(frozen=True)
class TuInstance:
    """``P = {x : A x <= b}`` with ``A`` totally unimodular."""

    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    tu_verified: bool = True

    @classmethod
    def create(cls, A, b, *, validate: bool = True, max_dim: int | None = None) -> "TuInstance":
        A = tuple(tuple(int(v) for v in row) for row in A)
        b = tuple(int(v) for v in b)
        if len(A) != len(b):
            raise InvalidInstance("A and b have different numbers of rows")
        verified = False
        if validate:
            try:
                rep = check_tu(A, max_dim=max_dim)
            except ResourceCapExceeded:
                rep = None
            if rep is not None:
                if not rep.is_tu:
                    raise InvalidInstance(
                        f"matrix is not totally unimodular: rows {rep.rows}, cols {rep.cols}, det {rep.determinant}"
                    )
                verified = True
        return cls(A, b, verified)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0

    @property
    def polyhedron(self) -> HPolyhedron:
        return HPolyhedron(self.A, self.b, n=self.n)


class TuFamily(PFamily):
    """Family for ``{A x <= b}`` (plus optional equalities / bounds) with ``A`` TU."""

    def intersection(self, r: int, k: int, w: Sequence[int]) -> HPolyhedron:
        P = self.polyhedron
        if not 0 <= r <= k:
            raise ValueError("need 0 <= r <= k")
        Aw = [sum(a * v for a, v in zip(row, w)) for row in P.A]
        rows = list(P.A) + [tuple(-a for a in row) for row in P.A]
        rhs = [r * bi for bi in P.b] + [(k - r) * bi - awi for bi, awi in zip(P.b, Aw)]
        eq = set(P.eq_rows) | {i + P.m for i in P.eq_rows}
        first = box(
            [None if v is None else r * v for v in P.lower] if r else [0] * P.n,
            [None if v is None else r * v for v in P.upper] if r else [0] * P.n,
        )
        s = k - r
        second = box(
            [None if u is None else wj - s * u for wj, u in zip(w, P.upper)] if s else list(w),
            [None if l is None else wj - s * l for wj, l in zip(w, P.lower)] if s else list(w),
        )
        return intersect(HPolyhedron(rows, rhs, n=P.n, eq_rows=eq), intersect(first, second))


def tu_family(inst) -> TuFamily:
    if isinstance(inst, HPolyhedron):
        return TuFamily(inst)
    return TuFamily(inst.polyhedron, name="tu")


# --------------------------------------------------------------------------
#  NTU
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NtuInstance:
    """``A = A_hat + c a^T`` with ``a = A_hat[row_index]``; the polytope is the integer hull of ``{Ax <= b}``."""

    A_hat: tuple[tuple[int, ...], ...]
    row_index: int
    c: tuple[int, ...]
    b: tuple[int, ...]

    @classmethod
    def create(cls, A_hat, row_index, c, b, *, validate: bool = True) -> "NtuInstance":
        A_hat = tuple(tuple(int(v) for v in row) for row in A_hat)
        c = tuple(int(v) for v in c)
        b = tuple(int(v) for v in b)
        if not (len(A_hat) == len(c) == len(b)):
            raise InvalidInstance("A_hat, c and b must have the same number of rows")
        if not 0 <= row_index < len(A_hat):
            raise InvalidInstance("row_index out of range")
        if validate:
            rep = check_tu(A_hat)
            if not rep.is_tu:
                raise InvalidInstance(f"A_hat is not totally unimodular (det {rep.determinant})")
        return cls(A_hat, int(row_index), c, b)

    @property
    def n(self) -> int:
        return len(self.A_hat[0])

    @property
    def a(self) -> tuple[int, ...]:
        return self.A_hat[self.row_index]

    @property
    def A(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(h + ci * aj for h, aj in zip(row, self.a)) for row, ci in zip(self.A_hat, self.c))

    @property
    def relaxation(self) -> HPolyhedron:
        """``{x : A x <= b}``, whose integer points span ``P_{A,b}``."""
        return HPolyhedron(self.A, self.b, n=self.n)

    def layer(self, s: int) -> HPolyhedron:
        """``{y : A_hat y <= b - s c, a^T y = s}``; its integer points are those of ``P_{A,b}`` with ``a^T y = s``."""
        rows = list(self.A_hat) + [self.a]
        rhs = [bi - s * ci for bi, ci in zip(self.b, self.c)] + [s]
        return HPolyhedron(rows, rhs, n=self.n, eq_rows=[len(rows) - 1])

    def contains_integer(self, z: Sequence[int]) -> bool:
        return all(sum(a * v for a, v in zip(row, z)) <= bi for row, bi in zip(self.A, self.b))


def _split(inst: NtuInstance, w: Sequence[int], k: int) -> tuple[int, int]:
    return divmod(sum(a * v for a, v in zip(inst.a, w)), k)


def membership_system(inst: NtuInstance, w: Sequence[int], k: int) -> HPolyhedron:
    """``r P_1 ∩ (w - (k - r) P_2)`` written out as the feasibility system in ``y``:

    ``A_hat y <= r (b - (q+1) c)``, ``A_hat y >= A_hat w + (k - r)(q c - b)``,
    ``a^T y = r (q + 1)`` where ``a^T w = q k + r``.
    """
    q, r = _split(inst, w, k)
    Ah = inst.A_hat
    Aw = [sum(a * v for a, v in zip(row, w)) for row in Ah]
    rows = list(Ah) + [tuple(-v for v in row) for row in Ah] + [inst.a]
    rhs = [r * (bi - (q + 1) * ci) for bi, ci in zip(inst.b, inst.c)]
    rhs += [-(awi + (k - r) * (q * ci - bi)) for awi, bi, ci in zip(Aw, inst.b, inst.c)]
    rhs.append(r * (q + 1))
    return HPolyhedron(rows, rhs, n=inst.n, eq_rows=[len(rows) - 1])


def ntu_membership(inst: NtuInstance, w: Sequence[int], k: int) -> tuple[bool, tuple | None]:
    """Decide ``w in k P_{A,b}``; returns ``(True, y)`` with ``y`` feasible for the system above."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    S = membership_system(inst, w, k)
    try:
        y = lex_extreme(S, "min")
    except EmptyPolyhedron:
        return False, None
    except ValueError:
        y = lp_solve(S, [0] * inst.n).witness
    return True, tuple(int(v) if v.denominator == 1 else v for v in y)


def _guard_box(y, w, q, r, k) -> tuple[list[int], list[int]]:
    lo, hi = [], []
    for yi, wi in zip(y, w):
        cands = []
        if r:
            cands.append(yi / r)
        if k - r:
            cands.append((wi - yi) / (k - r))
        lo.append(math.floor(min(cands)) - 1)
        hi.append(math.ceil(max(cands)) + 1)
    return lo, hi


def ntu_icp_decompose(inst: NtuInstance, w: Sequence[int], k: int, *, stats: dict | None = None) -> Decomposition:
    """Affinely independent decomposition of ``w`` in ``k P_{A,b}``."""
    w = tuple(int(v) for v in w)
    if len(w) != inst.n:
        raise ValueError("target has the wrong dimension")
    member, y0 = ntu_membership(inst, w, k)
    if not member:
        raise NotMember(f"{list(w)} is not in {k}P_A,b")
    q, r = _split(inst, w, k)
    if r == 0:
        y0 = [0] * inst.n
    lo, hi = _guard_box(y0, w, q, r, k)
    P1 = intersect(inst.layer(q + 1), box(lo, hi))
    P2 = intersect(inst.layer(q), box(lo, hi))
    if r == 0:
        return icp_decompose(tu_family(P2), w, k, stats=stats)
    rP1 = scale(P1, r)
    sP2 = scale(P2, k - r)
    y = integral_vertex(intersect(rP1, reflect_shift(sP2, w)))
    z = tuple(a - b for a, b in zip(w, y))
    F1 = minimal_face_containing(rP1, y)
    F2 = minimal_face_containing(sP2, z)
    left = icp_decompose(tu_family(_face(P1, F1)), y, r, stats=stats)
    right = icp_decompose(tu_family(_face(P2, F2)), z, k - r, stats=stats)
    out = _merge(left, right)
    if not out.is_affinely_independent():
        raise AffineDependence("NTU decomposition produced affinely dependent points")
    return out


def _face(P: HPolyhedron, F) -> HPolyhedron:
    return P.tighten(
        F.tight_rows,
        lower=[j for j, side in F.tight_bounds if side == "lower"],
        upper=[j for j, side in F.tight_bounds if side == "upper"],
    )
