"""Exact rational linear algebra and linear programming.

Scalars are :class:`fractions.Fraction` (``Rat``); vectors and matrices are
tuples / lists of them.  Everything that needs elimination works fraction-free
on Python integers, which keeps the arithmetic exact without paying the gcd
cost of ``Fraction`` on every operation.

The LP solver is a two-phase primal simplex run on the *dual* of
``max c.x  s.t.  G x <= h`` (some rows may be equalities).  The dual has one
row per primal variable, which keeps tableaux small for the shapes used here:
few variables, many constraints.  Primal solutions are read off the final
simplex multipliers, so an optimal answer is a vertex whenever the feasible
region is pointed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

Rat = Fraction
RatVec = tuple  # tuple[Fraction, ...]
RatMat = tuple  # tuple[RatVec, ...]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def as_rat_vec(values: Iterable) -> RatVec:
    return tuple(as_rat(v) for v in values)


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (rank-preserving)."""
    out = []
    for row in rows:
        fr = [as_rat(v) for v in row]
        den = 1
        for v in fr:
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in fr])
    return out


def rank(M: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    rows = _integer_rows(M)
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        for i in range(r + 1, len(rows)):
            f = rows[i][col]
            rows[i] = [(p * a - f * c) // prev for a, c in zip(rows[i], rows[r])]
        prev = p
        r += 1
        if r == len(rows):
            break
    return r


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    rows = [[as_rat(v) for v in row] for row in M]
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    r = 0
    for col in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * c for a, c in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[RatVec]:
    """Basis of ``{x : M x = 0}``."""
    if ncols is None:
        ncols = len(M[0]) if len(M) else 0
    if not M:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    rows, pivots = rref(M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def affinely_independent(points: Sequence[Sequence]) -> bool:
    """True iff the points are affinely independent (homogenized rank equals count)."""
    if not points:
        return True
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise ValueError("points have different dimensions")
    if len(points) > dim + 1:
        return False
    return rank([[1, *p] for p in points]) == len(points)


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points`` (-1 for no points)."""
    if not points:
        return -1
    return rank([[1, *p] for p in points]) - 1


# --------------------------------------------------------------------------
#  Linear programming
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LpResult:
    """Outcome of :func:`lp_solve` / :func:`lex_solve`.

    ``witness`` is the optimal point for ``optimal`` and a Farkas ray over the
    expanded constraint rows for ``infeasible`` (nonnegative on inequality rows,
    ``ray @ G == 0`` and ``ray @ h < 0``).  ``dual`` holds optimal multipliers
    on the expanded rows for single-objective problems.
    """

    status: str
    optimum: Fraction | tuple | None = None
    witness: RatVec | None = None
    dual: RatVec | None = None
    labels: tuple = field(default=(), repr=False)

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _lex_sign(row) -> int:
    for v in row:
        if v > 0:
            return 1
        if v < 0:
            return -1
    return 0


def _pivot(M, r: int, s: int, d: int):
    p = M[r, s]
    new = (M * p - np.multiply.outer(M[:, s], M[r])) // d
    new[r] = M[r]
    if p < 0:
        return -new, -p
    return new, p


def _ratio_row(M, rows, s, rhs_slice, basis):
    best = None
    best_key = None
    for i in rows:
        a = M[i, s]
        if a <= 0:
            continue
        key = tuple(Fraction(v, a) for v in M[i, rhs_slice])
        if best is None or key < best_key or (key == best_key and basis[i] < basis[best]):
            best, best_key = i, key
    return best


def _simplex(G: list[list[int]], h: list[int], is_eq: list[bool], C: list[list[int]]):
    """Solve ``lexmax_l c_l . x  s.t.  G x <= h`` (``=`` where ``is_eq``).

    ``C`` is ``n x L`` with objective level ``l`` in column ``l``.  Returns
    ``(status, x, dual_cols, ray)`` with dual/ray indexed by expanded row.
    """
    n = len(C)
    L = len(C[0]) if n else 1
    p = len(G)
    if n == 0:
        for i in range(p):
            if (is_eq[i] and h[i] != 0) or (not is_eq[i] and h[i] < 0):
                ray = [Fraction(0)] * p
                ray[i] = Fraction(-1 if is_eq[i] and h[i] > 0 else 1)
                return INFEASIBLE, None, None, tuple(ray)
        return OPTIMAL, (), tuple(Fraction(0) for _ in range(p)), None

    cols: list[tuple[int, int]] = []
    for i in range(p):
        cols.append((i, 1))
        if is_eq[i]:
            cols.append((i, -1))
    N = len(cols)
    M = np.zeros((n + 2, N + n + L), dtype=object)
    M[:] = 0
    for j, (i, sg) in enumerate(cols):
        for v in range(n):
            M[v, j] = sg * G[i][v]
        M[n, j] = sg * h[i]
    sigma = [1] * n
    for v in range(n):
        if _lex_sign(C[v]) < 0:
            sigma[v] = -1
        for j in range(N):
            M[v, j] *= sigma[v]
        for lvl in range(L):
            M[v, N + n + lvl] = sigma[v] * C[v][lvl]
        M[v, N + v] = 1
    M[n + 1, :N] = -M[:n, :N].sum(axis=0)
    M[n + 1, N + n:] = -M[:n, N + n:].sum(axis=0)
    d = 1
    basis = [N + v for v in range(n)]
    active = list(range(n))
    rhs = slice(N + n, N + n + L)

    # phase 1
    while True:
        neg = np.nonzero(M[n + 1, :N] < 0)[0]
        if len(neg) == 0:
            break
        s = int(neg[0])
        r = _ratio_row(M, active, s, rhs, basis)
        M, d = _pivot(M, r, s, d)
        basis[r] = s
    if any(v != 0 for v in M[n + 1, rhs]):
        status, _, _, ray = _simplex(G, h, is_eq, [[0] for _ in range(n)])
        if status == INFEASIBLE:
            return INFEASIBLE, None, None, ray
        return UNBOUNDED, None, None, None

    for i in list(active):
        if basis[i] < N:
            continue
        nz = np.nonzero(M[i, :N] != 0)[0]
        if len(nz):
            s = int(nz[0])
            M, d = _pivot(M, i, s, d)
            basis[i] = s
        else:
            active.remove(i)

    # phase 2
    while True:
        neg = np.nonzero(M[n, :N] < 0)[0]
        if len(neg) == 0:
            break
        s = int(neg[0])
        r = _ratio_row(M, active, s, rhs, basis)
        if r is None:
            ray = [Fraction(0)] * p
            i0, sg0 = cols[s]
            ray[i0] += sg0
            for i in active:
                ib, sgb = cols[basis[i]]
                ray[ib] += sgb * Fraction(-M[i, s], d)
            return INFEASIBLE, None, None, tuple(ray)
        M, d = _pivot(M, r, s, d)
        basis[r] = s

    x = tuple(Fraction(-sigma[v] * M[n, N + v], d) for v in range(n))
    dual = [[Fraction(0)] * L for _ in range(p)]
    for i in active:
        ib, sgb = cols[basis[i]]
        for lvl in range(L):
            dual[ib][lvl] += sgb * Fraction(M[i, N + n + lvl], d)
    return OPTIMAL, x, dual, None


def _as_system(P):
    if hasattr(P, "constraint_system"):
        return P.constraint_system()
    G, h, is_eq = P
    return [list(map(int, g)) for g in G], [int(v) for v in h], list(is_eq), ()


def _check_feasible(G, h, is_eq, x) -> None:
    for g, hv, e in zip(G, h, is_eq):
        lhs = sum(a * b for a, b in zip(g, x) if a)
        if (e and lhs != hv) or (not e and lhs > hv):
            raise ArithmeticError("simplex returned a point violating a constraint")


def _integer_objective(obj: Sequence, n: int) -> list[int]:
    if len(obj) != n:
        raise ValueError(f"objective has length {len(obj)}, expected {n}")
    return _integer_rows([obj])[0]


def lex_solve(P, objectives: Sequence[Sequence], sense: str = "max") -> LpResult:
    """Lexicographically optimize ``objectives`` (highest priority first) over ``P``.

    ``P`` is anything exposing ``constraint_system()`` (e.g. an HPolyhedron) or
    a raw ``(G, h, is_eq)`` triple.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    G, h, is_eq, labels = _as_system(P)
    n = P.n if hasattr(P, "n") else (len(G[0]) if G else len(objectives[0]))
    levels = [_integer_objective(o, n) for o in objectives]
    if sense == "min":
        levels = [[-v for v in lv] for lv in levels]
    C = [[lv[v] for lv in levels] for v in range(n)]
    status, x, dual, ray = _simplex(G, h, is_eq, C)
    if status == INFEASIBLE:
        return LpResult(INFEASIBLE, witness=ray, labels=labels)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, labels=labels)
    _check_feasible(G, h, is_eq, x)
    values = tuple(sum((as_rat(c) * xv for c, xv in zip(o, x)), Fraction(0)) for o in objectives)
    single = len(objectives) == 1
    return LpResult(
        OPTIMAL,
        optimum=values[0] if single else values,
        witness=x,
        dual=tuple(row[0] for row in dual) if single else None,
        labels=labels,
    )


def lp_solve(P, objective: Sequence, sense: str = "max") -> LpResult:
    """Exactly optimize a linear objective over ``P``."""
    return lex_solve(P, [objective], sense)


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    rows = [list(map(int, r)) for r in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("det needs a square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        p = rows[k][k]
        for i in range(k + 1, n):
            f = rows[i][k]
            rows[i] = [(p * a - f * c) // prev for a, c in zip(rows[i], rows[k])]
        prev = p
    return sign * rows[n - 1][n - 1]
