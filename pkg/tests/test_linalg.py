from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icpkit.linalg import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    affine_rank,
    affinely_independent,
    det,
    lex_solve,
    lp_solve,
    nullspace,
    rank,
    rref,
)

small = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def naive_rank(M):
    """Gaussian elimination over Fraction, written independently of the library."""
    R = [[Fraction(v) for v in row] for row in M]
    r = 0
    for c in range(len(R[0])):
        piv = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c] / R[r][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        r += 1
    return r


def naive_det(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= M[i][perm[i]]
        total += sign * prod
    return total


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_naive_elimination(M):
    assert rank(M) == naive_rank(M)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_permutation_expansion(M):
    assert det(M) == naive_det(M)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_vectors_are_annihilated(M):
    basis = nullspace(M)
    n = len(M[0])
    assert len(basis) == n - rank(M)
    for v in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(row, v)) == 0 for row in M)


def test_rref_pivots():
    R, piv = rref([[2, 4, 6], [1, 2, 4]])
    assert piv == [0, 2]
    assert R[0] == [1, 2, 0]
    assert R[1] == [0, 0, 1]


def test_affine_independence():
    assert affinely_independent([(0, 0), (1, 0), (0, 1)])
    assert not affinely_independent([(0, 0), (1, 1), (2, 2)])
    assert affinely_independent([(3, 4)])
    assert affine_rank([(0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]) == 3


def _system(A, b, eq=()):
    return [list(r) for r in A], list(b), [i in eq for i in range(len(A))]


def test_lp_optimum_is_exact_rational():
    # max x + y  s.t. 2x + y <= 3, x + 3y <= 4, x, y >= 0  ->  (1, 1)
    res = lp_solve(_system([[2, 1], [1, 3], [-1, 0], [0, -1]], [3, 4, 0, 0]), [1, 1])
    assert res.status == OPTIMAL
    assert res.witness == (1, 1)
    assert res.optimum == 2
    # max x: vertex (3/2, 0)
    res = lp_solve(_system([[2, 1], [1, 3], [-1, 0], [0, -1]], [3, 4, 0, 0]), [1, 0])
    assert res.witness == (Fraction(3, 2), 0)


def test_lp_infeasible_gives_farkas_ray():
    G, h, eq = _system([[1, 0], [-1, 0]], [0, -1])  # x <= 0 and x >= 1
    res = lp_solve((G, h, eq), [0, 0])
    assert res.status == INFEASIBLE
    y = res.witness
    assert all(v >= 0 for v in y)
    assert all(sum(y[i] * G[i][j] for i in range(len(G))) == 0 for j in range(2))
    assert sum(y[i] * h[i] for i in range(len(G))) < 0


def test_lp_unbounded_and_equalities():
    assert lp_solve(_system([[-1, 0]], [0]), [1, 0]).status == UNBOUNDED
    res = lp_solve(_system([[1, 1], [-1, 0], [0, -1]], [5, 0, 0], eq=(0,)), [1, 0], "min")
    assert res.status == OPTIMAL and res.witness == (0, 5)


def test_lex_solve_breaks_ties_in_order():
    # the square [0,1]^2: maximize x first, then minimize y via max -y
    sq = _system([[1, 0], [0, 1], [-1, 0], [0, -1]], [1, 1, 0, 0])
    res = lex_solve(sq, [[1, 0], [0, -1]])
    assert res.witness == (1, 0)
    assert res.optimum == (1, 0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=1, max_size=5), st.lists(st.integers(-3, 6), min_size=5, max_size=5))
def test_lp_feasibility_agrees_with_grid_scan(rows, rhs):
    """A grid point in the region forces the LP to be feasible; a feasible answer must satisfy every row."""
    A = rows + [[1, 0], [0, 1], [-1, 0], [0, -1]]
    b = rhs[: len(rows)] + [3, 3, 3, 3]
    res = lp_solve(_system(A, b), [0, 0])
    grid = np.arange(-36, 37) / 12
    X, Y = np.meshgrid(grid, grid)
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    hit = (pts @ np.array(A, dtype=float).T <= np.array(b, dtype=float) + 1e-12).all(axis=1).any()
    if hit:
        assert res.status == OPTIMAL
    if res.status == OPTIMAL:
        x = res.witness
        assert all(sum(Fraction(a) * v for a, v in zip(row, x)) <= bb for row, bb in zip(A, b))
    else:
        assert res.status == INFEASIBLE


def test_rank_of_empty_and_zero():
    assert rank([[0, 0], [0, 0]]) == 0
    with pytest.raises(Exception):
        det([[1, 2]])
