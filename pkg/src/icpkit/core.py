"""Integer decomposition and Integer Carathéodory decomposition engine.

Works for any polyhedron ``P`` for which ``rP ∩ (w - (k - r)P)`` is box-integer
for all ``0 <= r <= k`` and integer ``w``.  Such polyhedra are themselves box-
integer, stay in the class under faces and box intersections, and every integer
``w`` in ``kP`` splits into affinely independent integer points of ``P``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import AffineDependence, EmptyPolyhedron, NotMember
from .linalg import INFEASIBLE, affinely_independent, lp_solve, rank
from .polyhedron import (
    HPolyhedron,
    condition_intersection,
    box,
    direction_space,
    integral_vertex,
    intersect,
    minimal_face_containing,
    reflect_shift,
    rounding_box,
    scale,
)


@dataclass(frozen=True)
class Decomposition:
    """``w = sum(n_i * x_i)`` with ``sum(n_i) == k``."""

    points: tuple[tuple[int, ...], ...]
    multiplicities: tuple[int, ...]
    k: int

    def __post_init__(self):
        if len(self.points) != len(self.multiplicities):
            raise ValueError("points and multiplicities differ in length")
        if any(m <= 0 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive")
        if sum(self.multiplicities) != self.k:
            raise ValueError("multiplicities do not sum to k")
        if len(set(self.points)) != len(self.points):
            raise ValueError("points must be pairwise distinct")

    @property
    def t(self) -> int:
        return len(self.points)

    @property
    def total(self) -> tuple[int, ...]:
        if not self.points:
            return ()
        n = len(self.points[0])
        return tuple(sum(m * p[j] for m, p in zip(self.multiplicities, self.points)) for j in range(n))

    def is_affinely_independent(self) -> bool:
        return affinely_independent(self.points)

    def sorted(self) -> "Decomposition":
        pairs = sorted(zip(self.points, self.multiplicities))
        return Decomposition(tuple(p for p, _ in pairs), tuple(m for _, m in pairs), self.k)

    def project(self, m: int) -> "Decomposition":
        return Decomposition(tuple(p[:m] for p in self.points), self.multiplicities, self.k)

    def to_dict(self) -> dict:
        return {"k": self.k, "points": [list(p) for p in self.points], "multiplicities": list(self.multiplicities)}


class PFamily:
    """A polyhedron together with its builder for ``rP ∩ (w - (k - r)P)``.

    Frontends subclass this to emit the intersection system in their own
    closed form; the default uses the generic H-calculus.
    """

    def __init__(self, polyhedron: HPolyhedron, name: str = ""):
        self.polyhedron = polyhedron
        self.name = name

    @property
    def n(self) -> int:
        return self.polyhedron.n

    def intersection(self, r: int, k: int, w: Sequence[int]) -> HPolyhedron:
        return condition_intersection(self.polyhedron, r, k, w)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or self.polyhedron!r})"


def _as_family(P) -> PFamily:
    return P if isinstance(P, PFamily) else PFamily(P)


def _check_target(P: HPolyhedron, w: Sequence[int], k: int) -> tuple[int, ...]:
    if k < 1:
        raise ValueError("k must be a positive integer")
    w = tuple(int(v) for v in w)
    if len(w) != P.n:
        raise ValueError(f"target has dimension {len(w)}, polyhedron has {P.n}")
    if not P.contains([Fraction(v, k) for v in w]):
        raise NotMember(f"{list(w)} is not in {k}P")
    return w


def integer_decompose(family, w: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Split ``w`` in ``kP`` into ``k`` integer points of ``P`` (repetitions allowed).

    Peels off an integral vertex of ``P ∩ (w - (k-1)P)`` restricted to the
    rounding box of ``w / k`` and recurses on ``w - x`` with ``k - 1``.
    """
    family = _as_family(family)
    w = _check_target(family.polyhedron, w, k)
    out: list[tuple[int, ...]] = []
    while k > 0:
        Q = intersect(family.intersection(1, k, w), rounding_box(w, k))
        try:
            x = integral_vertex(Q)
        except EmptyPolyhedron:
            raise NotMember(f"{list(w)} is not in {k}P") from None
        out.append(x)
        w = tuple(a - b for a, b in zip(w, x))
        k -= 1
    return out


def _merge(a: Decomposition, b: Decomposition) -> Decomposition:
    return Decomposition(a.points + b.points, a.multiplicities + b.multiplicities, a.k + b.k)


def _icp(P: HPolyhedron, w: tuple[int, ...], k: int, depth: int, stats: dict | None) -> Decomposition:
    if stats is not None:
        stats["max_depth"] = max(stats.get("max_depth", 0), depth)
        stats["nodes"] = stats.get("nodes", 0) + 1
    if all(v % k == 0 for v in w):
        return Decomposition((tuple(v // k for v in w),), (k,), k)
    P = intersect(P, rounding_box(w, k))
    i = next(j for j, v in enumerate(w) if v % k)
    q, r = divmod(w[i], k)
    P1 = P.fix(i, q + 1)
    P2 = P.fix(i, q)
    rP1 = scale(P1, r)
    sP2 = scale(P2, k - r)
    Q = intersect(rP1, reflect_shift(sP2, w))
    y = integral_vertex(Q)
    z = tuple(a - b for a, b in zip(w, y))
    # faces of rP1 / (k-r)P2 carry the same tight rows as the faces of P1 / P2
    F1 = minimal_face_containing(rP1, y)
    F2 = minimal_face_containing(sP2, z)
    left = _icp(_face_of(P1, F1), y, r, depth + 1, stats)
    right = _icp(_face_of(P2, F2), z, k - r, depth + 1, stats)
    out = _merge(left, right)
    if not out.is_affinely_independent():
        raise AffineDependence(f"merged decomposition of {list(w)} (k={k}) is affinely dependent")
    return out


def _face_of(P: HPolyhedron, face) -> HPolyhedron:
    return P.tighten(
        face.tight_rows,
        lower=[j for j, side in face.tight_bounds if side == "lower"],
        upper=[j for j, side in face.tight_bounds if side == "upper"],
    )


def icp_decompose(family, w: Sequence[int], k: int, *, stats: dict | None = None) -> Decomposition:
    """Write ``w`` in ``kP`` as ``sum(n_i x_i)`` with affinely independent integer ``x_i``.

    Pass a dict as ``stats`` to receive the recursion depth and node count.
    """
    family = _as_family(family)
    w = _check_target(family.polyhedron, w, k)
    return _icp(family.polyhedron, w, k, 1, stats)


def project_decompose(family, m: int, w: Sequence[int], k: int, *, stats: dict | None = None) -> Decomposition:
    """ICP decomposition of ``w`` in ``k * pi(P)``, ``pi`` keeping the first ``m`` coordinates.

    Lifts ``w`` to an integral vertex ``w_hat`` of the fiber ``kP ∩ {x_i = w_i, i < m}``
    and decomposes inside the minimal face ``F`` of ``kP`` containing it.
    ``pi`` is injective on ``F``: ``w_hat`` lies in the relative interior of
    ``F``, so if ``pi(a) == pi(b)`` for distinct ``a, b`` in ``F`` then
    ``w_hat ± eps (b - a)`` stays in ``F`` and in the fiber, contradicting that
    ``w_hat`` is a vertex of the fiber.  Affine independence therefore survives
    the projection.
    """
    family = _as_family(family)
    P = family.polyhedron
    if not 0 <= m <= P.n:
        raise ValueError("projection dimension out of range")
    if k < 1:
        raise ValueError("k must be a positive integer")
    w = tuple(int(v) for v in w)
    if len(w) != m:
        raise ValueError(f"target has dimension {len(w)}, expected {m}")
    pin = box(list(w) + [None] * (P.n - m), list(w) + [None] * (P.n - m))
    try:
        x0 = _any_point(intersect(scale(P, k), pin))
    except EmptyPolyhedron:
        raise NotMember(f"{list(w)} is not in {k}·pi(P)") from None
    # truncating to a box that still holds x0 / k keeps P in the class and bounds the fiber
    N = max([1] + [-((-abs(v)) // k) for v in x0])
    lo = [v if v is not None else -N for v in P.lower]
    hi = [v if v is not None else N for v in P.upper]
    P = intersect(P, box(lo, hi))
    fiber = intersect(scale(P, k), pin)
    w_hat = integral_vertex(fiber)
    kP = scale(P, k)
    F = minimal_face_containing(kP, w_hat)
    face = _face_of(P, F)
    dec = _icp(face, w_hat, k, 1, stats)
    out = dec.project(m)
    if not out.is_affinely_independent():
        raise AffineDependence("projected decomposition is affinely dependent")
    return out


def _any_point(P: HPolyhedron):
    res = lp_solve(P, [0] * P.n, "max")
    if res.status == INFEASIBLE:
        raise EmptyPolyhedron("polyhedron is empty")
    return res.witness


def projection_injective(P: HPolyhedron, m: int) -> bool:
    """True iff keeping the first ``m`` coordinates is injective on ``P``."""
    dirs = direction_space(P)
    if not dirs:
        return True
    return rank([d[:m] for d in dirs]) == len(dirs)


def projected_dimension(P: HPolyhedron, m: int) -> int:
    dirs = direction_space(P)
    return rank([d[:m] for d in dirs]) if dirs else 0


def validate(dec: Decomposition, w: Sequence[int], k: int, member, dim: int | None = None) -> dict:
    """Certificate checks; ``member`` decides membership of a single point."""
    checks = {
        "sum_ok": tuple(dec.total) == tuple(int(v) for v in w),
        "count_ok": dec.k == k and sum(dec.multiplicities) == k,
        "membership_ok": all(member(p) for p in dec.points),
        "affine_independent": dec.is_affinely_independent(),
        "t": dec.t,
    }
    if dim is not None:
        checks["dim"] = dim
        checks["dim_bound"] = dec.t <= dim + 1
    return checks
