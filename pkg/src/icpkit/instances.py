"""JSON instance files and a uniform interface over every polyhedron frontend.

Each instance type wraps one frontend and exposes:

* ``decompose(w, k)`` using the frontend's decomposition routine,
* ``member_point(x)`` exact membership of an integer point,
* ``contains_scaled(w, k)`` exact test of ``w / k in P``,
* ``integer_points()`` the oracle's view of ``P ∩ Z^n``,
* ``dim()`` and ``polyhedron()`` (an H-description where one exists).
"""

from __future__ import annotations

import functools
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import jsonschema

from .core import Decomposition, icp_decompose, project_decompose, projected_dimension
from .errors import IcpError, InvalidInstance, NotMember
from .gammoid import GammoidPresentation, common_base_decompose, common_bases, glue
from .linalg import INFEASIBLE, affine_rank, lp_solve
from .oracle import HullFacets, VertexInstance, enumerate_integer_points, hull_contains, min_decomposition, reachable
from .polyhedron import HPolyhedron, box, dimension, intersect, scale
from .polymatroid import (
    KINDS,
    MatroidSpec,
    SubmodularFn,
    bases,
    is_base,
    matroid_base_decompose,
    polymatroid_family,
    rank_from_constructor,
)
from .tu import NtuInstance, TuInstance, ntu_icp_decompose, ntu_membership, tu_family


class NoIndependentDecomposition(IcpError):
    """A vertex-list polytope has no affinely independent decomposition of the target."""


_INT = {"type": "integer"}
_VEC = {"type": "array", "items": _INT}
_MAT = {"type": "array", "items": _VEC, "minItems": 1}
_LABEL = {"type": ["string", "integer"]}
_GAMMOID = {
    "type": "object",
    "required": ["vertices", "arcs", "U", "S"],
    "properties": {
        "vertices": {"type": "array", "items": _LABEL},
        "arcs": {"type": "array", "items": {"type": "array", "items": _LABEL, "minItems": 2, "maxItems": 2}},
        "U": {"type": "array", "items": _LABEL},
        "S": {"type": "array", "items": _LABEL},
    },
}
_CONSTRUCTORS = {
    "uniform": {"required": ["n", "r"], "properties": {"n": _INT, "r": _INT}},
    "partition": {"required": ["blocks", "capacities"], "properties": {"blocks": _MAT, "capacities": _VEC}},
    "graphic": {
        "required": ["edges"],
        "properties": {"edges": {"type": "array", "items": {"type": "array", "items": _LABEL, "minItems": 2, "maxItems": 2}}},
    },
    "explicit_bases": {"required": ["n", "bases"], "properties": {"n": _INT, "bases": {"type": "array", "items": _VEC}}},
    "gammoid": _GAMMOID,
}
_COMMON = {"id": {"type": "string"}, "description": {"type": "string"}}
SCHEMAS: dict[str, dict] = {
    "tu": {"required": ["A", "b"], "properties": {"A": _MAT, "b": _VEC}},
    "ntu": {
        "required": ["A_hat", "row_index", "c", "b"],
        "properties": {"A_hat": _MAT, "row_index": _INT, "c": _VEC, "b": _VEC},
    },
    "polymatroid": {
        "required": ["kind", "n", "values"],
        "properties": {"kind": {"enum": list(KINDS)}, "n": _INT, "values": _VEC},
    },
    "matroid": {
        "required": ["constructor"],
        "properties": {
            "constructor": {
                "type": "object",
                "required": ["kind"],
                "properties": {"kind": {"enum": list(_CONSTRUCTORS)}},
            }
        },
    },
    "gammoid_intersection": {
        "required": ["m1", "m2"],
        "properties": {
            "m1": _GAMMOID,
            "m2": _GAMMOID,
            "phi": {"type": "object", "additionalProperties": _LABEL},
            "k": _INT,
        },
    },
    "vertices": {"required": ["vertices"], "properties": {"vertices": _MAT}},
    "projection": {"required": ["keep_coords", "instance"], "properties": {"keep_coords": _INT, "instance": {"type": "object"}}},
}


def _schema(kind: str) -> dict:
    body = SCHEMAS[kind]
    return {
        "type": "object",
        "required": ["type", *body["required"]],
        "properties": {"type": {"const": kind}, **_COMMON, **body["properties"]},
        "additionalProperties": False,
    }


def _rect(M, name: str) -> None:
    if len({len(r) for r in M}) > 1:
        raise InvalidInstance(f"{name} is not rectangular")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class Instance:
    """Base class; subclasses set ``kind`` and implement the frontend hooks."""

    kind = ""

    def __init__(self, doc: dict):
        self.doc = doc
        self.id = doc.get("id", self.kind)

    @property
    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.doc).encode()).hexdigest()[:16]

    n: int = 0
    tu_verified: bool = True

    def decompose(self, w: Sequence[int], k: int, *, stats: dict | None = None) -> Decomposition:
        raise NotImplementedError

    def member_point(self, x: Sequence[int]) -> bool:
        raise NotImplementedError

    def contains_scaled(self, w: Sequence[int], k: int) -> bool:
        raise NotImplementedError

    def integer_points(self, box_=None) -> list[tuple[int, ...]]:
        raise NotImplementedError

    def dim(self) -> int:
        raise NotImplementedError

    def polyhedron(self) -> HPolyhedron | None:
        return None

    def family(self):
        """``(PFamily, m)``: the instance is the projection of the family's polyhedron to its first ``m`` coordinates."""
        raise InvalidInstance(f"{self.kind} instances are not in the decomposable class")

    def _check_w(self, w, k) -> tuple[int, ...]:
        w = tuple(int(v) for v in w)
        if len(w) != self.n:
            raise InvalidInstance(f"w has {len(w)} entries, instance dimension is {self.n}")
        if k < 1:
            raise InvalidInstance("k must be a positive integer")
        return w


def _boxed(points, box_) -> list[tuple[int, ...]]:
    """Sorted points, restricted to ``box_ = (lo, hi)`` when given."""
    pts = sorted(points)
    if box_ is not None:
        pts = [p for p in pts if all(lo <= v <= hi for v, lo, hi in zip(p, box_[0], box_[1]))]
    return pts


def _hpoly_contains_scaled(P: HPolyhedron, w, k) -> bool:
    return P.contains([Fraction(int(v), k) for v in w])


class TuInst(Instance):
    kind = "tu"

    def __init__(self, doc):
        super().__init__(doc)
        _rect(doc["A"], "A")
        self.inst = TuInstance.create(doc["A"], doc["b"])
        self.n = self.inst.n
        self.tu_verified = self.inst.tu_verified

    def polyhedron(self):
        return self.inst.polyhedron

    def family(self):
        return tu_family(self.inst), self.n

    def decompose(self, w, k, *, stats=None):
        return icp_decompose(tu_family(self.inst), self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        return self.inst.polyhedron.contains(x)

    def contains_scaled(self, w, k):
        return _hpoly_contains_scaled(self.inst.polyhedron, w, k)

    def integer_points(self, box_=None):
        return enumerate_integer_points(self.inst.polyhedron, box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return dimension(self.inst.polyhedron)


class NtuInst(Instance):
    kind = "ntu"

    def __init__(self, doc):
        super().__init__(doc)
        _rect(doc["A_hat"], "A_hat")
        self.inst = NtuInstance.create(doc["A_hat"], doc["row_index"], doc["c"], doc["b"])
        self.n = self.inst.n

    def polyhedron(self):
        return self.inst.relaxation

    def decompose(self, w, k, *, stats=None):
        return ntu_icp_decompose(self.inst, self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        return self.inst.contains_integer(x)

    def contains_scaled(self, w, k):
        return ntu_membership(self.inst, w, k)[0]

    def integer_points(self, box_=None):
        return enumerate_integer_points(self.inst.relaxation, box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return affine_rank(self.integer_points())


class PolymatroidInst(Instance):
    kind = "polymatroid"

    def __init__(self, doc):
        super().__init__(doc)
        self.f = SubmodularFn(int(doc["n"]), tuple(doc["values"]))
        self.fam = polymatroid_family(self.f, doc["kind"])
        self.n = self.f.n

    def polyhedron(self):
        return self.fam.polyhedron

    def family(self):
        return self.fam, self.n

    def decompose(self, w, k, *, stats=None):
        return icp_decompose(self.fam, self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        return self.fam.polyhedron.contains(x)

    def contains_scaled(self, w, k):
        return _hpoly_contains_scaled(self.fam.polyhedron, w, k)

    def integer_points(self, box_=None):
        return enumerate_integer_points(self.fam.polyhedron, box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return dimension(self.fam.polyhedron)


def _spec_from_doc(c: dict) -> MatroidSpec:
    kind = c["kind"]
    try:
        jsonschema.validate(c, {"type": "object", **_CONSTRUCTORS[kind]})
    except jsonschema.ValidationError as e:
        raise InvalidInstance(f"matroid constructor: {e.message}") from None
    if kind == "uniform":
        return MatroidSpec.uniform(c["n"], c["r"])
    if kind == "partition":
        return MatroidSpec.partition(c["blocks"], c["capacities"])
    if kind == "graphic":
        return MatroidSpec.graphic(c["edges"])
    if kind == "explicit_bases":
        return MatroidSpec.explicit_bases(c["n"], c["bases"])
    return MatroidSpec.gammoid(c["vertices"], c["arcs"], c["U"], c["S"])


class MatroidInst(Instance):
    kind = "matroid"

    def __init__(self, doc):
        super().__init__(doc)
        self.spec = _spec_from_doc(doc["constructor"])
        self.f = rank_from_constructor(self.spec)
        self.fam = polymatroid_family(self.f, "base")
        self.n = self.f.n

    def polyhedron(self):
        return self.fam.polyhedron

    def family(self):
        return self.fam, self.n

    def decompose(self, w, k, *, stats=None):
        return matroid_base_decompose(self.f, self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        return is_base(self.f, x)

    def contains_scaled(self, w, k):
        return _hpoly_contains_scaled(self.fam.polyhedron, w, k)

    def integer_points(self, box_=None):
        return _boxed(bases(self.f), box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return dimension(self.fam.polyhedron)


def _presentation(d: dict) -> GammoidPresentation:
    return GammoidPresentation.create(d["vertices"], [tuple(a) for a in d["arcs"]], d["U"], d["S"])


class GammoidIntersectionInst(Instance):
    kind = "gammoid_intersection"

    def __init__(self, doc):
        super().__init__(doc)
        self.m1 = _presentation(doc["m1"])
        self.m2 = _presentation(doc["m2"])
        self.phi = doc.get("phi")
        self.net = glue(self.m1, self.m2, self.phi)
        if "k" in doc and doc["k"] != self.net.k:
            raise InvalidInstance(f"declared rank k={doc['k']} but the gammoids have rank {self.net.k}")
        self.Q = self.net.flow_polytope()
        self.n = len(self.net.elements)

    def polyhedron(self):
        return self.Q

    def family(self):
        return tu_family(self.Q), self.n

    def decompose(self, w, k, *, stats=None):
        return common_base_decompose(self.net, self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        if any(v not in (0, 1) for v in x) or len(x) != self.n:
            return False
        B = [s for s, v in zip(self.m1.S, x) if v]
        phi = self.phi or {s: s for s in self.m1.S}
        return self.m1.is_base(B) and self.m2.is_base([next(t for t in self.m2.S if str(t) == str(phi[s])) for s in B])

    def contains_scaled(self, w, k):
        return _fiber_nonempty(self.Q, w, k)

    def integer_points(self, box_=None):
        return _boxed(common_bases(self.m1, self.m2, self.phi), box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return projected_dimension(self.Q, self.n)


def _fiber_nonempty(P: HPolyhedron, w, k) -> bool:
    """Is ``w`` in ``k`` times the projection of ``P`` onto its first ``len(w)`` coordinates?"""
    pad = [None] * (P.n - len(w))
    pin = box([int(v) for v in w] + pad, [int(v) for v in w] + pad)
    return lp_solve(intersect(scale(P, k), pin), [0] * P.n).status != INFEASIBLE


class VerticesInst(Instance):
    kind = "vertices"

    def __init__(self, doc):
        super().__init__(doc)
        _rect(doc["vertices"], "vertices")
        self.inst = VertexInstance.create(doc["vertices"])
        self.n = self.inst.n

    @functools.cached_property
    def points(self):
        return enumerate_integer_points(self.inst)

    def polyhedron(self):
        return hull_polyhedron(self.points)

    def decompose(self, w, k, *, stats=None):
        w = self._check_w(w, k)
        found = min_decomposition(self.points, w, k, require_affine_independence=True)
        if found is not None:
            return found[1]
        if not hull_contains(self.inst.vertices, w, k):
            raise NotMember(f"{list(w)} is not in {k}P")
        reason = "is a sum of" if reachable(self.points, w, k) else "is not even a sum of"
        raise NoIndependentDecomposition(f"{list(w)} {reason} {k} integer points, but no affinely independent decomposition exists")

    def member_point(self, x):
        return tuple(x) in set(self.points)

    def contains_scaled(self, w, k):
        return hull_contains(self.inst.vertices, w, k)

    def integer_points(self, box_=None):
        return enumerate_integer_points(self.inst, box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return affine_rank(self.inst.vertices)


def hull_polyhedron(points) -> HPolyhedron:
    """H-description of ``conv(points)`` from :class:`HullFacets`, in the original coordinates."""
    H = HullFacets(points)
    rows, rhs = [], []
    for a, beta in H.equations:
        rows.append(list(a))
        rhs.append(beta)
    eq = range(len(rows))
    for a, beta in H.facets:
        full = [0] * H.n
        for j, c in zip(H.coords, a):
            full[j] = c
        rows.append(full)
        rhs.append(beta)
    return HPolyhedron(rows or [[0] * H.n], rhs or [0], n=H.n, eq_rows=eq)


class ProjectionInst(Instance):
    kind = "projection"

    def __init__(self, doc):
        super().__init__(doc)
        self.inner = from_dict(doc["instance"])
        self.fam, self.base_m = self.inner.family()
        self.m = int(doc["keep_coords"])
        if not 0 <= self.m <= self.base_m:
            raise InvalidInstance(f"keep_coords must be in 0..{self.base_m}")
        self.n = self.m
        self.tu_verified = self.inner.tu_verified

    def polyhedron(self):
        return hull_polyhedron(self.integer_points())

    def decompose(self, w, k, *, stats=None):
        return project_decompose(self.fam, self.m, self._check_w(w, k), k, stats=stats)

    def member_point(self, x):
        if len(x) != self.m:
            return False
        return _fiber_nonempty(self.fam.polyhedron, x, 1)

    def contains_scaled(self, w, k):
        return _fiber_nonempty(self.fam.polyhedron, w, k)

    def integer_points(self, box_=None):
        return _boxed({tuple(p[: self.m]) for p in self.inner.integer_points()}, box_)

    @functools.lru_cache(maxsize=None)
    def dim(self):
        return projected_dimension(self.fam.polyhedron, self.m)


TYPES = {
    cls.kind: cls
    for cls in (TuInst, NtuInst, PolymatroidInst, MatroidInst, GammoidIntersectionInst, VerticesInst, ProjectionInst)
}


def from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict) or doc.get("type") not in TYPES:
        raise InvalidInstance(f"instance needs a \"type\" among {sorted(TYPES)}")
    try:
        jsonschema.validate(doc, _schema(doc["type"]))
    except jsonschema.ValidationError as e:
        where = "/".join(map(str, e.absolute_path)) or "<root>"
        raise InvalidInstance(f"{where}: {e.message}") from None
    return TYPES[doc["type"]](doc)


def load(path: str | Path) -> Instance:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidInstance(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return from_dict(doc)


def bundled(name: str) -> Path:
    """Path of an instance file shipped with the package (e.g. ``"u23.json"``)."""
    return Path(__file__).parent / "data" / name
