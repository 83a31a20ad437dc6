"""Instance corpus shared by the acceptance suite and the cross-module tests."""

from __future__ import annotations

import zlib

import numpy as np

from icpkit.instances import from_dict

_BOX3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]]

TU = [
    {"type": "tu", "id": "tu_square", "A": [[1, 0], [0, 1], [-1, 0], [0, -1]], "b": [1, 1, 0, 0]},
    {"type": "tu", "id": "tu_triangle", "A": [[-1, 0], [0, -1], [1, 1]], "b": [0, 0, 1]},
    {"type": "tu", "id": "tu_interval3", "A": [[1, 1, 0], [0, 1, 1], [1, 1, 1], [-1, 0, 0], [0, -1, 0], [0, 0, -1]], "b": [1, 1, 2, 0, 0, 0]},
    {
        "type": "tu",
        "id": "tu_matching_k22",
        "A": [[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        "b": [1, 1, 1, 1, 0, 0, 0, 0],
    },
    {
        "type": "tu",
        "id": "tu_interval5",
        "A": [
            [1, 1, 1, 0, 0],
            [0, 1, 1, 1, 0],
            [0, 0, 0, 1, 1],
            [-1, 0, 0, 0, 0],
            [0, -1, 0, 0, 0],
            [0, 0, -1, 0, 0],
            [0, 0, 0, -1, 0],
            [0, 0, 0, 0, -1],
        ],
        "b": [2, 1, 1, 0, 0, 0, 0, 0],
    },
    {"type": "tu", "id": "tu_box_2x1", "A": [[1, 0], [0, 1], [-1, 0], [0, -1]], "b": [2, 1, 0, 0]},
]

NTU = [
    {"type": "ntu", "id": "ntu_counterexample", "A_hat": [[-1, 0], [0, -1], [1, 0]], "row_index": 1, "c": [0, 0, -2], "b": [0, 0, 2]},
    {"type": "ntu", "id": "ntu_wedge", "A_hat": [[-1, 0], [0, -1], [1, 0], [0, 1]], "row_index": 2, "c": [0, 0, 0, 2], "b": [0, 0, 2, 3]},
    {
        "type": "ntu",
        "id": "ntu_3d",
        "A_hat": [[-1, 0, 0], [0, -1, 0], [0, 0, -1], [1, 1, 0], [0, 1, 1]],
        "row_index": 3,
        "c": [0, 0, 0, 0, 1],
        "b": [0, 0, 0, 2, 2],
    },
]

POLYMATROID = [
    {"type": "polymatroid", "id": "pm_u23_independence", "kind": "polymatroid", "n": 3, "values": [0, 1, 1, 2, 1, 2, 2, 2]},
    # f(U) = g(|U|) with concave g = (0, 2, 3, 4)
    {"type": "polymatroid", "id": "pm_concave_base", "kind": "base", "n": 3, "values": [0, 2, 2, 3, 2, 3, 3, 4]},
    # f(U) = min(|U ∩ {0,1}|, 1) + |U ∩ {2,3}|
    {
        "type": "polymatroid",
        "id": "pm_sum_polymatroid",
        "kind": "polymatroid",
        "n": 4,
        "values": [0, 1, 1, 1, 1, 2, 2, 2, 1, 2, 2, 2, 2, 3, 3, 3],
    },
]

MATROID = [
    {"type": "matroid", "id": "u23", "constructor": {"kind": "uniform", "n": 3, "r": 2}},
    {"type": "matroid", "id": "u36", "constructor": {"kind": "uniform", "n": 6, "r": 3}},
    {"type": "matroid", "id": "graphic_k4", "constructor": {"kind": "graphic", "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}},
    {"type": "matroid", "id": "partition_3x2", "constructor": {"kind": "partition", "blocks": [[0, 1], [2, 3], [4, 5]], "capacities": [1, 1, 1]}},
    {"type": "matroid", "id": "parallel_pair", "constructor": {"kind": "explicit_bases", "n": 4, "bases": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3]]}},
    {
        "type": "matroid",
        "id": "gammoid_matroid",
        "constructor": {"kind": "gammoid", "vertices": ["u", "v", "a", "b", "c", "d"], "arcs": [["u", "a"], ["u", "b"], ["v", "b"], ["v", "c"], ["v", "d"]], "U": ["u", "v"], "S": ["a", "b", "c", "d"]},
    },
]

GAMMOID = [
    {
        "type": "gammoid_intersection",
        "id": "gi_pair",
        "m1": {"vertices": ["u", "a", "b", "c"], "arcs": [["u", "a"], ["u", "b"], ["u", "c"]], "U": ["u"], "S": ["a", "b", "c"]},
        "m2": {"vertices": ["v", "a", "b", "c"], "arcs": [["v", "a"], ["v", "b"]], "U": ["v"], "S": ["a", "b", "c"]},
    },
    {
        "type": "gammoid_intersection",
        "id": "gi_free2",
        "m1": {"vertices": ["a", "b"], "arcs": [], "U": ["a", "b"], "S": ["a", "b"]},
        "m2": {"vertices": ["a", "b"], "arcs": [], "U": ["a", "b"], "S": ["a", "b"]},
    },
    {
        "type": "gammoid_intersection",
        "id": "gi_chain",
        "m1": {"vertices": ["a", "b", "c"], "arcs": [["a", "c"]], "U": ["a", "b"], "S": ["a", "b", "c"]},
        "m2": {"vertices": ["a", "b", "c"], "arcs": [["c", "a"]], "U": ["b", "c"], "S": ["a", "b", "c"]},
    },
]

PROJECTION = [
    {"type": "projection", "id": "proj_cube", "keep_coords": 2, "instance": {"type": "tu", "A": _BOX3, "b": [1, 1, 1, 0, 0, 0]}},
    {"type": "projection", "id": "proj_u23", "keep_coords": 2, "instance": {"type": "matroid", "constructor": {"kind": "uniform", "n": 3, "r": 2}}},
    {"type": "projection", "id": "proj_k4_trees", "keep_coords": 3, "instance": MATROID[2]},
    {"type": "projection", "id": "proj_gi_chain", "keep_coords": 2, "instance": GAMMOID[2]},
]

CORPUS = TU + NTU + POLYMATROID + MATROID + GAMMOID + PROJECTION

KMAX = 5
SAMPLES = 10


def instances():
    return [(doc["id"], from_dict(doc)) for doc in CORPUS]


def _rng(name: str, k: int) -> np.random.Generator:
    return np.random.default_rng(zlib.crc32(f"{name}/{k}".encode()))


def sample_targets(name: str, points, k: int, count: int = SAMPLES) -> list[tuple[int, ...]]:
    """Distinct sums of ``k`` integer points (all of them when fewer than ``count`` exist)."""
    P = np.array(points, dtype=np.int64)
    rng = _rng(name, k)
    seen: dict[tuple, None] = {}
    for _ in range(count * 40):
        idx = rng.integers(0, len(P), size=k)
        seen.setdefault(tuple(int(v) for v in P[idx].sum(axis=0)), None)
        if len(seen) >= count:
            break
    return list(seen)


def sample_outside(name: str, points, k: int, count: int = 3) -> list[tuple[int, ...]]:
    """Random lattice points of the (slightly enlarged) box ``k * bbox``; most are not in ``kP``."""
    P = np.array(points, dtype=np.int64)
    lo, hi = k * P.min(axis=0) - 1, k * P.max(axis=0) + 1
    rng = _rng("out/" + name, k)
    return [tuple(int(v) for v in rng.integers(lo, hi + 1)) for _ in range(count)]
