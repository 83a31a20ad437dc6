"""Spanning trees of K4: write a multiset of edge counts as a sum of few trees.

Every vector w with w(E) = 3k in k * B(K4) splits into k spanning trees, and
the decomposition uses affinely independent trees, so at most dim + 1 = 6 of
them (never more than the 6 edges either).
"""

from __future__ import annotations

import argparse

from icpkit import MatroidSpec, matroid_base_decompose, rank_from_constructor
from icpkit.polymatroid import bases

EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--w", default="3,3,2,2,3,2", help="edge multiplicities, comma-separated")
    ap.add_argument("--k", type=int, default=5)
    args = ap.parse_args()
    w = [int(v) for v in args.w.split(",")]

    spec = MatroidSpec.graphic(EDGES)
    f = rank_from_constructor(spec)
    print(f"K4 has {len(bases(f))} spanning trees; rank {f.values[f.full]}")
    dec = matroid_base_decompose(spec, w, args.k)
    print(f"w = {w} as a sum of {args.k} trees using {dec.t} distinct trees:")
    for tree, m in zip(dec.points, dec.multiplicities):
        picked = [EDGES[j] for j, x in enumerate(tree) if x]
        print(f"  {m} x {picked}")
    print("affinely independent:", dec.is_affinely_independent())


if __name__ == "__main__":
    main()
