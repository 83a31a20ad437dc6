"""The ten-vertex 0/1 polytope in dimension 5: IDP holds, ICP fails, rank reaches 7.

The search grows k and records, per k, the smallest support size that
covers every sum of k vertices.  With ``--kmax 20`` (about a minute) it finds
a target needing 7 distinct points, one more than dim + 1 = 6.
"""

from __future__ import annotations

import argparse
import time

from icpkit import caratheodory_rank_search, check_idp, min_decomposition
from icpkit.instances import bundled, load


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=8)
    args = ap.parse_args()
    pts = load(bundled("bruns.json")).integer_points()
    print(f"{len(pts)} integer points, all of them vertices")

    t0 = time.perf_counter()
    print(f"IDP up to k={args.kmax}: {check_idp(pts, args.kmax).holds}  ({time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    rep = caratheodory_rank_search(pts, args.kmax, stop_at=7)
    print(f"worst support size per k: {rep.worst_t}  ({time.perf_counter() - t0:.1f}s)")
    print(f"Caratheodory rank lower bound: {rep.caratheodory_rank_lower_bound}")

    w, k = (9, 8, 8, 8, 8), 20
    t, dec = min_decomposition(pts, w, k)
    print(f"\nk={k}, w={w} needs {t} points:")
    for p, m in zip(dec.points, dec.multiplicities):
        print(f"  {m:2d} x {p}")
    indep = min_decomposition(pts, w, k, require_affine_independence=True)
    print("affinely independent decomposition exists:", indep is not None)


if __name__ == "__main__":
    main()
