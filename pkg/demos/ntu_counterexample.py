"""An integer polytope that is not box-integer, decomposed through its NTU description.

P = conv{(0,0), (0,1), (1,0), (2,0)} = {x >= 0, x1 + 2 x2 <= 2}.  Cutting
with the box x1 = 1 leaves the vertex (1, 1/2), so the generic recursion can
break down, while the NTU route (split by the value of a^T x) always works.
"""

from __future__ import annotations

import itertools

from icpkit import NotBoxIntegral, NotMember, check_box_integral, icp_decompose, ntu_icp_decompose
from icpkit.errors import EmptyPolyhedron
from icpkit.instances import bundled, load


def main() -> None:
    inst = load(bundled("ntu_counterexample.json"))
    ntu = inst.inst
    print("A =", ntu.A, " b =", ntu.b)
    rep = check_box_integral(ntu.relaxation)
    print(f"box-integral: {rep.box_integral}; box {rep.witness_lower}..{rep.witness_upper} has vertex "
          f"({', '.join(str(v) for v in rep.witness_vertex)})")

    generic_failures = 0
    for k in range(1, 5):
        for w in itertools.product(range(5), repeat=2):
            try:
                dec = ntu_icp_decompose(ntu, w, k)
            except NotMember:
                continue
            try:
                icp_decompose(ntu.relaxation, w, k)
            except (NotBoxIntegral, EmptyPolyhedron):
                generic_failures += 1
            if k == 3:
                terms = " + ".join(f"{m}*{p}" for p, m in zip(dec.points, dec.multiplicities))
                print(f"  k=3  w={w}: {terms}")
    print(f"generic recursion failed on {generic_failures} targets that the NTU route decomposed")


if __name__ == "__main__":
    main()
