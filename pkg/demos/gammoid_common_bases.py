"""Common bases of two gammoids via a glued flow network.

Both gammoids live on S = {a, b, c}.  The glued network carries one unit of
flow per path; the element arcs used by a value-k flow form a common base,
so decomposing a target in k times the common-base polytope is a projection
of a flow decomposition.
"""

from __future__ import annotations

from icpkit import GammoidPresentation, common_base_decompose, glue
from icpkit.gammoid import common_bases, flow_supports


def main() -> None:
    m1 = GammoidPresentation.create(["u", "v", "a", "b", "c"], [("u", "a"), ("u", "b"), ("v", "b"), ("v", "c")], ["u", "v"], ["a", "b", "c"])
    m2 = GammoidPresentation.create(["x", "a", "b", "c"], [("x", "a"), ("x", "c"), ("b", "c")], ["x", "b"], ["a", "b", "c"])
    net = glue(m1, m2)
    print(f"ranks {m1.rank} and {m2.rank}; glued network: {len(net.nodes)} nodes, {len(net.arcs)} arcs")
    B = common_bases(m1, m2)
    print("common bases from the rank tables:", B)
    print("element patterns of value-k flows:", sorted(flow_supports(net, max_arcs=23)))

    w, k = (2, 3, 1), 3
    dec = common_base_decompose(net, w, k)
    print(f"\nw = {w} as a sum of {k} common bases:")
    for p, m in zip(dec.points, dec.multiplicities):
        print(f"  {m} x {[s for s, x in zip(net.elements, p) if x]}")


if __name__ == "__main__":
    main()
