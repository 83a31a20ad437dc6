"""Exact Integer Carathéodory decompositions.

Write an integer vector ``w`` in ``kP`` as ``n_1 x_1 + ... + n_t x_t`` with
affinely independent integer points ``x_i`` of ``P`` and ``sum(n_i) == k``,
for polyhedra given by TU matrices, NTU matrices, submodular functions,
matroids, gammoid intersections and their coordinate projections.
"""

from .core import Decomposition, PFamily, icp_decompose, integer_decompose, project_decompose, validate
from .errors import (
    AffineDependence,
    EmptyPolyhedron,
    IcpError,
    InvalidInstance,
    NotBoxIntegral,
    NotMember,
    ResourceCapExceeded,
)
from .gammoid import GammoidPresentation, GluedFlowNetwork, common_base_decompose, glue
from .instances import from_dict, load
from .linalg import Rat, lp_solve, rank
from .oracle import (
    RankReport,
    VertexInstance,
    caratheodory_rank_search,
    check_icp,
    check_idp,
    enumerate_integer_points,
    min_decomposition,
)
from .polyhedron import (
    HPolyhedron,
    check_box_integral,
    integral_vertex,
    intersect,
    minimal_face_containing,
    reflect_shift,
    scale,
)
from .polymatroid import MatroidSpec, SubmodularFn, matroid_base_decompose, polymatroid_family, rank_from_constructor
from .tu import NtuInstance, TuInstance, check_tu, ntu_icp_decompose, ntu_membership, tu_family

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
