"""Exact rational polyhedral kernel."""

from .complex import PolyhedralComplex, common_refinement, covers, same_support, subdivide, support_contains
from .cone import Cone, double_description, dual_cone, faces, relint_contains
from .extrational import INF, ext, ext_min, is_inf
from .linalg import Subspace, as_fraction, dot, nullspace, primitive, qvec, rank, rref
from .maps import LinearMap, linear_image, preimage
from .polyhedron import Polyhedron, recession_cone


def intersect(a, b):
    """Intersection of two cones or two polyhedra."""
    return a.intersection(b)


__all__ = [
    "Cone", "INF", "LinearMap", "PolyhedralComplex", "Polyhedron", "Subspace",
    "as_fraction", "common_refinement", "covers", "dot", "double_description", "dual_cone",
    "ext", "ext_min", "faces", "intersect", "is_inf", "linear_image", "nullspace", "preimage",
    "primitive", "qvec", "rank", "recession_cone", "relint_contains", "rref", "same_support",
    "subdivide", "support_contains",
]
