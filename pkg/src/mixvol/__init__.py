"""Dilation derivatives for nonconvex structuring sets, their limit shapes,
and the matching discrete isoperimetric problems on lattice graphs."""

from .errors import MixvolError
from .geom2d import (
    ConvexPolygon,
    Polygon,
    RegionUnion,
    area,
    convex_hull,
    minkowski_convex,
    regular_disc,
    union_area,
)
from .isoperimetric import SegmentFamily, wulff_shape, zonotope
from .lattice import (
    LatticeSet,
    OptResult,
    PLGGraph,
    edge_boundary,
    grid_graph,
    solve_exact,
    solve_heuristic,
    validate_plg,
    vertex_boundary,
)
from .mixedvol import (
    DEstimate,
    SeriesFit,
    d_boundary_integral,
    d_finite_difference,
    series_fit,
    sum_volume,
)
from .structuring import StructuringSet, hull, support

__version__ = "0.1.0"

__all__ = [
    "ConvexPolygon",
    "DEstimate",
    "LatticeSet",
    "MixvolError",
    "OptResult",
    "PLGGraph",
    "Polygon",
    "RegionUnion",
    "SegmentFamily",
    "SeriesFit",
    "StructuringSet",
    "area",
    "convex_hull",
    "d_boundary_integral",
    "d_finite_difference",
    "edge_boundary",
    "grid_graph",
    "hull",
    "minkowski_convex",
    "regular_disc",
    "series_fit",
    "solve_exact",
    "solve_heuristic",
    "sum_volume",
    "support",
    "union_area",
    "validate_plg",
    "vertex_boundary",
    "wulff_shape",
    "zonotope",
]
