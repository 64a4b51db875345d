"""Planar convex geometry: cones, convex sets, half-planes and direction grids."""

from .cone import Cone2, cone_intersection, cone_sum, conic_hull, polar_cone
from .convex import (
    ConvexSet2,
    convex_hull,
    hausdorff,
    hull_ccw,
    minkowski_combination,
    minkowski_sum,
)
from .grid import DirectionGrid
from .halfspace import HalfSpace2, intersect_halfspaces

__all__ = [
    "Cone2",
    "ConvexSet2",
    "DirectionGrid",
    "HalfSpace2",
    "cone_intersection",
    "cone_sum",
    "conic_hull",
    "convex_hull",
    "hausdorff",
    "hull_ccw",
    "intersect_halfspaces",
    "minkowski_combination",
    "minkowski_sum",
    "polar_cone",
]
