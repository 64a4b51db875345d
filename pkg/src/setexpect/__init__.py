"""Set-valued expectations of planar random convex sets."""

from .errors import CapacityError, DomainError, EmptyResultError
from .geometry import Cone2, ConvexSet2, DirectionGrid, HalfSpace2, hausdorff
from .numeric_expectation import AVaR, DensityBand, Expectation, MaxOfN
from .random_set import RandomConvexSet, Selection, selection_expectation
from .risk_depth import Portfolio, SampleOfSets, depth, flag_outliers, make_portfolio
from .scenario import Partition, RandomScalar, RandomVector2, ScenarioSpace
from .set_expectation import (
    NonlinearSpec,
    make_spec,
    sublinear,
    superlinear_min_lower,
    superlinear_reduced_max,
)

__all__ = [
    "AVaR",
    "CapacityError",
    "Cone2",
    "ConvexSet2",
    "DensityBand",
    "DirectionGrid",
    "DomainError",
    "EmptyResultError",
    "Expectation",
    "HalfSpace2",
    "MaxOfN",
    "NonlinearSpec",
    "Partition",
    "Portfolio",
    "RandomConvexSet",
    "RandomScalar",
    "RandomVector2",
    "SampleOfSets",
    "ScenarioSpace",
    "Selection",
    "depth",
    "flag_outliers",
    "hausdorff",
    "make_portfolio",
    "make_spec",
    "selection_expectation",
    "sublinear",
    "superlinear_min_lower",
    "superlinear_reduced_max",
]
