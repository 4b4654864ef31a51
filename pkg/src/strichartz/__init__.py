"""Exact Strichartz exponent regions and numerical checks for the free Schrodinger equation."""

from .exceptions import (
    DegenerateFitError,
    GridMismatchError,
    HorizonError,
    ParseError,
    ScaleRangeError,
    StrichartzError,
    UnderResolvedError,
)
from .exponents import Branch, GapRegion, Pair, Quad, RegionClassifier, Verdict
from .atoms import DyadicAtomDecomposer
from .estimator import LogLogSlopeRegressor, MixedNormSpec, NormOrder, SweepReport
from .propagator import Backend, Field, NodeSet, SpaceTimeField, SpatialGrid

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "Branch",
    "DegenerateFitError",
    "DyadicAtomDecomposer",
    "Field",
    "GapRegion",
    "GridMismatchError",
    "HorizonError",
    "LogLogSlopeRegressor",
    "MixedNormSpec",
    "NodeSet",
    "NormOrder",
    "Pair",
    "ParseError",
    "Quad",
    "RegionClassifier",
    "ScaleRangeError",
    "SpaceTimeField",
    "SpatialGrid",
    "StrichartzError",
    "SweepReport",
    "UnderResolvedError",
    "Verdict",
]
