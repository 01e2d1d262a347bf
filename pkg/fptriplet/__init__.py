"""Exact first-passage triplets (crossing time, undershoot, overshoot) of subordinators."""
from .boundary import Boundary, ConstantBoundary, DriftAdjustedBoundary, LinearBoundary
from .engine import sample_crossing, sample_many
from .errors import FptripletError
from .measures import ExponentialMeasure, FiniteMeasure, NullMeasure, ParetoMeasure, PointMeasure
from .model import CrossingTriplet, EngineConfig, SubordinatorSpec, drift_adjust
from .rng import RngStream

__all__ = [
    "Boundary",
    "ConstantBoundary",
    "CrossingTriplet",
    "DriftAdjustedBoundary",
    "EngineConfig",
    "ExponentialMeasure",
    "FiniteMeasure",
    "FptripletError",
    "LinearBoundary",
    "NullMeasure",
    "ParetoMeasure",
    "PointMeasure",
    "RngStream",
    "SubordinatorSpec",
    "drift_adjust",
    "sample_crossing",
    "sample_many",
]
