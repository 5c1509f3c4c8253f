"""Fully dynamic low out-degree edge orientation: algorithms, exact oracle, benchmarks."""

from .algorithms import (
    BFS,
    AdaptiveBrodalFagerberg,
    AlgorithmConfig,
    BrodalFagerberg,
    DescendingDegrees,
    KFlips,
    Naive,
    Orienter,
    RandomPath,
)
from .exact import ExactResult, StaticGraph, brute_force_optimum, exact_optimum, feasible_delta
from .graph_core import DirectedPath, MaxDegreeTracker, MinIdTracker, OrientedGraph

__all__ = [
    "AdaptiveBrodalFagerberg",
    "AlgorithmConfig",
    "BFS",
    "BrodalFagerberg",
    "DescendingDegrees",
    "DirectedPath",
    "ExactResult",
    "KFlips",
    "MaxDegreeTracker",
    "MinIdTracker",
    "Naive",
    "OrientedGraph",
    "Orienter",
    "RandomPath",
    "StaticGraph",
    "brute_force_optimum",
    "exact_optimum",
    "feasible_delta",
]
