"""Combinatorial search for graphs that can host multi-time Landau-Zener models."""

from .canon import canonical_form, canonical_graph, is_isomorphic
from .gamma import GammaConfig, GammaStatus, build_gamma_system, solve_gamma, verify_gamma_assignment
from .graph import Graph, GraphError, parse_graph6
from .orientation import (
    CycleClass,
    Orientation,
    all_up_orientation,
    branch_search,
    build_r_system,
    classify_cycle,
)
from .rules import is_candidate
from .search import Catalog, SearchConfig, enumerate_by_layers, enumerate_candidates, minimal_seeds
from .verifier import MTLZData, apply_cycle_transform, check_cycle_property, check_multipath_property

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CycleClass",
    "GammaConfig",
    "GammaStatus",
    "Graph",
    "GraphError",
    "MTLZData",
    "Orientation",
    "SearchConfig",
    "all_up_orientation",
    "apply_cycle_transform",
    "branch_search",
    "build_gamma_system",
    "build_r_system",
    "canonical_form",
    "canonical_graph",
    "check_cycle_property",
    "check_multipath_property",
    "classify_cycle",
    "enumerate_by_layers",
    "enumerate_candidates",
    "is_candidate",
    "is_isomorphic",
    "minimal_seeds",
    "parse_graph6",
    "solve_gamma",
    "verify_gamma_assignment",
]
