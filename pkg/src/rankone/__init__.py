"""Rank-one density for banded biorthogonal systems, decided through flows on their graphs."""

from .bridge import OperatorMatrix, annihilation_check, flow_to_operator, operator_to_flow
from .decide import (ExplicitFamily, Kind, LarsonWogenFamily, Verdict, cross_validate,
                     decide, frontier_distance_profile)
from .errors import RankOneError
from .flows import (PseudoFlow, eliminate_positive_cycles, flow_from_ray, flow_stats,
                    is_preserving)
from .graph import BipartiteGraph, BNetwork, build_bipartite, merge_source_sink, network_for
from .kernels import BACKEND
from .layers import RayWitness, build_layers, extract_ray
from .system import (BandSystem, biorthogonality_check, from_f_entries, make_larson_wogen,
                     validate_system)
from .weights import Tail, WeightSequenceSpec

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BandSystem", "BipartiteGraph", "BNetwork", "ExplicitFamily", "Kind",
    "LarsonWogenFamily", "OperatorMatrix", "PseudoFlow", "RankOneError", "RayWitness", "Tail",
    "Verdict", "WeightSequenceSpec", "annihilation_check", "biorthogonality_check",
    "build_bipartite", "build_layers", "cross_validate", "decide", "eliminate_positive_cycles",
    "extract_ray", "flow_from_ray", "flow_stats", "flow_to_operator", "from_f_entries",
    "frontier_distance_profile", "is_preserving", "make_larson_wogen", "merge_source_sink",
    "network_for", "operator_to_flow", "validate_system",
]
