"""Exact verification that the matching polytope of a small graph has geometric rank at most 1."""

from .graph import Graph, GraphFormatError, GuardExceeded, Matching, PreconditionError, parse_graph, read_graph
from .polytope import FaceDescriptor, Inequality, Kind, enumerate_facets, face_dimension, polytope_dimension
from .rank import RankReport, is_minimal_formulation, lemma_minimal_formulation, rank_hierarchy, \
    rank_zero_facets, verify_rank_at_most_one
from .witness import WitnessResult, brute_force_witness, witness_all, witness_matching

__version__ = "0.1.0"

__all__ = [
    "Graph", "GraphFormatError", "GuardExceeded", "Matching", "PreconditionError", "parse_graph", "read_graph",
    "FaceDescriptor", "Inequality", "Kind", "enumerate_facets", "face_dimension", "polytope_dimension",
    "RankReport", "is_minimal_formulation", "lemma_minimal_formulation", "rank_hierarchy", "rank_zero_facets",
    "verify_rank_at_most_one", "WitnessResult", "brute_force_witness", "witness_all", "witness_matching",
]
