"""Graph burning: precomputation, a centrality-seeded genetic search and tooling."""
from .burning import (
    BurningSequence,
    burning_distance,
    exact_burning_number,
    is_valid_burning_sequence,
    sequence_cost,
    simulate_burn,
)
from .driver import SolveReport, cbag_decision, find_burning_length
from .ga import GaConfig, run_ga
from .graph import Graph, bfs, connected_components, parse_edge_list, read_edge_list
from .precompute import compute_apsp, compute_betweenness, compute_middle_matrix, precompute

__version__ = "0.1.0"

__all__ = [
    "BurningSequence",
    "GaConfig",
    "Graph",
    "SolveReport",
    "bfs",
    "burning_distance",
    "cbag_decision",
    "compute_apsp",
    "compute_betweenness",
    "compute_middle_matrix",
    "connected_components",
    "exact_burning_number",
    "find_burning_length",
    "is_valid_burning_sequence",
    "parse_edge_list",
    "precompute",
    "read_edge_list",
    "run_ga",
    "sequence_cost",
    "simulate_burn",
]
