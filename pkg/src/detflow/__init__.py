"""Unicast capacity of layered linear deterministic relay networks.

``find_paths`` grows linearly independent source-destination paths with
in-layer rewiring; ``min_cut_exhaustive`` is the brute-force cross-check and
``codec`` turns the paths into a decodable relaying scheme.
"""

from .codec import build_relay_plan, decode, end_to_end_matrix, transmit
from .errors import DetflowError
from .field import Field, field_new
from .linalg import Matrix, find_l, is_full_rank_extension, perfect_matching, rank, solve_left
from .netio import load, load_fixture, save
from .network import Channel, GainLayout, Network, Node, RandomParams, from_gains, random_network, transfer_matrix, validate
from .oracle import Cut, capacity_bits, cut_value, min_cut_exhaustive
from .pathfinder import PathSet, Trace, find_paths

__all__ = [
    "Channel", "Cut", "DetflowError", "Field", "GainLayout", "Matrix", "Network", "Node", "PathSet",
    "RandomParams", "Trace", "build_relay_plan", "capacity_bits", "cut_value", "decode",
    "end_to_end_matrix", "field_new", "find_l", "find_paths", "from_gains", "is_full_rank_extension",
    "load", "load_fixture", "min_cut_exhaustive", "perfect_matching", "random_network", "rank", "save",
    "solve_left", "transfer_matrix", "transmit", "validate",
]
