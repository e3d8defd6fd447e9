"""Matching multicut toolkit: exact solvers, kernels, enumeration."""

from .cuts import Multicut, ViolationReport, canonicalize, max_parts_of_cut, validate_multicut
from .graphs import Graph, parse_graph, write_graph

__all__ = [
    "Graph",
    "Multicut",
    "ViolationReport",
    "canonicalize",
    "max_parts_of_cut",
    "parse_graph",
    "validate_multicut",
    "write_graph",
]

__version__ = "0.1.0"
