"""Exact tools for the minimum 5-cycle density at a given edge density."""

from .smallgraph import Graph, SmallGraph, count_c5, parse_graph6, write_graph6

__all__ = ["Graph", "SmallGraph", "count_c5", "parse_graph6", "write_graph6"]
__version__ = "0.1.0"
