"""Invariants of self-similar actions on graphs and k-graphs."""
from .action import SelfSimilarSystem, close_group, is_pseudo_free, trivially_acting_pairs, vertex_stabilizer
from .errors import PreconditionError, SSGraphError, ValidationError
from .graph import Graph, Path, build_graph
from .io import build_system, export_spec, load_system
from .lattice import IntegerLattice
from .spectrum import is_simple, prim_spectrum, quasi_orbit_space
from .tails import enumerate_maximal_g_tails

__all__ = [
    "Graph", "IntegerLattice", "Path", "PreconditionError", "SSGraphError", "SelfSimilarSystem",
    "ValidationError", "build_graph", "build_system", "close_group", "enumerate_maximal_g_tails",
    "export_spec", "is_pseudo_free", "is_simple", "load_system", "prim_spectrum",
    "quasi_orbit_space", "trivially_acting_pairs", "vertex_stabilizer",
]
