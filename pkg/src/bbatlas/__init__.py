"""Combinatorics of the torus-fixed loci and plus cells of genus-0 stable map spaces to P^r."""

from bbatlas.graph import (
    DecoratedGraph,
    Edge,
    Vertex,
    automorphisms,
    canonical_form,
    canonical_key,
    classify,
    codimension,
    negative_weight_count,
    validate,
)
from bbatlas.enumeration import enumerate_graphs, fixed_locus_spec, maximal_graph
from bbatlas.poset import apply_move, length, leq, level_function, successors
from bbatlas.cohomology import betti, poincare_fixed_locus, poincare_mbar, poincare_moduli
from bbatlas.poly import PoincarePoly

__all__ = [
    "DecoratedGraph",
    "Edge",
    "PoincarePoly",
    "Vertex",
    "apply_move",
    "automorphisms",
    "betti",
    "canonical_form",
    "canonical_key",
    "classify",
    "codimension",
    "enumerate_graphs",
    "fixed_locus_spec",
    "length",
    "leq",
    "level_function",
    "maximal_graph",
    "negative_weight_count",
    "poincare_fixed_locus",
    "poincare_mbar",
    "poincare_moduli",
    "successors",
    "validate",
]
