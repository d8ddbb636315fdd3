"""Densities, lex products and the edge/P4 boundary curve of lex families."""

from .canon import are_isomorphic_labeled, canonical_form, canonical_graph, graph_from_key
from .constructions import (
    LexSpec,
    bar,
    bipartite_double,
    blowup,
    decorations,
    implant,
    lex_density,
    lex_product,
    moment,
    product_density,
    tilde_blowup,
)
from .density import density, labeled_density, strong_hom_count, weighted_density
from .expr import parse_expression, to_expression
from .graphs import Graph, LabeledGraph, WeightedGraph, named_graph, parse_graph
from .quantum import QuantumGraph, evaluate, product, unlabel
from .structure import is_asymmetric, is_folding, is_homogeneous, is_prime, is_stringent, minimal_module

__all__ = [
    "Graph", "LabeledGraph", "WeightedGraph", "LexSpec", "QuantumGraph",
    "named_graph", "parse_graph", "parse_expression", "to_expression",
    "canonical_form", "canonical_graph", "graph_from_key", "are_isomorphic_labeled",
    "density", "weighted_density", "labeled_density", "strong_hom_count",
    "product", "unlabel", "evaluate",
    "blowup", "tilde_blowup", "implant", "decorations", "bar", "bipartite_double",
    "lex_product", "lex_density", "product_density", "moment",
    "is_homogeneous", "minimal_module", "is_prime", "is_asymmetric", "is_stringent", "is_folding",
]
