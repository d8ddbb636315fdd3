from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from oracles import brute_automorphisms, brute_homogeneous_sets, brute_is_prime
from lexboundary.graphs import Graph, all_graphs, named_graph
from lexboundary.structure import (
    is_asymmetric,
    is_folding,
    is_homogeneous,
    is_prime,
    is_stringent,
    is_trivial_map,
    minimal_module,
)


def test_small_examples():
    assert is_prime(named_graph("P4"))
    assert is_prime(named_graph("K2"))  # no set strictly between 1 and 2 vertices
    assert is_prime(Graph.empty(2))
    assert not is_prime(Graph.path(3))
    assert not is_prime(named_graph("C4"))
    assert is_prime(named_graph("C5"))
    assert is_homogeneous(Graph.path(3), [0, 2])
    assert not is_homogeneous(Graph.path(4), [1, 2])


@given(graphs(max_n=6))
def test_primeness_matches_subset_enumeration(g):
    assert is_prime(g) == brute_is_prime(g)


@given(graphs(min_n=2, max_n=6), st.data())
def test_minimal_module_is_the_smallest(g, data):
    u, v = data.draw(st.lists(st.integers(0, g.n - 1), min_size=2, max_size=2, unique=True))
    m = minimal_module(g, u, v)
    assert is_homogeneous(g, m)
    containing = [a for a in brute_homogeneous_sets(g) if {u, v} <= a]
    if len(m) < g.n:
        assert m in containing
    assert all(m <= a for a in containing)


@given(graphs(max_n=6))
def test_homogeneity_is_closed_under_complement(g):
    for a in brute_homogeneous_sets(g):
        assert is_homogeneous(g.complement(), a)


@given(graphs(max_n=6))
def test_asymmetry_matches_brute_force(g):
    assert is_asymmetric(g) == (brute_automorphisms(g) == 1)


def test_no_stringent_graphs_below_six_vertices():
    for n in range(2, 6):
        assert not any(is_stringent(g) for g in all_graphs(n))


def test_stringent_six_vertex_graphs_exist():
    assert any(is_stringent(g) for g in all_graphs(6))


def test_folding_into_stringent_graph_is_trivial_or_identity():
    # A stringent graph admits only the constant and identity self-foldings.
    g = next(g for g in all_graphs(6) if is_stringent(g))
    for phi in product(range(6), repeat=6):
        if is_folding(phi, g, g):
            assert is_trivial_map(phi) or list(phi) == list(range(6))


def test_folding_examples_and_errors():
    p4, k2 = named_graph("P4"), named_graph("K2")
    assert is_folding([0, 0, 0, 0], p4, k2)
    assert not is_folding([0, 1, 0, 1], p4, k2)
    with pytest.raises(ValueError):
        is_folding([0, 1], p4, k2)
    with pytest.raises(ValueError):
        is_folding([0, 1, 2, 3], p4, k2)
