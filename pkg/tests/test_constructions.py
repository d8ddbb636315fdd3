from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import graphs, random_weighted, weighted_graphs
from oracles import brute_lex_product, brute_weighted_density
from lexboundary.canon import are_isomorphic_labeled, canonical_form
from lexboundary.constructions import (
    ConstructionError,
    LexSpec,
    bar,
    bipartite_double,
    blowup,
    decorations,
    graphs_up_to_iso,
    implant,
    lex_density,
    lex_power,
    lex_product,
    moment,
    parse_lex_spec,
    product_density,
    tilde_blowup,
    twin_set_blowup,
)
from lexboundary.density import weighted_density
from lexboundary.graphs import Graph, LabeledGraph, WeightedGraph, named_graph
from lexboundary.quantum import QuantumGraph, evaluate, unlabel

K2 = named_graph("K2")
U2 = WeightedGraph.uniform(K2)
Q = QuantumGraph.from_graph


def test_blowup_examples():
    assert are_isomorphic_labeled(blowup(K2, (2, 2)), named_graph("C4"))
    assert blowup(named_graph("P4"), (1, 1, 1, 1)) == named_graph("P4")
    assert blowup(named_graph("K1"), (3,)) == Graph.empty(3)
    with pytest.raises(ConstructionError):
        blowup(K2, (1,))
    with pytest.raises(ConstructionError):
        blowup(K2, (1, 0))


def test_labeled_blowup_keeps_labels_on_originals():
    f = LabeledGraph.fully_labeled(K2)
    b = blowup(f, (2, 1))
    assert b.labels == f.labels and b.unlabeled_vertices == [2]


@given(graphs(min_n=1, max_n=4), st.data())
def test_blowup_density_relation(g, data):
    a = data.draw(st.lists(st.integers(1, 3), min_size=g.n, max_size=g.n))
    b = blowup(g, a)
    w = WeightedGraph(g, tuple(Fraction(x, sum(a)) for x in a))
    # Pattern densities in the blowup equal those in the weighted graph.
    for h in (Graph.path(3), K2, Graph.empty(2)):
        assert weighted_density(h, WeightedGraph.uniform(b)) == weighted_density(h, w)


def test_tilde_blowup_examples():
    k1 = LabeledGraph.fully_labeled(named_graph("K1"))
    t = tilde_blowup(k1, (2,))
    assert t == Q(LabeledGraph(K2, ((1, 0),))) + Q(LabeledGraph(Graph.empty(2), ((1, 0),)))
    f = LabeledGraph.fully_labeled(named_graph("P4"))
    assert tilde_blowup(f, (1, 1, 1, 1)) == Q(f)
    assert tilde_blowup(LabeledGraph.fully_labeled(K2), (2, 2)).total_multiplicity() == 4
    with pytest.raises(ConstructionError):
        tilde_blowup(LabeledGraph(K2), (1, 1))


def test_tilde_blowup_term_count():
    f = LabeledGraph.fully_labeled(named_graph("P3"))
    assert tilde_blowup(f, (3, 1, 2)).total_multiplicity() == 2 ** (3 + 0 + 1)


def test_implant_examples():
    k1 = LabeledGraph.fully_labeled(named_graph("K1"))
    plain, tilde = implant(k1, 1, named_graph("K1"))
    assert plain == Q(LabeledGraph(Graph.empty(2), ((1, 0),)))
    assert tilde.total_multiplicity() == 2
    k2 = LabeledGraph.fully_labeled(K2)
    plain, tilde = implant(k2, 1, named_graph("K1"))
    expected = LabeledGraph(Graph.from_edges(3, [(0, 1), (1, 2)]), k2.labels)
    assert plain == Q(expected)
    assert tilde == Q(expected) + Q(LabeledGraph(named_graph("K3"), k2.labels))
    _, tilde3 = implant(k2, 2, named_graph("P3"))
    assert tilde3.total_multiplicity() == 8
    with pytest.raises(ConstructionError):
        implant(k2, 9, named_graph("K1"))


def test_decorations():
    k1 = LabeledGraph.fully_labeled(named_graph("K1"))
    h, iso, cone = decorations(k1)
    assert h.total_multiplicity() == 2
    assert iso.graph == Graph.empty(2)
    assert cone.graph == K2
    k2 = LabeledGraph.fully_labeled(K2)
    h, iso, cone = decorations(k2)
    assert cone.graph == named_graph("K3") and len(cone.labels) == 2
    assert h.total_multiplicity() == 4


def test_bar_examples():
    assert bar(K2, ([0], [1])) == Q(K2)
    matching = Graph.from_edges(4, [(0, 2), (1, 3)])
    q = bar(matching, ([0, 1], [2, 3]))
    assert q.total_multiplicity() == 4
    assert len(q) == 3
    with pytest.raises(ConstructionError):
        bar(K2, ([0], [0]))


def test_bar_evaluation_matches_brute_force():
    matching = Graph.from_edges(4, [(0, 2), (1, 3)])
    q = unlabel(bar(matching, ([0, 1], [2, 3])))
    for target in (named_graph("K4"), named_graph("C5"), Graph.path(4)):
        w = WeightedGraph.uniform(target)
        brute = Fraction(0)
        for mask in range(4):
            extra = [e for e, b in zip([(0, 1), (2, 3)], (mask & 1, mask >> 1)) if b]
            brute += brute_weighted_density(Graph.from_edges(4, matching.edges() + extra), w)
        assert evaluate(q, None, w) == brute


def test_bipartite_double():
    h, (x, y) = bipartite_double(K2)
    assert h.edges() == [(0, 3), (1, 2)]
    assert (x, y) == ([0, 1], [2, 3])
    h, _ = bipartite_double(named_graph("K1"))
    assert h == Graph.empty(2)
    k = named_graph("C5")
    assert bipartite_double(k)[0].num_edges == 2 * k.num_edges


def test_lex_product_examples():
    k4 = lex_product(U2, U2)
    assert k4.graph == named_graph("K4") and set(k4.mu) == {Fraction(1, 4)}
    e2 = WeightedGraph.uniform(Graph.empty(2))
    two_k2 = lex_product(e2, U2)
    assert two_k2.graph.edges() == [(0, 1), (2, 3)]


@given(weighted_graphs(min_n=1, max_n=3), weighted_graphs(min_n=1, max_n=3))
def test_lex_product_matches_definition(a, b):
    assert lex_product(a, b) == brute_lex_product(a, b)


@given(weighted_graphs(min_n=1, max_n=3), weighted_graphs(min_n=1, max_n=2), weighted_graphs(min_n=1, max_n=2))
def test_lex_product_is_associative(a, b, c):
    assert lex_product(lex_product(a, b), c) == lex_product(a, lex_product(b, c))


def test_moment_examples():
    assert moment(U2.mu, 2) == Fraction(1, 2)
    assert moment((Fraction(1, 3), Fraction(2, 3)), 2) == Fraction(5, 9)
    with pytest.raises(ValueError):
        moment(U2.mu, 0)


@given(weighted_graphs(min_n=2, max_n=5))
def test_moments_decrease(w):
    ms = [moment(w.mu, k) for k in range(1, 6)]
    assert ms[0] == 1
    assert all(a > b for a, b in zip(ms, ms[1:]))


@pytest.mark.parametrize("h", [K2, named_graph("P4"), named_graph("C5")])
@given(a=weighted_graphs(min_n=1, max_n=4), b=weighted_graphs(min_n=1, max_n=4))
def test_lex_recursion_for_prime_patterns(h, a, b):
    lhs = weighted_density(h, lex_product(a, b))
    assert lhs == weighted_density(h, a) + moment(a.mu, h.n) * weighted_density(h, b)


def test_lex_recursion_fails_for_edgeless_pair():
    # Two nonadjacent vertices landing on one vertex of A are counted by both terms.
    e2 = Graph.empty(2)
    a, b = U2, U2
    lhs = weighted_density(e2, lex_product(a, b))
    rhs = weighted_density(e2, a) + moment(a.mu, 2) * weighted_density(e2, b)
    assert lhs == Fraction(1, 4) and rhs == Fraction(3, 4)


def test_lex_recursion_fails_for_non_prime_pattern():
    p3 = Graph.path(3)
    a = WeightedGraph.uniform(Graph.path(3))
    b = WeightedGraph.uniform(named_graph("K3"))
    lhs = weighted_density(p3, lex_product(a, b))
    assert lhs != weighted_density(p3, a) + moment(a.mu, 3) * weighted_density(p3, b)


@given(st.integers(0, 30), graphs(max_n=4), st.integers(1, 3))
def test_product_density_matches_materialized_product(seed, h, depth):
    rng = random.Random(seed)
    factors = [random_weighted(rng, rng.randint(1, 3)) for _ in range(depth)]
    full = factors[0]
    for f in factors[1:]:
        full = lex_product(full, f)
    assert product_density(h, factors) == weighted_density(h, full)


def test_lex_density_examples():
    assert weighted_density(K2, lex_product(U2, U2)) == Fraction(3, 4)
    value, err = lex_density(K2, LexSpec.power(U2))
    assert value == 1 and err == 0
    value, err = lex_density(K2, LexSpec.power(U2), 20)
    assert abs(value - 1) <= err <= Fraction(1, 2 ** 19)


def test_lex_density_rejects_inapplicable_patterns():
    spec = LexSpec.power(U2)
    for h in (Graph.path(3), Graph.empty(2), named_graph("K1")):
        with pytest.raises(ConstructionError):
            lex_density(h, spec)


def test_lex_density_converges_on_truncations():
    rng = random.Random(5)
    spec = LexSpec((random_weighted(rng, 3),), (random_weighted(rng, 2), random_weighted(rng, 3)))
    exact, _ = lex_density(named_graph("P4"), spec)
    prev = None
    for depth in range(1, 5):
        t = weighted_density(named_graph("P4"), spec.truncation(depth))
        _, bound = lex_density(named_graph("P4"), spec, depth)
        # The truncation drops bag contents, which can only lower a prime density by the tail.
        assert abs(exact - t) <= bound
        if prev is not None:
            assert abs(exact - t) <= abs(exact - prev)
        prev = t


def test_lex_spec_shift_and_serialization():
    rng = random.Random(2)
    a, b, c = (random_weighted(rng, n) for n in (2, 3, 2))
    spec = LexSpec((a,), (b, c))
    assert spec.factors(5) == [a, b, c, b, c]
    assert spec.shift(2).factors(3) == [c, b, c]
    assert parse_lex_spec(str(spec)) == spec
    with pytest.raises(ConstructionError):
        LexSpec((), ())
    with pytest.raises(ConstructionError):
        LexSpec((), (WeightedGraph.uniform(named_graph("K1")),))


def test_graphs_up_to_iso_counts():
    assert [len(graphs_up_to_iso(n)) for n in range(1, 6)] == [1, 2, 4, 11, 34]
    assert len({canonical_form(g) for g in graphs_up_to_iso(4)}) == 11


def test_twin_set_blowup_is_tilde_with_doubling():
    f = LabeledGraph.fully_labeled(named_graph("P3"))
    assert twin_set_blowup(f, [0, 2]) == tilde_blowup(f, (2, 1, 2))


def test_lex_power_matches_repeated_product():
    assert lex_power(U2, 3) == lex_product(lex_product(U2, U2), U2)
