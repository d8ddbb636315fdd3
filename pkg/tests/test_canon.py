from __future__ import annotations

import random

import numpy as np
from hypothesis import given, strategies as st

from conftest import graphs, labeled_graphs, random_graph
from oracles import brute_automorphisms, brute_labeled_isomorphic
from lexboundary.canon import (
    are_isomorphic_labeled,
    canonical_form,
    canonical_forms_batch,
    canonical_graph,
    graph_from_key,
    nontrivial_automorphism,
)
from lexboundary.graphs import Graph, LabeledGraph


def _shuffle(h: LabeledGraph, perm) -> LabeledGraph:
    return LabeledGraph(h.graph.relabel(perm), tuple((l, perm[v]) for l, v in h.labels))


@given(labeled_graphs(max_n=6, max_labels=3), st.randoms(use_true_random=False))
def test_canonical_form_is_relabeling_invariant(h, rnd):
    perm = list(range(h.n))
    rnd.shuffle(perm)
    assert canonical_form(_shuffle(h, perm)) == canonical_form(h)


@given(labeled_graphs(max_n=5, max_labels=2), labeled_graphs(max_n=5, max_labels=2))
def test_canonical_form_separates_exactly_like_brute_force(h1, h2):
    assert (canonical_form(h1) == canonical_form(h2)) == brute_labeled_isomorphic(h1, h2)


@given(labeled_graphs(max_n=6, max_labels=3))
def test_key_decodes_to_isomorphic_graph(h):
    g = graph_from_key(canonical_form(h))
    assert brute_labeled_isomorphic(g, h)
    assert canonical_graph(h) == g


def test_labels_distinguish_otherwise_isomorphic_graphs():
    p3 = Graph.path(3)
    end = LabeledGraph(p3, ((1, 0),))
    mid = LabeledGraph(p3, ((1, 1),))
    assert not are_isomorphic_labeled(end, mid)
    assert are_isomorphic_labeled(end, LabeledGraph(p3, ((1, 2),)))


def test_regular_graphs_need_individualization():
    rng = random.Random(3)
    c6 = Graph.cycle(6)
    twok3 = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_form(c6) != canonical_form(twok3)
    perm = list(range(6))
    rng.shuffle(perm)
    assert canonical_form(c6.relabel(perm)) == canonical_form(c6)


@given(graphs(max_n=6))
def test_automorphism_search_matches_brute_force(g):
    perm = nontrivial_automorphism(g)
    if perm is None:
        assert brute_automorphisms(g) == 1
    else:
        assert sorted(perm) == list(range(g.n)) and perm != list(range(g.n))
        assert g.relabel(perm) == g


def test_automorphisms_on_larger_random_graphs():
    rng = random.Random(11)
    for _ in range(20):
        g = random_graph(rng, 12)
        perm = nontrivial_automorphism(g)
        if perm is not None:
            assert g.relabel(perm) == g


@given(st.lists(labeled_graphs(max_n=7, max_labels=3), min_size=1, max_size=8), st.data())
def test_batch_keys_agree_with_scalar(hs, data):
    # One labeling per batch: reuse the first graph's labels on graphs of its size.
    first = hs[0]
    batch = [h.graph for h in hs if h.n == first.n]
    mats = np.array(
        [[[g.adj[i] >> j & 1 for j in range(g.n)] for i in range(g.n)] for g in batch]
    ).reshape(len(batch), first.n, first.n)
    keys = canonical_forms_batch(mats, first.labels)
    for g, key in zip(batch, keys):
        if key is not None:
            assert key == canonical_form(LabeledGraph(g, first.labels))


def test_batch_covers_symmetric_graphs_with_one_split():
    cycle = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    mats = np.array([[[cycle.adj[i] >> j & 1 for j in range(6)] for i in range(6)]])
    # C6 refines to a single cell; one individualization is not enough.
    assert canonical_forms_batch(mats) == [None]
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    mats = np.array([[[path.adj[i] >> j & 1 for j in range(4)] for i in range(4)]])
    assert canonical_forms_batch(mats) == [canonical_form(path)]
