from __future__ import annotations

import random
import sys
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from hypothesis import settings, strategies as st

from lexboundary.graphs import Graph, LabeledGraph, WeightedGraph

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=0, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


@st.composite
def weighted_graphs(draw, min_n=1, max_n=4):
    g = draw(graphs(min_n=min_n, max_n=max_n))
    raw = draw(st.lists(st.integers(1, 6), min_size=g.n, max_size=g.n))
    total = sum(raw)
    return WeightedGraph(g, tuple(Fraction(x, total) for x in raw))


@st.composite
def labeled_graphs(draw, max_n=4, max_labels=2):
    g = draw(graphs(min_n=0, max_n=max_n))
    k = draw(st.integers(0, min(max_labels, g.n)))
    verts = draw(st.permutations(range(g.n)))[:k]
    labels = draw(st.lists(st.integers(1, 5), min_size=k, max_size=k, unique=True))
    return LabeledGraph.from_mapping(g, dict(zip(labels, verts)))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def random_weighted(rng: random.Random, n: int, p: float = 0.5) -> WeightedGraph:
    raw = [rng.randint(1, 7) for _ in range(n)]
    total = sum(raw)
    return WeightedGraph(random_graph(rng, n, p), tuple(Fraction(x, total) for x in raw))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
