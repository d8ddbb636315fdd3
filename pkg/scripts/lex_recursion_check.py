"""Compare the lex recursion with brute-force densities in finite lex products."""

from __future__ import annotations

import argparse
import random
from fractions import Fraction

from lexboundary.constructions import lex_product, moment
from lexboundary.density import weighted_density
from lexboundary.graphs import Graph, WeightedGraph, named_graph
from lexboundary.structure import is_prime


def random_weighted(rng: random.Random, n: int) -> WeightedGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
    raw = [rng.randint(1, 7) for _ in range(n)]
    return WeightedGraph(Graph.from_edges(n, edges), tuple(Fraction(x, sum(raw)) for x in raw))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=40)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    patterns = {"K2": named_graph("K2"), "P3": Graph.path(3), "P4": named_graph("P4"), "C5": named_graph("C5")}
    print("pattern  prime  mismatches")
    for name, h in patterns.items():
        bad = 0
        for _ in range(args.cases):
            a, b = random_weighted(rng, rng.randint(1, 4)), random_weighted(rng, rng.randint(1, 4))
            direct = weighted_density(h, lex_product(a, b))
            recursion = weighted_density(h, a) + moment(a.mu, h.n) * weighted_density(h, b)
            bad += direct != recursion
        print(f"{name:7s}  {str(is_prime(h)):5s}  {bad}/{args.cases}")


if __name__ == "__main__":
    main()
