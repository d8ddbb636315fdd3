from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest

from lexboundary.graphs import Graph, all_graphs, to_graph6
from lexboundary.randgraphs import (
    SamplingError,
    derive_seed,
    estimate_stringent_rate,
    find_stringent,
    prime_failure_bound,
    sample_gnp,
    splitmix_draw,
    trial_seed,
)
from lexboundary.structure import is_prime, is_stringent


def test_splitmix_reference_vector():
    # Published SplitMix64 outputs for seed 1234567.
    assert [splitmix_draw(1234567, i) for i in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_frozen_samples():
    assert to_graph6(sample_gnp(10, Fraction(1, 2), 42)) == "IV}OLLDo_"
    assert to_graph6(sample_gnp(10, Fraction(1, 3), 42)) == "IUMODLDO_"


def test_sampling_basics():
    assert sample_gnp(1, Fraction(1, 2), 5) == Graph.empty(1)
    assert sample_gnp(12, Fraction(1, 2), 9) == sample_gnp(12, "1/2", 9) == sample_gnp(12, 0.5, 9)
    with pytest.raises(ValueError):
        sample_gnp(5, 1, 0)
    with pytest.raises(ValueError):
        sample_gnp(0, Fraction(1, 2), 0)


def test_sample_edges_follow_the_bit_rule():
    n, p, seed = 8, Fraction(2, 7), 123
    g = sample_gnp(n, p, seed)
    for i, (u, v) in enumerate(combinations(range(n), 2)):
        u53 = splitmix_draw(seed, i) >> 11
        assert g.has_edge(u, v) == (Fraction(u53, 2 ** 53) < p)


def test_edge_count_mean():
    counts = [sample_gnp(20, Fraction(1, 2), trial_seed(3, t)).num_edges for t in range(2000)]
    mean = sum(counts) / len(counts)
    sigma = math.sqrt(190 * 0.25 / len(counts))
    assert abs(mean - 95) <= 3 * sigma


def test_derive_seed_is_deterministic_and_spreads():
    assert derive_seed(7, 1, 2) == derive_seed(7, 1, 2)
    assert len({derive_seed(7, a, b) for a in range(10) for b in range(3)}) == 30


def test_prime_failure_bound_values():
    assert prime_failure_bound(3, Fraction(1, 2)) == Fraction(3, 2)
    b30 = prime_failure_bound(30, Fraction(1, 2))
    assert 435 * Fraction(1, 2 ** 28) < b30 < Fraction(2, 10 ** 6)
    assert abs(float(b30) - 1.7322602383075e-06) < 1e-18
    values = [prime_failure_bound(n, Fraction(1, 2)) for n in range(10, 41)]
    assert all(a > b for a, b in zip(values, values[1:]))


def _homogeneous_probabilities(n: int, p: Fraction) -> dict[int, Fraction]:
    """Exact P(some k-set is homogeneous) for each k, over all graphs on n vertices."""
    pairs = list(combinations(range(n), 2))
    index = {pr: i for i, pr in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    edges = np.zeros_like(masks)
    for i in range(len(pairs)):
        edges += (masks >> i) & 1
    weights = [p ** m * (1 - p) ** (len(pairs) - m) for m in range(len(pairs) + 1)]
    out = {}
    for k in range(2, n):
        hit = np.zeros(masks.shape, dtype=bool)
        for a in combinations(range(n), k):
            ok = np.ones(masks.shape, dtype=bool)
            for x in range(n):
                if x in a:
                    continue
                seen = [(masks >> index[(min(x, y), max(x, y))]) & 1 for y in a]
                total = sum(seen)
                ok &= (total == 0) | (total == k)
            hit |= ok
        per_count = np.bincount(edges[hit], minlength=len(pairs) + 1)
        out[k] = sum((int(c) * w for c, w in zip(per_count, weights)), Fraction(0))
    return out


@pytest.mark.parametrize("n, p", [(n, Fraction(1, 2)) for n in range(3, 8)] + [(n, Fraction(1, 3)) for n in range(3, 7)])
def test_bound_terms_dominate_exact_probabilities(n, p):
    exact = _homogeneous_probabilities(n, p)
    for k, prob in exact.items():
        term = comb(n, k) * ((1 - p) ** k + p ** k) ** (n - k)
        assert term >= prob
    # Summing over k also bounds the non-prime probability.
    pairs = comb(n, 2)
    nonprime = sum(
        (p ** g.num_edges * (1 - p) ** (pairs - g.num_edges) for g in all_graphs(n) if not is_prime(g)),
        Fraction(0),
    ) if n <= 6 else None
    if nonprime is not None:
        assert nonprime <= prime_failure_bound(n, p)
        assert nonprime <= max(exact.values()) * len(exact)


def test_stringent_rate_examples():
    rate, failures = estimate_stringent_rate(3, Fraction(1, 2), 25, 1)
    assert rate == 0 and len(failures) == 25
    rate, failures = estimate_stringent_rate(30, Fraction(1, 2), 200, 7)
    assert rate >= Fraction(195, 200)
    assert estimate_stringent_rate(12, Fraction(1, 2), 50, 4) == estimate_stringent_rate(12, Fraction(1, 2), 50, 4)


def test_failure_seeds_reproduce_failures():
    _, failures = estimate_stringent_rate(8, Fraction(1, 2), 40, 11)
    assert failures
    for s in failures:
        assert not is_stringent(sample_gnp(8, Fraction(1, 2), s))


def test_find_stringent():
    for n, p in [(30, Fraction(1, 2)), (30, Fraction(1, 3)), (6, Fraction(1, 2))]:
        assert is_stringent(find_stringent(n, p, 7))
    assert find_stringent(6, Fraction(1, 2), 3) == find_stringent(6, Fraction(1, 2), 3)
    with pytest.raises(ValueError):
        find_stringent(5, Fraction(1, 2), 0)
    seed = next(s for s in range(100) if not is_stringent(sample_gnp(6, Fraction(1, 2), s)))
    with pytest.raises(SamplingError, match="in 1 attempts"):
        find_stringent(6, Fraction(1, 2), seed, attempts=1)


def test_empirical_non_prime_rate_respects_bound():
    trials = 10_000
    bad = sum(not is_prime(sample_gnp(30, Fraction(1, 2), trial_seed(2024, t))) for t in range(trials))
    bound = float(prime_failure_bound(30, Fraction(1, 2)))
    slack = 3 * math.sqrt(bound * (1 - bound) / trials)
    assert bad / trials <= bound + slack
