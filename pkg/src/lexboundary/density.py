"""Strong homomorphism counts and induced homomorphism densities.

All densities are computed by exhaustive backtracking over vertex maps with
bitmask pruning: a pattern vertex may only go where it is adjacent to the
images of its earlier neighbours and non-adjacent (or equal) to the images of
its earlier non-neighbours. On the exact backend the weights are scaled to
integers over a common denominator, so sums stay in ``int``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .graphs import Graph, LabeledGraph, Number, WeightedGraph, bits, popcount

PinMap = Mapping[int, int]


class DensityError(ValueError):
    pass


def _constraints(pattern: Graph, order: Sequence[int]) -> list[list[tuple[int, bool]]]:
    """For each position in ``order``: (earlier position, adjacent?) pairs."""
    adj = pattern.adj
    return [[(j, adj[v] >> order[j] & 1) for j in range(i)] for i, v in enumerate(order)]


MASS_TABLE_MAX = 12


@lru_cache(maxsize=256)
def _mass_table(n: int, weights: tuple | None) -> list:
    """Total weight of every vertex subset, indexed by bitmask."""
    if weights is None:
        return [popcount(m) for m in range(1 << n)]
    mass = [0] * (1 << n)
    for m in range(1, 1 << n):
        low = m & -m
        mass[m] = mass[m ^ low] + weights[low.bit_length() - 1]
    return mass


@lru_cache(maxsize=None)
def _subset_bits(n: int) -> list[list[int]]:
    return [bits(m) for m in range(1 << n)]


class _LazyMass:
    __slots__ = ("fn",)

    def __init__(self, fn):
        self.fn = fn

    def __getitem__(self, mask):
        return self.fn(mask)


def _weighted_sum(
    pattern: Graph,
    target: Graph,
    weights: Sequence | None,
    fixed: Mapping[int, int] | None = None,
):
    """Sum over strong homomorphisms of the product of weights of free vertices.

    ``fixed`` pins some pattern vertices; their weights are not included.
    With ``weights=None`` every vertex weighs 1, i.e. this counts.
    """
    fixed = dict(fixed or {})
    tadj = target.adj
    full = target.full_mask
    pinned = sorted(fixed)
    for a in range(len(pinned)):
        for b in range(a + 1, len(pinned)):
            u, v = pinned[a], pinned[b]
            x, y = fixed[u], fixed[v]
            if pattern.has_edge(u, v) != bool(tadj[x] >> y & 1):
                return 0
    free = [v for v in range(pattern.n) if v not in fixed]
    if not free:
        return 1

    base = []
    for v in free:
        mask = full
        for u in pinned:
            x = fixed[u]
            mask &= tadj[x] if pattern.has_edge(u, v) else full ^ tadj[x]
        if not mask:
            return 0
        base.append(mask)

    cons = _constraints(pattern, free)
    k = len(free)
    images = [0] * k
    # allowed[x][adjacent]: where a vertex may go, given one earlier image x.
    allowed = [(full ^ tadj[x], tadj[x]) for x in range(target.n)]
    members = _subset_bits(target.n) if target.n <= MASS_TABLE_MAX else _LazyMass(bits)
    if target.n <= MASS_TABLE_MAX:
        mass = _mass_table(target.n, None if weights is None else tuple(weights))
    elif weights is None:
        mass = _LazyMass(popcount)
    else:
        mass = _LazyMass(lambda m: sum(weights[x] for x in bits(m)))
    last = k - 1

    def extend(i):
        mask = base[i]
        for j, adjacent in cons[i]:
            mask &= allowed[images[j]][adjacent]
            if not mask:
                return 0
        if i == last:
            return mass[mask]
        total = 0
        for x in members[mask]:
            images[i] = x
            sub = extend(i + 1)
            if sub:
                total += sub if weights is None else weights[x] * sub
        return total

    return extend(0)


def strong_hom_count(pattern: Graph, target: Graph) -> int:
    """Number of maps V(pattern) -> V(target) preserving adjacency and non-adjacency."""
    if pattern.n == 0:
        return 1
    if target.n == 0:
        return 0
    return _weighted_sum(pattern, target, None)


def density(pattern: Graph, target: Graph) -> Fraction:
    """Induced homomorphism density ``s(F, G) / |V(G)|^|V(F)|``."""
    if pattern.n == 0:
        return Fraction(1)
    if target.n == 0:
        raise DensityError("density into the empty graph is undefined")
    return Fraction(strong_hom_count(pattern, target), target.n ** pattern.n)


@lru_cache(maxsize=1 << 14)
def weighted_density(pattern: Graph, gw: WeightedGraph) -> Number:
    """Probability that a mu-random vertex map is a strong homomorphism."""
    if pattern.n == 0:
        return Fraction(1) if gw.exact else 1.0
    if gw.exact:
        weights, denom = gw.integer_weights
        return Fraction(_weighted_sum(pattern, gw.graph, weights), denom ** pattern.n)
    return float(_weighted_sum(pattern, gw.graph, gw.mu))


def labeled_density(h: LabeledGraph, phi: PinMap, gw: WeightedGraph) -> Number:
    """Density of ``h`` conditioned on labeled vertices landing on ``phi``."""
    missing = h.label_set - set(phi)
    if missing:
        raise DensityError(f"pin map misses labels {sorted(missing)}")
    fixed = {}
    for label, v in h.labels:
        x = phi[label]
        if not 0 <= x < gw.n:
            raise DensityError(f"label {label} pinned to missing vertex {x}")
        fixed[v] = x
    free = h.n - len(fixed)
    if gw.exact:
        weights, denom = gw.integer_weights
        return Fraction(_weighted_sum(h.graph, gw.graph, weights, fixed), denom ** free)
    return float(_weighted_sum(h.graph, gw.graph, gw.mu, fixed))


def is_strong_homomorphism(phi: Sequence[int], pattern: Graph, target: Graph) -> bool:
    for u in range(pattern.n):
        for v in range(u + 1, pattern.n):
            x, y = phi[u], phi[v]
            if x == y:
                if pattern.has_edge(u, v):
                    return False
            elif pattern.has_edge(u, v) != target.has_edge(x, y):
                return False
    return True
