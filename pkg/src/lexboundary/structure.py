"""Homogeneous sets, primeness, asymmetry, stringency and foldings."""

from __future__ import annotations

from typing import Iterable, Sequence

from .canon import nontrivial_automorphism
from .graphs import Graph, bits


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def is_homogeneous(g: Graph, a: Iterable[int]) -> bool:
    """Every vertex outside ``a`` sees all of ``a`` or none of it."""
    inside = _mask(a)
    if inside >> g.n:
        raise ValueError("vertex set is not a subset of the graph")
    for x in range(g.n):
        if inside >> x & 1:
            continue
        seen = g.adj[x] & inside
        if seen and seen != inside:
            return False
    return True


def _module_closure(g: Graph, u: int, v: int) -> int:
    adj = g.adj
    full = g.full_mask
    members = 1 << u | 1 << v
    queue = [v]
    ref = adj[u]
    while queue and members != full:
        z = queue.pop()
        # Outside vertices that see z and u differently must join.
        split = (adj[z] ^ ref) & ~members
        if split:
            members |= split
            queue.extend(bits(split))
    return members


def minimal_module(g: Graph, u: int, v: int) -> frozenset[int]:
    """Smallest homogeneous set containing both ``u`` and ``v``."""
    if u == v:
        raise ValueError("minimal_module needs two distinct vertices")
    return frozenset(bits(_module_closure(g, u, v)))


def is_prime(g: Graph) -> bool:
    """No homogeneous set A with 1 < |A| < |V|."""
    full = g.full_mask
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if _module_closure(g, u, v) != full:
                return False
    return True


def is_asymmetric(g: Graph) -> bool:
    """True iff the automorphism group is trivial."""
    return nontrivial_automorphism(g) is None


def is_stringent(g: Graph) -> bool:
    return is_prime(g) and is_asymmetric(g)


def is_folding(phi: Sequence[int], g: Graph, h: Graph) -> bool:
    """Pairs with distinct images keep adjacency and non-adjacency."""
    if len(phi) != g.n:
        raise ValueError("folding map must be total on V(G)")
    if any(not 0 <= x < h.n for x in phi):
        raise ValueError("folding map leaves V(H)")
    for u in range(g.n):
        for v in range(u + 1, g.n):
            x, y = phi[u], phi[v]
            if x != y and g.has_edge(u, v) != h.has_edge(x, y):
                return False
    return True


def is_trivial_map(phi: Sequence[int]) -> bool:
    return len(set(phi)) <= 1
