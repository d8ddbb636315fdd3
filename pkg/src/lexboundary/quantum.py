"""Quantum graphs: rational combinations of partially labeled graphs.

A ``QuantumGraph`` maps canonical keys (see ``canon.canonical_form``) to
nonzero ``Fraction`` coefficients. Every term carries the same label set.

Expansions that enumerate optional edges (the product, tilde blowups, bar
sums) keep multiplicities: two edge choices that happen to give isomorphic
graphs contribute twice. That is what makes evaluation multiplicative.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .canon import BATCH_MAX_VERTICES, canonical_form, canonical_forms_batch, graph_from_key
from .density import PinMap, labeled_density, weighted_density
from .graphs import Graph, LabeledGraph, Number, WeightedGraph, bits

MAX_OPTIONAL_EDGES = 24
BATCH_THRESHOLD = 64


class LabelSetError(ValueError):
    pass


class TermExplosionError(ValueError):
    pass


def _labels_of_key(key: bytes) -> frozenset[int]:
    return graph_from_key(key).label_set


class QuantumGraph:
    __slots__ = ("_terms", "labels")

    def __init__(self, terms: Mapping[bytes, Fraction] | None = None, labels: Iterable[int] = ()):
        self.labels = frozenset(labels)
        clean = {}
        for key, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                if _labels_of_key(key) != self.labels:
                    raise LabelSetError(
                        f"term has labels {sorted(_labels_of_key(key))}, expected {sorted(self.labels)}"
                    )
                clean[key] = coef
        self._terms = clean

    @classmethod
    def from_graph(cls, h: LabeledGraph | Graph, coef=1) -> QuantumGraph:
        if isinstance(h, Graph):
            h = LabeledGraph(h)
        return cls({canonical_form(h): Fraction(coef)}, h.label_set)

    @classmethod
    def from_counts(cls, counts: Mapping[bytes, int], labels: Iterable[int]) -> QuantumGraph:
        return cls({k: Fraction(c) for k, c in counts.items()}, labels)

    @classmethod
    def zero(cls, labels: Iterable[int] = ()) -> QuantumGraph:
        return cls({}, labels)

    @classmethod
    def one(cls) -> QuantumGraph:
        """The empty graph; the unit of the unlabeled algebra."""
        return cls.from_graph(Graph.empty(0))

    @classmethod
    def unit(cls, labels: Iterable[int]) -> QuantumGraph:
        """Sum of all fully labeled graphs on ``labels``: the unit of the labeled algebra."""
        labels = sorted(labels)
        n = len(labels)
        pairs = list(combinations(range(n), 2))
        total = cls.zero(labels)
        for mask in range(1 << len(pairs)):
            g = Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
            total = total + cls.from_graph(LabeledGraph(g, tuple((l, v) for v, l in enumerate(labels))))
        return total

    @property
    def terms(self) -> dict[bytes, Fraction]:
        return dict(self._terms)

    def items(self) -> list[tuple[LabeledGraph, Fraction]]:
        """Terms as (canonical graph, coefficient), in canonical order."""
        return [(graph_from_key(k), self._terms[k]) for k in self.keys()]

    def keys(self) -> list[bytes]:
        return sorted(self._terms, key=lambda k: (graph_from_key(k).n, k))

    def coefficient(self, h: LabeledGraph | Graph) -> Fraction:
        return self._terms.get(canonical_form(h), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def total_multiplicity(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[bytes]:
        return iter(self.keys())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _common_labels(self, other: QuantumGraph) -> frozenset[int]:
        if not self._terms:
            return other.labels
        if not other._terms or self.labels == other.labels:
            return self.labels
        raise LabelSetError(f"label sets differ: {sorted(self.labels)} vs {sorted(other.labels)}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other) * QuantumGraph.one()
        if not isinstance(other, QuantumGraph):
            return NotImplemented
        labels = self._common_labels(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return QuantumGraph(out, labels)

    __radd__ = __add__

    def __neg__(self) -> QuantumGraph:
        return QuantumGraph({k: -c for k, c in self._terms.items()}, self.labels)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other) * QuantumGraph.one()
        if not isinstance(other, QuantumGraph):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QuantumGraph):
            return product(self, other)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return QuantumGraph({k: c * v for k, v in self._terms.items()}, self.labels)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other) * QuantumGraph.one() if other else QuantumGraph.zero()
        if not isinstance(other, QuantumGraph):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.labels == other.labels and self._terms == other._terms

    __hash__ = None

    def __repr__(self) -> str:
        from .expr import to_expression

        return f"QuantumGraph({to_expression(self)!r})"


def _orbit_representatives(m: int, symmetries: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    """Smallest mask and size of each orbit of a permutation group on ``m`` bits."""
    masks = np.arange(1 << m, dtype=np.int64)
    rep = masks.copy()
    chunks = [(shift, min(8, m - shift)) for shift in range(0, m, 8)]
    for perm in symmetries:
        image = np.zeros_like(masks)
        for shift, width in chunks:
            table = np.zeros(1 << width, dtype=np.int64)
            for i in range(width):
                table[np.arange(1 << width) >> i & 1 == 1] |= 1 << perm[shift + i]
            image |= table[masks >> shift & ((1 << width) - 1)]
        np.minimum(rep, image, out=rep)
    return np.unique(rep, return_counts=True)


def _batch_keys(
    n: int,
    base_adj: list[int],
    optional: list[tuple[int, int]],
    labels: tuple[tuple[int, int], ...],
    masks: np.ndarray,
) -> list[bytes | None]:
    base = np.array([[row >> j & 1 for j in range(n)] for row in base_adj], dtype=np.int8)
    mats = np.repeat(base[None], len(masks), axis=0)
    chosen = (masks[:, None] >> np.arange(len(optional))) & 1
    us = [u for u, _ in optional]
    vs = [v for _, v in optional]
    mats[:, us, vs] |= chosen.astype(np.int8)
    mats[:, vs, us] |= chosen.astype(np.int8)
    return canonical_forms_batch(mats, labels)


def _expand(
    n: int,
    base_adj: list[int],
    optional: list[tuple[int, int]],
    labels: tuple[tuple[int, int], ...],
    symmetries: Sequence[Sequence[int]] = (),
) -> Counter:
    """Canonical keys of every graph obtained by adding a subset of ``optional``.

    ``symmetries`` may list a group of permutations of ``optional`` induced by
    label-preserving automorphisms of the base graph. Subsets in one orbit give
    isomorphic graphs, so only one per orbit is canonicalized.
    """
    m = len(optional)
    if m > MAX_OPTIONAL_EDGES:
        raise TermExplosionError(f"{m} optional edges would create 2^{m} summands")
    if len(symmetries) > 1:
        masks, sizes = _orbit_representatives(m, symmetries)
    else:
        masks = np.arange(1 << m, dtype=np.int64)
        sizes = np.ones(1 << m, dtype=np.int64)
    if len(masks) >= BATCH_THRESHOLD and n <= BATCH_MAX_VERTICES:
        keys = _batch_keys(n, base_adj, optional, labels, masks)
    else:
        keys = [None] * len(masks)
    counts: Counter = Counter()
    for mask, size, key in zip(masks.tolist(), sizes.tolist(), keys):
        if key is None:
            adj = list(base_adj)
            for i in bits(mask):
                u, v = optional[i]
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            key = canonical_form(LabeledGraph(Graph._unchecked(n, tuple(adj)), labels))
        counts[key] += size
    return counts


def _fixing_automorphisms(h: LabeledGraph, limit: int = 7) -> list[dict[int, int]]:
    """Automorphisms fixing every labeled vertex, as maps on the unlabeled ones."""
    free = h.unlabeled_vertices
    if len(free) > limit:
        return [{v: v for v in free}]
    adj = h.graph.adj
    out = []
    for image in permutations(free):
        sigma = dict(zip(free, image))
        full = [sigma.get(v, v) for v in range(h.n)]
        if all(
            sum(1 << full[w] for w in bits(adj[v])) == adj[full[v]] for v in free
        ):
            out.append(sigma)
    return out


@lru_cache(maxsize=1 << 14)
def _basis_product(k1: bytes, k2: bytes) -> tuple[tuple[bytes, int], ...]:
    h1, h2 = graph_from_key(k1), graph_from_key(k2)
    if h1.label_set != h2.label_set:
        raise LabelSetError("product of graphs with different label sets")
    if h1.core() != h2.core():
        return ()
    labels = [l for l, _ in h1.labels]
    nl = len(labels)
    u1, u2 = h1.unlabeled_vertices, h2.unlabeled_vertices
    # Layout: labeled vertices (label order), unlabeled of h1, unlabeled of h2.
    pos1 = {v: i for i, v in enumerate(h1.labeled_vertices)}
    pos1.update({v: nl + i for i, v in enumerate(u1)})
    pos2 = {v: i for i, v in enumerate(h2.labeled_vertices)}
    pos2.update({v: nl + len(u1) + i for i, v in enumerate(u2)})
    n = nl + len(u1) + len(u2)
    adj = [0] * n
    for h, pos in ((h1, pos1), (h2, pos2)):
        for a, b in h.graph.edges():
            x, y = pos[a], pos[b]
            adj[x] |= 1 << y
            adj[y] |= 1 << x
    optional = [(pos1[a], pos2[b]) for a in u1 for b in u2]
    index = {pair: i for i, pair in enumerate(optional)}
    auts1, auts2 = _fixing_automorphisms(h1), _fixing_automorphisms(h2)
    symmetries = [[index[pos1[s1[a]], pos2[s2[b]]] for a in u1 for b in u2] for s1 in auts1 for s2 in auts2]
    if k1 == k2:
        # Equal factors: exchanging the two copies is a symmetry as well.
        symmetries += [[index[pos1[s2[b]], pos2[s1[a]]] for a in u1 for b in u2] for s1 in auts1 for s2 in auts2]
    counts = _expand(n, adj, optional, tuple((l, i) for i, l in enumerate(labels)), symmetries)
    return tuple(sorted(counts.items()))


def product(f: QuantumGraph, g: QuantumGraph) -> QuantumGraph:
    """Bilinear extension of the glue-on-labels product."""
    if f.labels != g.labels and f and g:
        raise LabelSetError(f"label sets differ: {sorted(f.labels)} vs {sorted(g.labels)}")
    out: dict[bytes, Fraction] = {}
    for k1, c1 in f._terms.items():
        for k2, c2 in g._terms.items():
            a, b = (k1, k2) if k1 <= k2 else (k2, k1)
            for key, mult in _basis_product(a, b):
                out[key] = out.get(key, 0) + c1 * c2 * mult
    return QuantumGraph(out, f.labels if f else g.labels)


def unlabel(f: QuantumGraph) -> QuantumGraph:
    """Forget every label and merge terms that become isomorphic."""
    out: dict[bytes, Fraction] = {}
    for key, c in f._terms.items():
        k = canonical_form(graph_from_key(key).graph)
        out[k] = out.get(k, 0) + c
    return QuantumGraph(out, ())


def evaluate(f: QuantumGraph, phi: PinMap | None, gw: WeightedGraph) -> Number:
    """Linear extension of the labeled density."""
    exact = gw.exact
    total = Fraction(0) if exact else 0.0
    if f.labels and phi is None:
        raise LabelSetError(f"labels {sorted(f.labels)} need a pin map")
    for key, c in f._terms.items():
        h = graph_from_key(key)
        if h.labels:
            t = labeled_density(h, phi, gw)
        else:
            t = weighted_density(h.graph, gw)
        total += c * t if exact else float(c) * t
    return total


def combine_forcing(f1: QuantumGraph, f2: QuantumGraph) -> QuantumGraph:
    """``f1^2 + f2^2``: vanishes exactly where both inputs vanish."""
    if f1.labels or f2.labels:
        raise LabelSetError("forcing combinations take unlabeled quantum graphs")
    return f1 * f1 + f2 * f2
