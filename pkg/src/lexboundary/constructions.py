"""Blowups, implants, bar sums, lexicographic products and their densities."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Sequence, Union

from .canon import canonical_form, graph_from_key
from .density import weighted_density
from .graphs import (
    Graph,
    LabeledGraph,
    Number,
    WeightedGraph,
    all_graphs,
    bits,
    check_same_backend,
    parse_weighted_graph,
)
from .quantum import QuantumGraph, _expand
from .structure import is_prime


class ConstructionError(ValueError):
    pass


def _blowup_layout(n: int, a: Sequence[int]) -> tuple[list[list[int]], int]:
    """Vertex classes of the blowup: originals keep their index, copies follow."""
    if len(a) != n:
        raise ConstructionError(f"blowup vector has {len(a)} entries for {n} vertices")
    if any(x < 1 for x in a):
        raise ConstructionError("blowup entries must be at least 1")
    classes = [[v] for v in range(n)]
    nxt = n
    for v in range(n):
        for _ in range(a[v] - 1):
            classes[v].append(nxt)
            nxt += 1
    return classes, nxt


def _blowup_adj(g: Graph, classes: list[list[int]], total: int) -> list[int]:
    owner = [0] * total
    for v, cls in enumerate(classes):
        for x in cls:
            owner[x] = v
    masks = [0] * g.n
    for v, cls in enumerate(classes):
        for x in cls:
            masks[v] |= 1 << x
    adj = [0] * total
    for x in range(total):
        for w in bits(g.adj[owner[x]]):
            adj[x] |= masks[w]
    return adj


def blowup(f: Graph | LabeledGraph, a: Sequence[int]) -> Graph | LabeledGraph:
    """Replace every vertex v by ``a[v]`` pairwise non-adjacent copies."""
    g = f.graph if isinstance(f, LabeledGraph) else f
    classes, total = _blowup_layout(g.n, a)
    out = Graph(total, tuple(_blowup_adj(g, classes, total)))
    if isinstance(f, LabeledGraph):
        return LabeledGraph(out, f.labels)
    return out


def tilde_blowup(f: LabeledGraph, a: Sequence[int]) -> QuantumGraph:
    """Blowup summed over every choice of edges inside each copy class."""
    if not f.is_fully_labeled:
        raise ConstructionError("tilde blowups need a fully labeled graph")
    classes, total = _blowup_layout(f.n, a)
    adj = _blowup_adj(f.graph, classes, total)
    optional = [pair for cls in classes for pair in combinations(cls, 2)]
    return QuantumGraph.from_counts(_expand(total, adj, optional, f.labels), f.label_set)


def twin_set_blowup(f: LabeledGraph, vertices: Sequence[int]) -> QuantumGraph:
    """Tilde blowup doubling exactly the given vertices."""
    chosen = set(vertices)
    return tilde_blowup(f, [2 if v in chosen else 1 for v in range(f.n)])


def implant(f: LabeledGraph, label: int, h: Graph) -> tuple[QuantumGraph, QuantumGraph]:
    """Add |V(h)| unlabeled twins of the vertex labeled ``label`` carrying a copy of ``h``.

    Returns the plain implant and the sum over the 2^|V(h)| ways of joining
    the twins to the labeled vertex itself.
    """
    if not f.is_fully_labeled:
        raise ConstructionError("implants need a fully labeled graph")
    if label not in f.vertex_of:
        raise ConstructionError(f"unknown label {label}")
    if h.n == 0:
        raise ConstructionError("the implanted graph must be nonempty")
    n, k = f.n, h.n
    i = f.vertex_of[label]
    adj = list(f.graph.adj) + [0] * k
    twins = list(range(n, n + k))
    for t in twins:
        for w in bits(f.graph.adj[i]):
            adj[t] |= 1 << w
            adj[w] |= 1 << t
    for x, y in h.edges():
        adj[n + x] |= 1 << (n + y)
        adj[n + y] |= 1 << (n + x)
    plain = QuantumGraph.from_graph(LabeledGraph(Graph(n + k, tuple(adj)), f.labels))
    tilde = QuantumGraph.from_counts(
        _expand(n + k, adj, [(i, t) for t in twins], f.labels), f.label_set
    )
    return plain, tilde


def decorations(f: LabeledGraph) -> tuple[QuantumGraph, LabeledGraph, LabeledGraph]:
    """``h`` (sum of single-vertex tilde doublings), ``f`` plus an isolated vertex,
    and ``f`` plus a vertex joined to everything."""
    if not f.is_fully_labeled:
        raise ConstructionError("decorations need a fully labeled graph")
    h = sum((twin_set_blowup(f, [v]) for v in range(f.n)), QuantumGraph.zero(f.label_set))
    n = f.n
    iso = LabeledGraph(Graph(n + 1, tuple(f.graph.adj) + (0,)), f.labels)
    full = f.graph.full_mask
    cone = LabeledGraph(
        Graph(n + 1, tuple(m | 1 << n for m in f.graph.adj) + (full,)), f.labels
    )
    return h, iso, cone


def bar(h: Graph, parts: tuple[Sequence[int], Sequence[int]]) -> QuantumGraph:
    """Sum over all ways of adding edges inside X and inside Y."""
    x, y = (list(p) for p in parts)
    if sorted(x + y) != list(range(h.n)):
        raise ConstructionError("parts must partition the vertex set")
    optional = [
        (u, v)
        for side in (x, y)
        for u, v in combinations(sorted(side), 2)
        if not h.has_edge(u, v)
    ]
    return QuantumGraph.from_counts(_expand(h.n, list(h.adj), optional, ()), ())


def bipartite_double(k: Graph) -> tuple[Graph, tuple[list[int], list[int]]]:
    """Split vertex i into u_i = i and v_i = n + i with u_i ~ v_j iff ij is an edge."""
    n = k.n
    edges = []
    for i, j in k.edges():
        edges.append((i, n + j))
        edges.append((j, n + i))
    return Graph.from_edges(2 * n, edges), (list(range(n)), list(range(n, 2 * n)))


def lex_product(a: WeightedGraph, b: WeightedGraph) -> WeightedGraph:
    """Weighted lexicographic product; vertex (u, v) becomes ``u * |B| + v``."""
    check_same_backend(a, b)
    na, nb = a.n, b.n
    block = (1 << nb) - 1
    adj = []
    for u in range(na):
        outer = 0
        for w in bits(a.graph.adj[u]):
            outer |= block << (w * nb)
        for v in range(nb):
            adj.append(outer | b.graph.adj[v] << (u * nb))
    mu = tuple(x * y for x in a.mu for y in b.mu)
    if not a.exact:
        s = sum(mu)
        mu = tuple(m / s for m in mu)
    return WeightedGraph(Graph(na * nb, tuple(adj)), mu)


def lex_power(a: WeightedGraph, depth: int) -> WeightedGraph:
    if depth < 1:
        raise ConstructionError("depth must be at least 1")
    return reduce(lex_product, [a] * depth)


def moment(mu: Sequence[Number], k: int) -> Number:
    """Sum of k-th powers of the weights."""
    if k < 1:
        raise ValueError("moments are defined for k >= 1")
    return sum(w ** k for w in mu)


@dataclass(frozen=True)
class LexSpec:
    """The infinite lexicographic product of ``prefix`` followed by ``cycle`` repeated."""

    prefix: tuple[WeightedGraph, ...]
    cycle: tuple[WeightedGraph, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ConstructionError("the periodic part must be nonempty")
        for w in self.prefix + self.cycle:
            if w.n < 2:
                raise ConstructionError("every factor needs at least two vertices")
        check_same_backend(*(self.prefix + self.cycle))

    @classmethod
    def power(cls, w: WeightedGraph) -> LexSpec:
        return cls((), (w,))

    @property
    def exact(self) -> bool:
        return self.cycle[0].exact

    def factor(self, i: int) -> WeightedGraph:
        """The i-th factor, counting from 0."""
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def factors(self, count: int) -> list[WeightedGraph]:
        return [self.factor(i) for i in range(count)]

    def shift(self, count: int) -> LexSpec:
        """The product of the factors after the first ``count``: every bag of the
        depth-``count`` partition looks like this."""
        if count <= len(self.prefix):
            return LexSpec(self.prefix[count:], self.cycle)
        r = (count - len(self.prefix)) % len(self.cycle)
        return LexSpec((), self.cycle[r:] + self.cycle[:r])

    def truncation(self, count: int) -> WeightedGraph:
        """The finite product of the first ``count`` factors."""
        return reduce(lex_product, self.factors(count))

    def __str__(self) -> str:
        def refs(ws):
            return "[" + ", ".join("{" + str(w) + "}" for w in ws) + "]"

        return f"prefix: {refs(self.prefix)}; cycle: {refs(self.cycle)}"


def parse_lex_spec(text: str) -> LexSpec:
    m = re.fullmatch(r"\s*prefix\s*:\s*\[(?P<p>.*?)\]\s*;\s*cycle\s*:\s*\[(?P<c>.*)\]\s*", text, re.S)
    if not m:
        raise ConstructionError("expected 'prefix: [...]; cycle: [...]'")

    def graphs(body):
        return tuple(parse_weighted_graph(g) for g in re.findall(r"\{([^{}]*)\}", body))

    return LexSpec(graphs(m.group("p")), graphs(m.group("c")))


def _require_lex_pattern(h: Graph) -> None:
    # Two-vertex edgeless pattern passes the primeness test vacuously but its
    # constant map is counted in both the spread and the bag term.
    if h.n < 2 or h.num_edges == 0:
        raise ConstructionError("the lex recursion needs a pattern with an edge")
    if not is_prime(h):
        raise ConstructionError("the lex recursion only holds for prime patterns")


def lex_density(h: Graph, spec: LexSpec, mode: Union[str, int] = "exact") -> tuple[Number, Number]:
    """Density of a prime graph in an eventually periodic infinite lex product.

    ``mode="exact"`` closes the geometric tail over the cycle and returns a
    zero error bound. An integer mode ``N`` sums the first N terms and returns
    the tail bound ``prod_{j<=N} m_k(mu_j) / (1 - max_{j>N} m_k(mu_j))``.
    """
    _require_lex_pattern(h)
    k = h.n
    zero = Fraction(0) if spec.exact else 0.0
    one = Fraction(1) if spec.exact else 1.0

    def term(w):
        return weighted_density(h, w), moment(w.mu, k)

    if mode == "exact":
        total, weight = zero, one
        for w in spec.prefix:
            t, m = term(w)
            total += weight * t
            weight *= m
        cyc_total, cyc_weight = zero, one
        for w in spec.cycle:
            t, m = term(w)
            cyc_total += cyc_weight * t
            cyc_weight *= m
        total += weight * cyc_total / (one - cyc_weight)
        return total, zero
    if isinstance(mode, int) and not isinstance(mode, bool) and mode >= 0:
        total, weight = zero, one
        for w in spec.factors(mode):
            t, m = term(w)
            total += weight * t
            weight *= m
        rest = spec.shift(mode)
        worst = max(moment(w.mu, k) for w in rest.prefix + rest.cycle)
        return total, weight / (one - worst)
    raise ValueError(f"unknown mode {mode!r}")


def fold_weights(h: Graph, a: WeightedGraph):
    """Yield (map, weight) for every folding of ``h`` into the graph of ``a``.

    Pairs with distinct images must keep their adjacency; pairs sharing an
    image are unconstrained.
    """
    full = a.graph.full_mask
    aadj = a.graph.adj
    k = h.n
    images = [0] * k

    def extend(i, weight):
        if i == k:
            yield tuple(images), weight
            return
        mask = full
        for j in range(i):
            x = images[j]
            if h.has_edge(i, j):
                mask &= aadj[x] | 1 << x
            else:
                mask &= full ^ aadj[x]
        for x in bits(mask):
            images[i] = x
            yield from extend(i + 1, weight * a.mu[x])

    if k == 0:
        yield (), (Fraction(1) if a.exact else 1.0)
        return
    yield from extend(0, Fraction(1) if a.exact else 1.0)


def product_density(h: Graph, factors: Sequence[WeightedGraph]) -> Number:
    """Density of any graph in the finite lex product of ``factors``.

    A map into A (x) B splits into a folding into A and, on each fibre, a
    strong homomorphism into B. Fibres recurse on the remaining factors, so
    the product is never materialized.
    """
    factors = list(factors)
    if not factors:
        raise ConstructionError("need at least one factor")
    check_same_backend(*factors)
    memo: dict[tuple[bytes, int], Number] = {}

    def rec(key: bytes, level: int) -> Number:
        if (key, level) in memo:
            return memo[key, level]
        g = graph_from_key(key).graph
        a = factors[level]
        if level == len(factors) - 1:
            value = weighted_density(g, a)
        else:
            value = Fraction(0) if a.exact else 0.0
            for phi, weight in fold_weights(g, a):
                fibres: dict[int, list[int]] = {}
                for v, x in enumerate(phi):
                    fibres.setdefault(x, []).append(v)
                for verts in fibres.values():
                    sub = canonical_form(g.induced(verts))
                    weight *= rec(sub, level + 1)
                    if not weight:
                        break
                value += weight
        memo[key, level] = value
        return value

    return rec(canonical_form(h), 0)


def graphs_up_to_iso(n: int) -> list[Graph]:
    seen = {}
    for g in all_graphs(n):
        seen.setdefault(canonical_form(g), g)
    return [graph_from_key(k).graph for k in sorted(seen)]
