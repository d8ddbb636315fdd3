"""Simple graphs, partially labeled graphs and vertex-weighted graphs.

Graphs are immutable, vertices are ``0..n-1`` and adjacency is kept as one
integer bitmask per vertex. Text formats:

* edge list: ``n=3; edges: 0-1, 1-2`` (labels as ``@vertex:label`` marks,
  weights as a trailing ``; mu: 1/3, 2/3`` section)
* graph6, the standard ASCII encoding (no ``>>graph6<<`` header)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence, Union

Number = Union[Fraction, float]

APPROX_TOLERANCE = 1e-12


class GraphFormatError(ValueError):
    """Malformed graph text."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length does not match order")
        for v, mask in enumerate(self.adj):
            if mask >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            if mask >> self.n:
                raise ValueError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            m = mask
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise ValueError("adjacency is not symmetric")
                m ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop edge {u}-{v}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def _unchecked(cls, n: int, adj: tuple[int, ...]) -> Graph:
        # Hot loops only: caller guarantees a symmetric, loop-free adjacency.
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> Graph:
        if n < 3:
            raise ValueError("cycles need at least 3 vertices")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def num_edges(self) -> int:
        return sum(bin(m).count("1") for m in self.adj) // 2

    def complement(self) -> Graph:
        full = self.full_mask
        return Graph(self.n, tuple((full ^ m) & ~(1 << v) for v, m in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> Graph:
        pos = {v: i for i, v in enumerate(vertices)}
        return Graph.from_edges(
            len(vertices),
            [(pos[u], pos[v]) for u, v in combinations(vertices, 2) if self.has_edge(u, v)],
        )

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph whose vertex ``perm[v]`` plays the role of ``v``."""
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __str__(self) -> str:
        return to_edge_list(self)


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class LabeledGraph:
    """A graph with an injective partial labeling ``label -> vertex``."""

    graph: Graph
    labels: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        labels = tuple(sorted((int(l), int(v)) for l, v in self.labels))
        object.__setattr__(self, "labels", labels)
        seen_labels = [l for l, _ in labels]
        targets = [v for _, v in labels]
        if len(set(seen_labels)) != len(seen_labels):
            raise ValueError("a label is assigned twice")
        if len(set(targets)) != len(targets):
            raise ValueError("a vertex carries two labels")
        for l, v in labels:
            if l < 0:
                raise ValueError("labels are natural numbers")
            if not 0 <= v < self.graph.n:
                raise ValueError(f"label {l} points at missing vertex {v}")

    @classmethod
    def from_mapping(cls, graph: Graph, labeling: Mapping[int, int]) -> LabeledGraph:
        return cls(graph, tuple(labeling.items()))

    @classmethod
    def fully_labeled(cls, graph: Graph, start: int = 1) -> LabeledGraph:
        """Label vertex ``v`` with ``start + v``."""
        return cls(graph, tuple((start + v, v) for v in range(graph.n)))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def label_set(self) -> frozenset[int]:
        return frozenset(l for l, _ in self.labels)

    @cached_property
    def vertex_of(self) -> dict[int, int]:
        return dict(self.labels)

    @cached_property
    def label_of(self) -> dict[int, int]:
        return {v: l for l, v in self.labels}

    @property
    def labeled_vertices(self) -> list[int]:
        return [v for _, v in self.labels]

    @property
    def unlabeled_vertices(self) -> list[int]:
        lab = self.label_of
        return [v for v in range(self.n) if v not in lab]

    @property
    def is_fully_labeled(self) -> bool:
        return len(self.labels) == self.n

    def core(self) -> LabeledGraph:
        """The fully labeled subgraph induced by the labeled vertices."""
        verts = self.labeled_vertices
        sub = self.graph.induced(verts)
        return LabeledGraph(sub, tuple((l, i) for i, (l, _) in enumerate(self.labels)))

    def unlabeled(self) -> LabeledGraph:
        return LabeledGraph(self.graph)

    def __str__(self) -> str:
        return to_edge_list(self.graph, labels=self.vertex_of)


@dataclass(frozen=True)
class WeightedGraph:
    """A graph with a strictly positive probability measure on its vertices.

    All weights are either ``Fraction`` (exact backend) or ``float``
    (approximate backend); the two never mix.
    """

    graph: Graph
    mu: tuple[Number, ...] = field(default=())

    def __post_init__(self):
        mu = tuple(self.mu)
        if len(mu) != self.graph.n:
            raise ValueError("one weight per vertex is required")
        if not mu:
            raise ValueError("weighted graphs need at least one vertex")
        if all(isinstance(w, (Fraction, int)) and not isinstance(w, bool) for w in mu):
            mu = tuple(Fraction(w) for w in mu)
            if sum(mu) != 1:
                raise ValueError(f"weights sum to {sum(mu)}, not 1")
        elif all(isinstance(w, float) for w in mu):
            if abs(sum(mu) - 1.0) > APPROX_TOLERANCE:
                raise ValueError(f"weights sum to {sum(mu)!r}, not 1")
        else:
            raise TypeError("weights must be all Fraction or all float")
        if any(w <= 0 for w in mu):
            raise ValueError("every weight must be strictly positive")
        object.__setattr__(self, "mu", mu)

    def __hash__(self) -> int:
        # Densities are memoized on the weighted graph; hashing Fractions is slow.
        try:
            return self.__dict__["_hash"]
        except KeyError:
            value = hash((self.graph, self.mu))
            self.__dict__["_hash"] = value
            return value

    @classmethod
    def uniform(cls, graph: Graph) -> WeightedGraph:
        return cls(graph, (Fraction(1, graph.n),) * graph.n)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def exact(self) -> bool:
        return isinstance(self.mu[0], Fraction)

    @cached_property
    def integer_weights(self) -> tuple[tuple[int, ...], int]:
        """Numerators over a common denominator (exact backend only)."""
        if not self.exact:
            raise TypeError("integer weights need the exact backend")
        denom = 1
        for w in self.mu:
            denom = denom * w.denominator // _gcd(denom, w.denominator)
        return tuple(int(w * denom) for w in self.mu), denom

    def __str__(self) -> str:
        return to_edge_list(self.graph) + "; mu: " + ", ".join(format_number(w) for w in self.mu)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def check_same_backend(*weighted: WeightedGraph) -> bool:
    kinds = {w.exact for w in weighted}
    if len(kinds) > 1:
        raise TypeError("cannot mix exact and approximate weighted graphs")
    return kinds.pop()


def format_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x)
    return repr(float(x))


def parse_number(text: str) -> Number:
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        return Fraction(text)
    try:
        return float(text)
    except ValueError:
        raise GraphFormatError(f"bad number {text!r}") from None


# -- edge-list format -------------------------------------------------------

_EDGE_LIST_RE = re.compile(
    r"^\s*n\s*=\s*(?P<n>\d+)\s*;\s*edges\s*:(?P<edges>[^;@]*)(?P<marks>(@[^;]*)?)\s*(;\s*mu\s*:(?P<mu>.*))?$",
    re.S,
)


def _parse_edge_list_parts(text: str) -> tuple[Graph, dict[int, int], list[Number] | None]:
    m = _EDGE_LIST_RE.match(text)
    if not m:
        raise GraphFormatError(f"expected 'n=<order>; edges: i-j, ...', got {text!r}")
    n = int(m.group("n"))
    edges = []
    seen = set()
    for token in re.finditer(r"[^,\s]+", m.group("edges")):
        item, at = token.group(), m.start("edges") + token.start()
        em = re.fullmatch(r"(\d+)-(\d+)", item)
        if not em:
            raise GraphFormatError(f"bad edge {item!r} at position {at}")
        u, v = int(em.group(1)), int(em.group(2))
        if u >= n or v >= n:
            raise GraphFormatError(f"edge {item} at position {at} uses a vertex index >= n={n}")
        if u == v:
            raise GraphFormatError(f"loop edge {item} at position {at}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {item} at position {at}")
        seen.add(key)
        edges.append(key)
    labels: dict[int, int] = {}
    marks = m.group("marks").strip()
    if marks:
        for item in re.findall(r"@?\s*(\d+)\s*:\s*(\d+)", marks):
            v, l = int(item[0]), int(item[1])
            if v >= n:
                raise GraphFormatError(f"label mark on vertex {v} >= n={n}")
            if l in labels:
                raise GraphFormatError(f"label {l} used twice")
            labels[l] = v
        leftover = re.sub(r"@?\s*\d+\s*:\s*\d+|[,\s]", "", marks)
        if leftover:
            raise GraphFormatError(f"bad label marks {marks!r}")
    mu = None
    if m.group("mu") is not None:
        mu = [parse_number(x) for x in m.group("mu").split(",") if x.strip()]
    return Graph.from_edges(n, edges), labels, mu


def to_edge_list(g: Graph, labels: Mapping[int, int] | None = None) -> str:
    text = f"n={g.n}; edges: " + ", ".join(f"{u}-{v}" for u, v in g.edges())
    if labels:
        text = text.rstrip() + " " + " ".join(f"@{v}:{l}" for l, v in sorted(labels.items()))
    return text.rstrip()


# -- graph6 -----------------------------------------------------------------


def to_graph6(g: Graph) -> str:
    n = g.n
    if n < 63:
        out = [n + 63]
    elif n < 258048:
        out = [126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)]
    else:
        raise ValueError("graph too large for graph6")
    bitstream = [1 if g.has_edge(i, j) else 0 for j in range(n) for i in range(j)]
    bitstream += [0] * (-len(bitstream) % 6)
    for k in range(0, len(bitstream), 6):
        chunk = 0
        for b in bitstream[k:k + 6]:
            chunk = chunk << 1 | b
        out.append(chunk + 63)
    return bytes(out).decode("ascii")


def from_graph6(text: str) -> Graph:
    text = text.strip()
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    data = [ord(c) - 63 for c in text]
    if not data or any(not 0 <= d <= 63 for d in data):
        raise GraphFormatError(f"not a graph6 string: {text!r}")
    if data[0] == 63:
        if len(data) < 4:
            raise GraphFormatError("truncated graph6 size field")
        n = data[1] << 12 | data[2] << 6 | data[3]
        data = data[4:]
    else:
        n = data[0]
        data = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(data) != need:
        raise GraphFormatError(f"graph6 body has {len(data)} bytes, expected {need}")
    stream = [(d >> (5 - i)) & 1 for d in data for i in range(6)]
    edges = []
    k = 0
    for j in range(n):
        for i in range(j):
            if stream[k]:
                edges.append((i, j))
            k += 1
    if any(stream[k:]):
        raise GraphFormatError("nonzero padding bits in graph6 string")
    return Graph.from_edges(n, edges)


def parse_graph(text: str, format: str = "edge-list") -> Graph:
    """Parse an edge-list or graph6 string into a ``Graph``."""
    if format == "edge-list":
        g, labels, mu = _parse_edge_list_parts(text)
        if labels or mu is not None:
            raise GraphFormatError("plain graphs take no labels or weights")
        return g
    if format == "graph6":
        return from_graph6(text)
    raise ValueError(f"unknown graph format {format!r}")


def parse_labeled_graph(text: str) -> LabeledGraph:
    g, labels, mu = _parse_edge_list_parts(text)
    if mu is not None:
        raise GraphFormatError("labeled graphs take no weights")
    return LabeledGraph.from_mapping(g, labels)


def parse_weighted_graph(text: str) -> WeightedGraph:
    g, labels, mu = _parse_edge_list_parts(text)
    if labels:
        raise GraphFormatError("weighted graphs take no labels")
    if mu is None:
        return WeightedGraph.uniform(g)
    return WeightedGraph(g, tuple(mu))


# -- named graphs -----------------------------------------------------------


def named_graph(name: str) -> Graph:
    """``K1..K6``, ``P2..P6``, ``C3..C6``, ``E0`` and edgeless ``E<n>``."""
    m = re.fullmatch(r"([KPCE])(\d+)", name)
    if not m:
        raise KeyError(name)
    kind, size = m.group(1), int(m.group(2))
    if kind == "K" and 1 <= size <= 6:
        return Graph.complete(size)
    if kind == "P" and 2 <= size <= 6:
        return Graph.path(size)
    if kind == "C" and 3 <= size <= 6:
        return Graph.cycle(size)
    if kind == "E" and 0 <= size <= 6:
        return Graph.empty(size)
    raise KeyError(name)


def all_graphs(n: int) -> Iterator[Graph]:
    """Every graph on vertex set ``0..n-1`` (labeled, so 2^C(n,2) of them)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
