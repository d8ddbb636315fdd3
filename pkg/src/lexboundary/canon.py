"""Canonical forms, label-preserving isomorphism and automorphism search.

Everything is colour refinement followed by individualization, which is
plenty for the graphs used here (at most a few dozen vertices). Labels are
part of the initial colouring, so every labeled vertex starts in a cell of
its own.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .graphs import Graph, LabeledGraph, bits

UNLABELED = -1


@lru_cache(maxsize=None)
def _digit_weights(n: int) -> tuple[list[int], int]:
    base = n + 1
    return [base ** c for c in range(n)], base ** n


def _refine(adj: tuple[int, ...], colors: list, nbrs: list[list[int]] | None = None) -> list[int]:
    """Coarsest equitable refinement; colours come back as ranks ``0..k-1``.

    Ranks are derived from sorted signatures only, so the result is
    equivariant under vertex permutations.
    """
    n = len(adj)
    ranks = sorted(set(colors))
    index = {c: i for i, c in enumerate(ranks)}
    cur = [index[c] for c in colors]
    ncls = len(ranks)
    if nbrs is None:
        nbrs = [bits(m) for m in adj]
    # Neighbour colour multisets as base-(n+1) digit strings: exact, and ordered
    # by the colours alone.
    weight, top = _digit_weights(n)
    while ncls < n:
        w = [weight[c] for c in cur]
        sigs = [c * top + sum([w[u] for u in nb]) for c, nb in zip(cur, nbrs)]
        distinct = sorted(set(sigs))
        if len(distinct) == ncls:
            return cur
        index = {s: i for i, s in enumerate(distinct)}
        cur = [index[s] for s in sigs]
        ncls = len(distinct)
    return cur


def _target_cell(colors: list[int]) -> list[int] | None:
    """Smallest non-singleton cell, ties going to the lowest colour."""
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    best = None
    for c, cell in cells.items():
        if len(cell) > 1 and (best is None or (len(cell), c) < (len(best), colors[best[0]])):
            best = cell
    return best


def _individualize(colors: list[int], v: int) -> list[int]:
    out = [2 * c + 1 for c in colors]
    out[v] = 2 * colors[v]
    return out


def _twin_representatives(adj: tuple[int, ...], cell: list[int]) -> list[int]:
    reps: list[int] = []
    for v in cell:
        for r in reps:
            if adj[v] & ~(1 << r) == adj[r] & ~(1 << v):
                break
        else:
            reps.append(v)
    return reps


def _initial_colors(h: LabeledGraph) -> list:
    lab = h.label_of
    return [(1, lab[v]) if v in lab else (0, 0) for v in range(h.n)]


def _certificate(h: LabeledGraph, order: list[int]) -> tuple:
    """``order[v]`` is the new position of ``v``."""
    n = h.n
    inv = [0] * n
    for v, p in enumerate(order):
        inv[p] = v
    lab = h.label_of
    labels = tuple(lab.get(inv[p], UNLABELED) for p in range(n))
    word = 0
    adj = h.graph.adj
    for p in range(n - 1):
        row = adj[inv[p]]
        for u in inv[p + 1:]:
            word = word << 1 | (row >> u & 1)
    return labels, word


def _canonical_order(h: LabeledGraph) -> tuple[tuple, list[int]]:
    adj = h.graph.adj
    nbrs = [bits(m) for m in adj]
    best: list = [None, None]

    def search(colors: list[int]) -> None:
        colors = _refine(adj, colors, nbrs)
        cell = _target_cell(colors)
        if cell is None:
            cert = _certificate(h, colors)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colors
            return
        for v in _twin_representatives(adj, cell):
            search(_individualize(colors, v))

    search(_initial_colors(h))
    return best[0], best[1]


def _encode_key(n: int, labels: tuple[int, ...], word: int) -> bytes:
    lab = ",".join("" if l == UNLABELED else str(l) for l in labels)
    return f"{n}|{lab}|{word:x}".encode("ascii")


@lru_cache(maxsize=1 << 18)
def canonical_form(h: LabeledGraph | Graph) -> bytes:
    """Byte key equal for exactly the label-preservingly isomorphic graphs."""
    if isinstance(h, Graph):
        h = LabeledGraph(h)
    if h.n == 0:
        return _encode_key(0, (), 0)
    (labels, word), _ = _canonical_order(h)
    return _encode_key(h.n, labels, word)


BATCH_MAX_VERTICES = 11


def _strict_ranks(values: np.ndarray) -> np.ndarray:
    """Per row: how many entries are strictly smaller."""
    return (values[:, None, :] < values[:, :, None]).sum(axis=2)


def _batch_refine(mat: np.ndarray, cur: np.ndarray) -> np.ndarray:
    n = mat.shape[1]
    weight_list, top = _digit_weights(n)
    weight = np.array(weight_list, dtype=np.int64)
    cur = _strict_ranks(cur)
    for _ in range(n):
        new = _strict_ranks(cur * top + np.einsum("bij,bj->bi", mat, weight[cur]))
        if np.array_equal(new, cur):
            break
        cur = new
    return cur


def _batch_words(mat: np.ndarray, cur: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Discreteness flags, inverse orders and certificate words."""
    count, n = cur.shape
    discrete = (np.sort(cur, axis=1) == np.arange(n)).all(axis=1)
    inv = np.argsort(cur, axis=1)
    permuted = mat[np.arange(count)[:, None, None], inv[:, :, None], inv[:, None, :]]
    iu, ju = np.triu_indices(n, 1)
    place = np.left_shift(np.int64(1), np.arange(len(iu) - 1, -1, -1, dtype=np.int64))
    return discrete, inv, (permuted[:, iu, ju] * place).sum(axis=1)


def canonical_forms_batch(
    adj: np.ndarray, labels: tuple[tuple[int, int], ...] = ()
) -> list[bytes | None]:
    """Keys for a stack of 0/1 adjacency matrices sharing one labeling.

    Colours are "number of strictly smaller signatures", a monotone
    relabeling of the ranks used by ``_refine``, so partitions, cell choices
    and certificates agree with ``canonical_form``. Graphs needing more than
    one level of individualization come back as None.
    """
    count, n = adj.shape[0], adj.shape[1]
    if n == 0 or n > BATCH_MAX_VERTICES:
        return [None] * count
    h = LabeledGraph(Graph.empty(n), labels)
    initial = _initial_colors(h)
    start = np.array([sum(r < c for r in set(initial)) for c in initial], dtype=np.int64)
    mat = adj.astype(np.int64)
    cur = _batch_refine(mat, np.tile(start, (count, 1)))
    discrete, inv, words = _batch_words(mat, cur)
    # Labeled vertices keep the top colours, so every leaf shares this tuple.
    lab = h.label_of
    key_labels = tuple(lab.get(v, UNLABELED) for v in inv[0].tolist()) if count else ()
    best: list[int | None] = [int(w) if d else None for d, w in zip(discrete.tolist(), words.tolist())]

    parents, children = [], []
    rows = (mat << np.arange(n)).sum(axis=2).tolist()
    for b in np.flatnonzero(~discrete).tolist():
        colors = cur[b].tolist()
        cell = _target_cell(colors)
        for v in _twin_representatives(tuple(rows[b]), cell):
            parents.append(b)
            children.append(_individualize(colors, v))
    if parents:
        idx = np.array(parents)
        sub = _batch_refine(mat[idx], np.array(children, dtype=np.int64))
        leaf, _, leaf_words = _batch_words(mat[idx], sub)
        failed = set()
        for b, ok, w in zip(parents, leaf.tolist(), leaf_words.tolist()):
            if not ok:
                failed.add(b)
            elif best[b] is None or w < best[b]:
                best[b] = w
        for b in failed:
            best[b] = None
    return [None if w is None else _encode_key(n, key_labels, w) for w in best]


@lru_cache(maxsize=1 << 16)
def graph_from_key(key: bytes) -> LabeledGraph:
    """Inverse of ``canonical_form``: the canonical representative."""
    n_text, lab_text, word_text = key.decode("ascii").split("|")
    n = int(n_text)
    word = int(word_text, 16)
    npairs = n * (n - 1) // 2
    edges = []
    k = npairs - 1
    for p in range(n):
        for q in range(p + 1, n):
            if word >> k & 1:
                edges.append((p, q))
            k -= 1
    labels = []
    if n:
        for v, l in enumerate(lab_text.split(",")):
            if l:
                labels.append((int(l), v))
    return LabeledGraph(Graph.from_edges(n, edges), tuple(labels))


def canonical_graph(h: LabeledGraph | Graph) -> LabeledGraph:
    return graph_from_key(canonical_form(h))


def are_isomorphic_labeled(h1: LabeledGraph | Graph, h2: LabeledGraph | Graph) -> bool:
    """True iff some bijection preserves adjacency, non-adjacency and labels."""
    if isinstance(h1, Graph):
        h1 = LabeledGraph(h1)
    if isinstance(h2, Graph):
        h2 = LabeledGraph(h2)
    if h1.n != h2.n or h1.label_set != h2.label_set or h1.graph.num_edges != h2.graph.num_edges:
        return False
    return canonical_form(h1) == canonical_form(h2)


def _joint_isomorphism(adj: tuple[int, ...], c1: list[int], c2: list[int]) -> list[int] | None:
    """An automorphism of ``adj`` carrying colouring ``c1`` onto ``c2``, if any."""
    n = len(adj)
    # Refine the disjoint union so colour names agree between the two sides.
    union_adj = tuple(adj) + tuple(m << n for m in adj)
    colors = _refine(union_adj, list(c1) + list(c2))
    left, right = colors[:n], colors[n:]
    if sorted(left) != sorted(right):
        return None
    cell = _target_cell(left)
    if cell is None:
        pos = {c: v for v, c in enumerate(right)}
        perm = [pos[left[v]] for v in range(n)]
        for u in range(n):
            image = 0
            for w in bits(adj[u]):
                image |= 1 << perm[w]
            if image != adj[perm[u]]:
                return None
        return perm
    v = cell[0]
    color = left[v]
    for w in range(n):
        if right[w] != color:
            continue
        found = _joint_isomorphism(adj, _individualize(left, v), _individualize(right, w))
        if found is not None:
            return found
    return None


def nontrivial_automorphism(g: Graph | LabeledGraph) -> list[int] | None:
    """Return some non-identity label-preserving automorphism, or None."""
    h = g if isinstance(g, LabeledGraph) else LabeledGraph(g)
    adj = h.graph.adj
    colors = _refine(adj, _initial_colors(h))
    while True:
        cell = _target_cell(colors)
        if cell is None:
            return None
        v = cell[0]
        fixed = _individualize(colors, v)
        for w in cell[1:]:
            perm = _joint_isomorphism(adj, fixed, _individualize(colors, w))
            if perm is not None:
                return perm
        # Every automorphism fixes v; continue inside the stabilizer.
        colors = _refine(adj, fixed)
