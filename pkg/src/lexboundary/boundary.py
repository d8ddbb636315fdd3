"""The self-similar edge/P4 boundary curve of a two-graph lex family.

Given stringent F1, F2 on [n] and the measure mu with mu(1) = a,
mu(2..n) = b and sum mu^4 = 1/2, every infinite lex product whose i-th
factor is (F1, mu) for i in T and (F2, mu) otherwise has

    t(P4) = lam * alpha1 + (1 - lam) * alpha2,      lam = sum_{i in T} 2^-i
    t(K2) = beta2 + (beta1 - beta2) (1 - gamma) g(T),  g(T) = sum_{i in T} gamma^(i-1)

with gamma = m2(mu), alpha_i the P4 density of the pure power of (F_i, mu)
and beta_i its edge density. The curve psi(x) is the least edge density at
P4 density x.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .canon import canonical_form
from .constructions import (
    LexSpec,
    decorations,
    graphs_up_to_iso,
    implant,
    moment,
    product_density,
    twin_set_blowup,
)
from .density import weighted_density
from .graphs import Graph, bits, LabeledGraph, WeightedGraph, from_graph6, to_edge_list, to_graph6
from .quantum import QuantumGraph, _expand, evaluate, unlabel
from .randgraphs import derive_seed, find_stringent, splitmix_draw
from .structure import is_stringent

DEFAULT_SEED = 7
DEFAULT_N = 16
DEFAULT_DEPTH = 60
SNAP_LEVEL = 30
P4 = Graph.path(4)
K2 = Graph.complete(2)

Real = Union[float, Fraction]


class SetupError(RuntimeError):
    pass


def solve_mu(n: int, tol: float = 1e-15) -> tuple[float, ...]:
    """Weights (a, b, ..., b) with a > 1/n and a^4 + (n-1) b^4 = 1/2."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def excess(a):
        b = (1 - a) / (n - 1)
        return a ** 4 + (n - 1) * b ** 4 - 0.5

    lo, hi = 1.0 / n, 1.0
    if not excess(lo) < 0 < excess(hi):
        raise SetupError("bisection bracket has no sign change")
    for _ in range(400):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * 1e-3:
            break
    a = (lo + hi) / 2
    b = (1 - a) / (n - 1)
    if abs(excess(a)) > max(tol, 1e-15):
        raise SetupError(f"bisection stalled with residual {excess(a)!r}")
    return (a,) + (b,) * (n - 1)


@dataclass(frozen=True)
class TheoremSetup:
    n: int
    f1: Graph
    f2: Graph
    mu: tuple[float, ...]
    gamma: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    seeds: tuple[int, int]
    attempt: int = 0

    @property
    def w1(self) -> WeightedGraph:
        return WeightedGraph(self.f1, self.mu)

    @property
    def w2(self) -> WeightedGraph:
        return WeightedGraph(self.f2, self.mu)

    def check(self) -> None:
        """Raise if any defining invariant fails."""
        problems = []
        if not (is_stringent(self.f1) and is_stringent(self.f2)):
            problems.append("graphs must be stringent")
        if abs(moment(self.mu, 4) - 0.5) > 1e-12:
            problems.append("fourth moment is not 1/2")
        if len(set(self.mu[1:])) > 1:
            problems.append("mu(2..n) must be equal")
        if self.gamma < math.sqrt(0.5):
            problems.append("gamma below sqrt(1/2)")
        if not self.alpha1 < self.alpha2:
            problems.append("alpha1 >= alpha2")
        if not self.beta1 < self.beta2:
            problems.append("beta1 >= beta2")
        if problems:
            raise SetupError("; ".join(problems))

    def to_dict(self) -> dict:
        def g(x):
            return {"edges": to_edge_list(x), "graph6": to_graph6(x)}

        def r(x):
            return f"{x:.18g}"

        return {
            "n": self.n,
            "seeds": list(self.seeds),
            "attempt": self.attempt,
            "F1": g(self.f1),
            "F2": g(self.f2),
            "mu": [r(x) for x in self.mu],
            "gamma": r(self.gamma),
            "alpha1": r(self.alpha1),
            "alpha2": r(self.alpha2),
            "beta1": r(self.beta1),
            "beta2": r(self.beta2),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> TheoremSetup:
        return cls(
            n=d["n"],
            f1=from_graph6(d["F1"]["graph6"]),
            f2=from_graph6(d["F2"]["graph6"]),
            mu=tuple(float(x) for x in d["mu"]),
            gamma=float(d["gamma"]),
            alpha1=float(d["alpha1"]),
            alpha2=float(d["alpha2"]),
            beta1=float(d["beta1"]),
            beta2=float(d["beta2"]),
            seeds=tuple(d["seeds"]),
            attempt=d.get("attempt", 0),
        )


def pure_power_constants(f: Graph, mu: Sequence[float]) -> tuple[float, float]:
    """(P4 density, edge density) of the infinite lex power of (f, mu)."""
    w = WeightedGraph(f, tuple(mu))
    alpha = weighted_density(P4, w) / (1 - moment(mu, 4))
    beta = weighted_density(K2, w) / (1 - moment(mu, 2))
    return alpha, beta


def theorem_setup(n: int = DEFAULT_N, seed: int = DEFAULT_SEED, max_attempts: int = 64) -> TheoremSetup:
    """Sample F1 ~ G(n, 1/3) and F2 ~ G(n, 1/2) until the orderings hold."""
    if n < 6:
        raise ValueError("n must be at least 6")
    mu = solve_mu(n)
    gamma = moment(mu, 2)
    for attempt in range(max_attempts):
        s1, s2 = derive_seed(seed, attempt, 1), derive_seed(seed, attempt, 2)
        f1 = find_stringent(n, Fraction(1, 3), s1)
        f2 = find_stringent(n, Fraction(1, 2), s2)
        a1, b1 = pure_power_constants(f1, mu)
        a2, b2 = pure_power_constants(f2, mu)
        if a1 < a2 and b1 < b2:
            setup = TheoremSetup(n, f1, f2, mu, gamma, a1, a2, b1, b2, (s1, s2), attempt)
            setup.check()
            return setup
    raise SetupError(f"no ordered pair found in {max_attempts} attempts")


# -- binary expansions ------------------------------------------------------


def _exact(lam: Real) -> Fraction:
    lam = Fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda {lam} is outside [0, 1]")
    return lam


def dyadic_level(lam: Fraction) -> Optional[int]:
    """j with lam = m / 2^j, m odd, or None when lam is not dyadic."""
    d = lam.denominator
    if d & (d - 1):
        return None
    return d.bit_length() - 1


def expansion_digits(lam: Real, depth: int, expansion: str = "unique") -> list[int]:
    """First ``depth`` binary digits of lam.

    ``unique`` and ``finite`` give the terminating expansion (all ones for
    lam = 1); ``infinite`` gives the one ending in ones. 0 and 1 have a
    single expansion.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if expansion not in ("unique", "finite", "infinite"):
        raise ValueError(f"unknown expansion {expansion!r}")
    lam = _exact(lam)
    level = dyadic_level(lam)
    if expansion != "unique" and level is None:
        raise ValueError(f"lambda {lam} is not dyadic, so its expansion is unique")
    if lam == 1:
        return [1] * depth
    if lam == 0:
        return [0] * depth
    if expansion == "infinite":
        head = expansion_digits(lam, level)
        head[-1] = 0
        return (head + [1] * depth)[:depth]
    digits = []
    x = lam
    for _ in range(depth):
        x *= 2
        d = int(x >= 1)
        digits.append(d)
        x -= d
    return digits


def g_value(lam: Real, gamma: float, depth: int = DEFAULT_DEPTH, expansion: str = "unique") -> float:
    """sum of gamma^(i-1) over the 1-positions i <= depth of the chosen expansion."""
    total, power = 0.0, 1.0
    for d in expansion_digits(lam, depth, expansion):
        if d:
            total += power
        power *= gamma
    return total


def g_truncation_bound(gamma: float, depth: int) -> float:
    return gamma ** depth / (1 - gamma)


def edge_density_of(setup: TheoremSetup, g: float) -> float:
    return setup.beta2 + (setup.beta1 - setup.beta2) * (1 - setup.gamma) * g


def p4_density_of(setup: TheoremSetup, lam: Real) -> float:
    lam = float(lam)
    return lam * setup.alpha1 + (1 - lam) * setup.alpha2


def psi_lambda(setup: TheoremSetup, lam: Real, depth: int = DEFAULT_DEPTH) -> float:
    """psi at the point with expansion parameter ``lam`` (taken exactly)."""
    lam = _exact(lam)
    if 0 < lam < 1 and dyadic_level(lam) is not None:
        return min(
            edge_density_of(setup, g_value(lam, setup.gamma, depth, e))
            for e in ("finite", "infinite")
        )
    return edge_density_of(setup, g_value(lam, setup.gamma, depth))


def lambda_of(setup: TheoremSetup, x: float) -> Fraction:
    """Expansion parameter of x, snapped to a nearby low-level dyadic if any."""
    span = setup.alpha2 - setup.alpha1
    slack = 8 * math.ulp(max(abs(setup.alpha1), abs(setup.alpha2)))
    if not setup.alpha1 - slack <= x <= setup.alpha2 + slack:
        raise ValueError(f"x = {x!r} is outside [{setup.alpha1!r}, {setup.alpha2!r}]")
    lam = min(max((setup.alpha2 - x) / span, 0.0), 1.0)
    snapped = Fraction(round(lam * 2 ** SNAP_LEVEL), 2 ** SNAP_LEVEL)
    if abs(float(snapped) - lam) <= 8 * slack / span:
        return snapped
    return Fraction(lam)


def psi(setup: TheoremSetup, x: float, depth: int = DEFAULT_DEPTH) -> float:
    return psi_lambda(setup, lambda_of(setup, x), depth)


def finite_t_spec(setup: TheoremSetup, t_set: Iterable[int]) -> LexSpec:
    """Lex product with (F1, mu) at the positions in ``t_set`` and (F2, mu) elsewhere."""
    t_set = set(t_set)
    if any(i < 1 for i in t_set):
        raise ValueError("positions start at 1")
    length = max(t_set, default=0)
    prefix = tuple(setup.w1 if i in t_set else setup.w2 for i in range(1, length + 1))
    return LexSpec(prefix, (setup.w2,))


def closed_form_point(setup: TheoremSetup, t_set: Iterable[int]) -> tuple[float, float]:
    """(P4 density, edge density) of the finite-T product from the closed forms."""
    t_set = sorted(set(t_set))
    lam = sum((Fraction(1, 2 ** i) for i in t_set), Fraction(0))
    g = sum(setup.gamma ** (i - 1) for i in t_set)
    return p4_density_of(setup, lam), edge_density_of(setup, g)


# -- curve sampling ---------------------------------------------------------


@dataclass(frozen=True)
class CurveConfig:
    resolution: int = 1025
    depth: int = DEFAULT_DEPTH
    dyadic_level: int = 8


@dataclass(frozen=True)
class CurveSeries:
    setup: TheoremSetup
    depth: int
    lambdas: tuple[Fraction, ...]
    points: tuple[tuple[float, float], ...] = field(repr=False)

    @property
    def trunc_bound(self) -> float:
        """Bound on the error of every psi value from cutting expansions at depth."""
        return abs(self.setup.beta1 - self.setup.beta2) * self.setup.gamma ** self.depth

    def to_csv(self) -> str:
        tb = f"{self.trunc_bound:.17g}"
        lines = ["x,psi,trunc_bound"]
        lines += [f"{x:.17g},{y:.17g},{tb}" for x, y in self.points]
        return "\n".join(lines) + "\n"

    def to_svg(self, width: int = 800, height: int = 500) -> str:
        xs = [p[0] for p in self.points]
        ys = [p[1] for p in self.points]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        sx = width / ((x1 - x0) or 1.0)
        sy = height / ((y1 - y0) or 1.0)
        coords = " ".join(f"{(x - x0) * sx:.3f},{(y1 - y) * sy:.3f}" for x, y in self.points)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">\n'
            f'<polyline fill="none" stroke="black" stroke-width="0.6" points="{coords}"/>\n'
            "</svg>\n"
        )


def curve_lambdas(resolution: int, dyadic_level: int) -> list[Fraction]:
    """Uniform grid in lam plus every dyadic up to ``dyadic_level``, sorted by decreasing lam."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    grid = {Fraction(i, resolution - 1) for i in range(resolution)}
    grid.update(Fraction(m, 2 ** dyadic_level) for m in range(2 ** dyadic_level + 1))
    return sorted(grid, reverse=True)


def sample_curve(setup: TheoremSetup, resolution: int, depth: int = DEFAULT_DEPTH, dyadic_level: int = 8) -> CurveSeries:
    """psi on a grid with x increasing from alpha1 to alpha2."""
    lams = curve_lambdas(resolution, dyadic_level)
    points = []
    kept = []
    for lam in lams:
        x = p4_density_of(setup, lam)
        if points and x <= points[-1][0]:
            continue
        points.append((x, psi_lambda(setup, lam, depth)))
        kept.append(lam)
    return CurveSeries(setup, depth, tuple(kept), tuple(points))


def quotient_scan(setup: TheoremSetup, j_min: int = 4, j_max: int = 20, depth: int = DEFAULT_DEPTH) -> list[float]:
    """M_j = max |psi(x + h_j) - psi(x)| / h_j over the level-j dyadic grid."""
    if j_min < 1 or j_max < j_min:
        raise ValueError("need 1 <= j_min <= j_max")
    if depth <= j_max:
        raise ValueError("depth must exceed j_max")
    gamma = setup.gamma
    powers = gamma ** np.arange(depth)
    scale = (setup.beta1 - setup.beta2) * (1 - gamma)
    span = setup.alpha2 - setup.alpha1
    out = []
    for j in range(j_min, j_max + 1):
        k = np.arange(2 ** j + 1, dtype=np.int64)
        g_fin = np.zeros(k.shape)
        for i in range(1, j + 1):
            g_fin += ((k >> (j - i)) & 1) * powers[i - 1]
        tail = powers[j:].sum()
        g_inf = np.empty_like(g_fin)
        g_inf[0] = 0.0
        g_inf[1:] = g_fin[:-1] + tail
        g_fin[-1] = g_inf[-1]
        t = setup.beta2 + scale * np.stack([g_fin, g_inf])
        values = t.min(axis=0)
        h = span / 2 ** j
        out.append(float(np.abs(np.diff(values)).max() / h))
    return out


def region_scatter(setup: TheoremSetup, count: int, length: int = 12, seed: int = DEFAULT_SEED) -> list[tuple[frozenset[int], float, float]]:
    """(T, t(P4), t(K2)) for T = {} followed by ``count - 1`` seeded random subsets of [length]."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rows = [(frozenset(), *closed_form_point(setup, ()))]
    for c in range(1, count):
        draw = splitmix_draw(seed, c)
        t_set = frozenset(i + 1 for i in range(length) if draw >> i & 1)
        rows.append((t_set, *closed_form_point(setup, t_set)))
    return rows


# -- split forcing conditions -----------------------------------------------


@dataclass(frozen=True)
class Condition:
    family: int
    name: str
    f: QuantumGraph
    target: Fraction


def _homogeneity_conditions(f: LabeledGraph) -> list[tuple[str, QuantumGraph]]:
    """Twins of each vertex must see cone vertices and miss isolated ones."""
    n = f.n
    out = []
    for v in range(n):
        for extra, edge in (("cone", False), ("isolated", True)):
            x, y = n, n + 1
            adj = list(f.graph.adj) + [0, 0]
            for w in bits(f.graph.adj[v]):
                adj[x] |= 1 << w
                adj[w] |= 1 << x
            if extra == "cone":
                for w in range(n):
                    adj[y] |= 1 << w
                    adj[w] |= 1 << y
            if edge:
                adj[x] |= 1 << y
                adj[y] |= 1 << x
            counts = _expand(n + 2, adj, [(v, x)], f.labels)
            out.append((f"twin of {f.label_of[v]} vs {extra}", QuantumGraph.from_counts(counts, f.label_set)))
    return out


def split_forcing_conditions(f: LabeledGraph, mu: Sequence[Real], k: int) -> list[Condition]:
    """Labeled conditions t(f_i, phi; W) = a_i describing split graphons around ``f``."""
    if not f.is_fully_labeled:
        raise ValueError("the base graph must be fully labeled")
    if not is_stringent(f.graph):
        raise ValueError("the base graph must be stringent")
    if k < 1:
        raise ValueError("k must be positive")
    if k > 3:
        raise ValueError("k > 3 would exceed the term-count guard")
    if len(mu) != f.n:
        raise ValueError("one weight per vertex is required")
    mu = [Fraction(m) for m in mu]
    n = f.n
    lab = [f.label_of[v] for v in range(n)]
    h, iso, cone = decorations(f)
    conds = [Condition(1, "cover", h + QuantumGraph.from_graph(iso) + QuantumGraph.from_graph(cone), Fraction(1))]
    single = [twin_set_blowup(f, [v]) for v in range(n)]
    for v in range(n):
        conds.append(Condition(2, f"measure of {lab[v]}", single[v] - mu[v] * h, Fraction(0)))
    for v, w in combinations(range(n), 2):
        conds.append(
            Condition(3, f"pair {lab[v]},{lab[w]}", twin_set_blowup(f, [v, w]) - single[v] * single[w], Fraction(0))
        )
    for name, q in _homogeneity_conditions(f):
        conds.append(Condition(4, name, q, Fraction(0)))
    patterns = graphs_up_to_iso(k)
    implants = [[implant(f, lab[v], H)[1] for H in patterns] for v in range(n)]
    for v in range(n):
        w = (v + 1) % n
        for H, fv, fw in zip(patterns, implants[v], implants[w]):
            q = fv * (mu[v] ** -k) - fw * (mu[w] ** -k)
            conds.append(Condition(5, f"bags {lab[v]},{lab[w]} on {to_edge_list(H)}", q, Fraction(0)))
    return conds


def condition_square(f: LabeledGraph, c: Condition) -> QuantumGraph:
    """[[(f_c - a_c F)^2]]: F stands for the constant on its own core."""
    core = QuantumGraph.from_graph(f)
    d = c.f - c.target * core
    return unlabel(d * d)


def aggregate_forcing(f: LabeledGraph, conditions: Sequence[Condition]) -> QuantumGraph:
    total = QuantumGraph.zero()
    for c in conditions:
        total = total + condition_square(f, c)
    return total


def lex_truncation_pins(f: LabeledGraph, depth: int) -> dict[int, int]:
    """Pin each label to its vertex in the first coordinate of the depth-fold lex power."""
    block = f.n ** (depth - 1)
    return {label: v * block for label, v in f.labels}


def forcing_residual(f: LabeledGraph, mu: Sequence[Real], k: int, depth: int, conditions: Optional[Sequence[Condition]] = None) -> Real:
    """t(aggregated f; depth-fold lex power of (f, mu)) without building the power."""
    w = WeightedGraph(f.graph, tuple(mu))
    conditions = split_forcing_conditions(f, mu, k) if conditions is None else conditions
    agg = aggregate_forcing(f, conditions)
    total = Fraction(0) if w.exact else 0.0
    cache: dict[bytes, Real] = {}
    for h, c in agg.items():
        key = canonical_form(h)
        if key not in cache:
            cache[key] = product_density(h.graph, [w] * depth)
        total += c * cache[key] if w.exact else float(c) * cache[key]
    return total


def condition_values(f: LabeledGraph, conditions: Sequence[Condition], w: WeightedGraph, phi: dict[int, int]) -> list[Real]:
    """t(f_i, phi; w) - a_i for each condition, on an explicit weighted graph."""
    return [evaluate(c.f, phi, w) - c.target for c in conditions]
