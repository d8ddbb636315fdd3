"""Command-line entry point: ``lexboundary <subcommand> ...``.

Exit status is 0 on success, 2 on usage or input errors and 1 when a
computation fails. ``LEXBOUNDARY_SEED`` and ``LEXBOUNDARY_DEPTH`` override
the default seed and expansion depth.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import boundary, constructions, randgraphs, structure
from .density import density, weighted_density
from .expr import ExpressionError, parse_expression, to_expression
from .graphs import (
    Graph,
    GraphFormatError,
    LabeledGraph,
    WeightedGraph,
    from_graph6,
    named_graph,
    parse_labeled_graph,
    parse_weighted_graph,
    to_edge_list,
    to_graph6,
)
from .quantum import evaluate

DEFAULT_SEED = boundary.DEFAULT_SEED
DEFAULT_DEPTH = boundary.DEFAULT_DEPTH


class UsageError(Exception):
    pass


# -- input helpers ----------------------------------------------------------


def _read(text: str) -> str:
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text().strip()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return text


def read_labeled(text: str) -> LabeledGraph:
    """Named graph, ``n=..; edges: ..`` edge list, graph6, or ``@file`` of any of these."""
    text = _read(text)
    try:
        return LabeledGraph(named_graph(text))
    except KeyError:
        pass
    try:
        if "n=" in text.replace(" ", ""):
            return parse_labeled_graph(text)
        return LabeledGraph(from_graph6(text))
    except (GraphFormatError, ValueError) as exc:
        raise UsageError(f"bad graph {text!r}: {exc}") from None


def read_graph(text: str) -> Graph:
    return read_labeled(text).graph


def read_weighted(text: str, use_float: bool = False) -> WeightedGraph:
    """A weighted graph; plain graphs get the uniform measure."""
    text = _read(text)
    if "mu:" in text:
        try:
            w = parse_weighted_graph(text)
        except (GraphFormatError, ValueError, TypeError) as exc:
            raise UsageError(f"bad weighted graph: {exc}") from None
    else:
        w = WeightedGraph.uniform(read_graph(text))
    if use_float and w.exact:
        w = WeightedGraph(w.graph, tuple(float(x) for x in w.mu))
    return w


def read_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad rational {text!r}") from None


def read_probability(text: str) -> Fraction:
    p = read_fraction(text)
    if not 0 < p < 1:
        raise UsageError(f"edge probability {p} is not in (0, 1)")
    return p


def read_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


def read_pins(items: Sequence[str]) -> dict[int, int]:
    pins = {}
    for item in items:
        label, sep, vertex = item.partition("=")
        if not sep:
            raise UsageError(f"pin {item!r} is not label=vertex")
        try:
            pins[int(label)] = int(vertex)
        except ValueError:
            raise UsageError(f"bad pin {item!r}") from None
    return pins


# -- output helpers ---------------------------------------------------------


def fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return {"value": str(x), "exact": True}
    if isinstance(x, float):
        return {"value": float(f"{x:.17g}"), "exact": False}
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


class Output:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.json = args.json
        self.lines: list[str] = []

    def emit(self, result: Any, text: Optional[str] = None, **extra) -> None:
        if self.json:
            payload = {"command": self.args.command, "result": jsonable(result)}
            payload.update({k: jsonable(v) for k, v in extra.items()})
            payload["meta"] = self.meta()
            self.lines.append(json.dumps(payload, sort_keys=True))
        else:
            self.lines.append(fmt(result) if text is None else text)

    def meta(self) -> dict:
        meta = {}
        for attr in ("seed", "depth"):
            if hasattr(self.args, attr):
                meta[attr] = getattr(self.args, attr)
        env = {k: os.environ[k] for k in ("LEXBOUNDARY_SEED", "LEXBOUNDARY_DEPTH") if k in os.environ}
        if env:
            meta["env"] = env
        return meta

    def flush(self) -> None:
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        out = getattr(self.args, "out", None)
        if out:
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)


# -- subcommands ------------------------------------------------------------


def cmd_density(args, out: Output) -> None:
    out.emit(density(read_graph(args.pattern), read_graph(args.target)))


def cmd_wdensity(args, out: Output) -> None:
    out.emit(weighted_density(read_graph(args.pattern), read_weighted(args.target, args.float)))


def cmd_eval(args, out: Output) -> None:
    try:
        f = parse_expression(_read(args.expr))
    except ExpressionError as exc:
        raise UsageError(f"bad expression: {exc}") from None
    w = read_weighted(args.target, args.float)
    pins = read_pins(args.pin) if args.pin else None
    out.emit(evaluate(f, pins, w), expression=to_expression(f))


def cmd_check(args, out: Output) -> None:
    g = read_graph(args.graph)
    if args.property == "homogeneous":
        if args.set is None:
            raise UsageError("check homogeneous needs --set")
        out.emit(structure.is_homogeneous(g, read_ints(args.set)))
        return
    test = {"prime": structure.is_prime, "asymmetric": structure.is_asymmetric, "stringent": structure.is_stringent}
    out.emit(test[args.property](g))


def cmd_fold(args, out: Output) -> None:
    g, h = read_graph(args.graph), read_graph(args.host)
    out.emit(structure.is_folding(read_ints(args.map), g, h))


def cmd_sample(args, out: Output) -> None:
    g = randgraphs.sample_gnp(args.n, read_probability(args.p), args.seed)
    if out.json:
        out.emit({"edges": to_edge_list(g), "graph6": to_graph6(g)})
    else:
        out.emit(g, text=to_graph6(g) if args.graph6 else to_edge_list(g))


def cmd_rate(args, out: Output) -> None:
    records = list(randgraphs.stringent_trials(args.n, read_probability(args.p), args.trials, args.seed))
    failures = [r.seed for r in records if not r.stringent]
    rate = Fraction(len(records) - len(failures), len(records))
    if args.jsonl:
        for r in records:
            out.lines.append(json.dumps(
                {"trial": r.trial, "seed": r.seed, "prime": r.prime, "asymmetric": r.asymmetric, "stringent": r.stringent}
            ))
    out.emit(rate, failures=failures)


def cmd_bound(args, out: Output) -> None:
    b = randgraphs.prime_failure_bound(args.n, read_probability(args.p))
    out.emit(b, text=f"{b} ~ {float(b):.17g}" if args.decimal else None)


def cmd_find_stringent(args, out: Output) -> None:
    if args.n < 6:
        raise UsageError("no stringent graphs exist below 6 vertices")
    g = randgraphs.find_stringent(args.n, read_probability(args.p), args.seed, args.attempts)
    if out.json:
        out.emit({"edges": to_edge_list(g), "graph6": to_graph6(g)})
    else:
        out.emit(g, text=to_graph6(g) if args.graph6 else to_edge_list(g))


def cmd_lex_density(args, out: Output) -> None:
    try:
        spec = constructions.parse_lex_spec(_read(args.spec))
    except (constructions.ConstructionError, GraphFormatError, ValueError) as exc:
        raise UsageError(f"bad lex spec: {exc}") from None
    mode: Any = args.mode
    if mode != "exact":
        try:
            mode = int(mode)
        except ValueError:
            raise UsageError("--mode is 'exact' or a number of terms") from None
    value, bound = constructions.lex_density(read_graph(args.pattern), spec, mode)
    out.emit(value, text=f"{fmt(value)} +- {fmt(bound)}", error_bound=bound)


def cmd_blowup(args, out: Output) -> None:
    f = read_labeled(args.graph)
    a = read_ints(args.a)
    if args.tilde:
        if not f.is_fully_labeled:
            f = LabeledGraph.fully_labeled(f.graph)
        q = constructions.tilde_blowup(f, a)
        out.emit(to_expression(q))
    else:
        g = constructions.blowup(f, a)
        out.emit(str(g))


def cmd_product(args, out: Output) -> None:
    w = constructions.lex_product(read_weighted(args.left, args.float), read_weighted(args.right, args.float))
    out.emit(str(w))


def _setup(args) -> boundary.TheoremSetup:
    if getattr(args, "setup", None):
        try:
            return boundary.TheoremSetup.from_dict(json.loads(_read(args.setup)))
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError(f"bad setup file: {exc}") from None
    return boundary.theorem_setup(args.n, args.seed)


def cmd_curve(args, out: Output) -> None:
    setup = _setup(args)
    series = boundary.sample_curve(setup, args.resolution, args.depth, args.dyadic_level)
    if args.svg:
        Path(args.svg).write_text(series.to_svg())
    if args.setup_out:
        Path(args.setup_out).write_text(setup.to_json() + "\n")
    if out.json:
        out.emit(
            [list(p) for p in series.points],
            setup=setup.to_dict(),
            trunc_bound=series.trunc_bound,
        )
    else:
        out.lines.append(series.to_csv().rstrip("\n"))


def cmd_quotients(args, out: Output) -> None:
    setup = _setup(args)
    ms = boundary.quotient_scan(setup, args.j_min, args.j_max, args.depth)
    if out.json:
        out.emit({str(j): m for j, m in zip(range(args.j_min, args.j_max + 1), ms)})
    else:
        out.lines.append("j,M_j")
        out.lines += [f"{j},{m:.17g}" for j, m in zip(range(args.j_min, args.j_max + 1), ms)]


def cmd_scatter(args, out: Output) -> None:
    setup = _setup(args)
    rows = boundary.region_scatter(setup, args.count, args.length, args.seed)
    if out.json:
        out.emit([{"T": sorted(t), "t_P4": x, "t_K2": y} for t, x, y in rows])
    else:
        out.lines.append("T,t_P4,t_K2")
        out.lines += [f"{' '.join(map(str, sorted(t)))},{x:.17g},{y:.17g}" for t, x, y in rows]


def cmd_forcing_residual(args, out: Output) -> None:
    if args.graph:
        g = read_graph(args.graph)
    else:
        g = randgraphs.find_stringent(6, Fraction(1, 2), args.seed)
    f = LabeledGraph.fully_labeled(g)
    if args.mu:
        mu = [read_fraction(x) for x in args.mu.split(",")]
    else:
        mu = [Fraction(1, g.n)] * g.n
    conds = boundary.split_forcing_conditions(f, mu, args.k)
    rows = {str(d): boundary.forcing_residual(f, mu, args.k, d, conds) for d in read_ints(args.depths)}
    if out.json:
        out.emit(rows, graph=to_edge_list(g), conditions=len(conds))
    else:
        out.lines.append("depth,residual")
        out.lines += [f"{d},{fmt(r)}" for d, r in rows.items()]


# -- parser -----------------------------------------------------------------


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{name}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    seed = _env_int("LEXBOUNDARY_SEED", DEFAULT_SEED)
    depth = _env_int("LEXBOUNDARY_DEPTH", DEFAULT_DEPTH)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--float", action="store_true", default=argparse.SUPPRESS, help="float backend for weights")
    common.add_argument("--out", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="lexboundary", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--float", action="store_true", help="float backend for weights (default exact)")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(func=func)
        return sp

    def seeded(sp):
        sp.add_argument("--seed", type=lambda s: int(s, 0), default=seed)

    def setup_args(sp):
        sp.add_argument("--n", type=int, default=boundary.DEFAULT_N)
        seeded(sp)
        sp.add_argument("--setup", help="JSON setup (or @file) to use instead of sampling")

    sp = add("density", cmd_density, "induced density t(pattern; target)")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--target", required=True)

    sp = add("wdensity", cmd_wdensity, "density in a weighted graph")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--target", required=True, help="'n=..; edges: ..; mu: ..' or a plain graph")

    sp = add("eval", cmd_eval, "evaluate a quantum-graph expression")
    sp.add_argument("--expr", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--pin", action="append", default=[], help="label=vertex, repeatable")

    sp = add("check", cmd_check, "structural tests")
    sp.add_argument("property", choices=["prime", "asymmetric", "stringent", "homogeneous"])
    sp.add_argument("--graph", required=True)
    sp.add_argument("--set", help="comma-separated vertex set for 'homogeneous'")

    sp = add("fold", cmd_fold, "is the map a folding of --graph into --host")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--host", required=True)
    sp.add_argument("--map", required=True, help="images of vertices 0..n-1, comma-separated")

    sp = add("sample", cmd_sample, "one G(n, p) sample")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", default="1/2")
    sp.add_argument("--graph6", action="store_true")
    seeded(sp)

    sp = add("rate", cmd_rate, "Monte Carlo stringency rate")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", default="1/2")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--jsonl", action="store_true", help="also print one JSON line per trial")
    seeded(sp)

    sp = add("bound", cmd_bound, "union bound on the non-prime probability")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", default="1/2")
    sp.add_argument("--decimal", action="store_true")

    sp = add("find-stringent", cmd_find_stringent, "first stringent sample")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", default="1/2")
    sp.add_argument("--attempts", type=int, default=randgraphs.DEFAULT_ATTEMPTS)
    sp.add_argument("--graph6", action="store_true")
    seeded(sp)

    sp = add("lex-density", cmd_lex_density, "density of a prime graph in an infinite lex product")
    sp.add_argument("--pattern", required=True)
    sp.add_argument("--spec", required=True, help="'prefix: [{..}]; cycle: [{..}]'")
    sp.add_argument("--mode", default="exact", help="'exact' or a number of terms")

    sp = add("blowup", cmd_blowup, "blowup or tilde blowup")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--a", required=True, help="copies per vertex, comma-separated")
    sp.add_argument("--tilde", action="store_true")

    sp = add("product", cmd_product, "weighted lexicographic product")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)

    sp = add("curve", cmd_curve, "sample the boundary curve as CSV")
    setup_args(sp)
    sp.add_argument("--resolution", type=int, default=1025)
    sp.add_argument("--depth", type=int, default=depth)
    sp.add_argument("--dyadic-level", type=int, default=8)
    sp.add_argument("--svg", help="also write an SVG polyline here")
    sp.add_argument("--setup-out", help="also write the setup JSON here")

    sp = add("quotients", cmd_quotients, "difference quotients on dyadic grids")
    setup_args(sp)
    sp.add_argument("--j-min", type=int, default=4)
    sp.add_argument("--j-max", type=int, default=20)
    sp.add_argument("--depth", type=int, default=depth)

    sp = add("scatter", cmd_scatter, "(t(P4), t(K2)) for random finite T")
    setup_args(sp)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--length", type=int, default=12)

    sp = add("forcing-residual", cmd_forcing_residual, "split-forcing residual on lex truncations")
    sp.add_argument("--graph", help="stringent graph (default: first stringent G(6, 1/2) sample)")
    sp.add_argument("--mu", help="comma-separated rational weights (default uniform)")
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--depths", default="1,2,3")
    seeded(sp)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        parser = build_parser()
    except UsageError as exc:
        print(f"lexboundary: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args)
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"lexboundary {args.command}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, ArithmeticError, RuntimeError) as exc:
        print(f"lexboundary {args.command}: {exc}", file=sys.stderr)
        return 1
    out.flush()
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
