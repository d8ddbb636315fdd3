"""Text syntax for quantum graphs.

::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := number ['*'] prod | number | prod
    prod   := atom ('.' atom)*
    atom   := NAME | '{' edge-list '}' | '[[' expr ']]' | '(' expr ')'

``NAME`` is one of ``K1..K6``, ``P2..P6``, ``C3..C6``, ``E0..E6`` (edgeless).
Inline graphs use the edge-list format with ``@vertex:label`` marks, e.g.
``{n=2; edges: 0-1 @0:1}``. ``[[ ]]`` forgets labels, ``.`` is the product
and a bare number stands for that multiple of the empty graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .canon import graph_from_key
from .graphs import GraphFormatError, LabeledGraph, named_graph, parse_labeled_graph, to_edge_list
from .quantum import LabelSetError, QuantumGraph, unlabel


class ExpressionError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


_SIMPLE = re.compile(
    r"(?P<ws>\s+)|(?P<num>\d+\.\d+|\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<open2>\[\[)|(?P<close2>\]\])|(?P<op>[-+*.()])"
)


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        if text[i] == "{":
            j = text.find("}", i)
            if j < 0:
                raise ExpressionError("unterminated inline graph", i)
            tokens.append(_Token("graph", text[i + 1:j], i))
            i = j + 1
            continue
        m = _SIMPLE.match(text, i)
        if not m:
            raise ExpressionError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(_Token(kind if kind != "op" else m.group(), m.group(), i))
        i = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            want = {"end": "end of input"}.get(kind, repr(kind))
            raise ExpressionError(f"expected {want}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        t = self.tok
        self.i += 1
        return t

    def expr(self) -> QuantumGraph:
        sign = 1
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.tok.kind == "-" else 1
            self.i += 1
        pos = self.tok.pos
        total = sign * self.term()
        while self.tok.kind in ("+", "-"):
            op = self.take(self.tok.kind)
            pos = self.tok.pos
            rhs = self.term()
            try:
                total = total + rhs if op.kind == "+" else total - rhs
            except LabelSetError as exc:
                raise ExpressionError(str(exc), pos) from None
        return total

    def term(self) -> QuantumGraph:
        coef = Fraction(1)
        if self.tok.kind == "num":
            coef = Fraction(self.take("num").text)
            if self.tok.kind == "*":
                self.i += 1
            elif self.tok.kind not in ("name", "graph", "open2", "("):
                return coef * QuantumGraph.one()
        return coef * self.prod()

    def prod(self) -> QuantumGraph:
        value = self.atom()
        while self.tok.kind == ".":
            self.i += 1
            pos = self.tok.pos
            rhs = self.atom()
            try:
                value = value * rhs
            except (LabelSetError, ValueError) as exc:
                raise ExpressionError(str(exc), pos) from None
        return value

    def atom(self) -> QuantumGraph:
        t = self.tok
        if t.kind == "name":
            self.i += 1
            try:
                return QuantumGraph.from_graph(named_graph(t.text))
            except KeyError:
                raise ExpressionError(f"unknown graph name {t.text!r}", t.pos) from None
        if t.kind == "graph":
            self.i += 1
            try:
                return QuantumGraph.from_graph(parse_labeled_graph(t.text))
            except (GraphFormatError, ValueError) as exc:
                raise ExpressionError(f"bad inline graph: {exc}", t.pos) from None
        if t.kind == "open2":
            self.i += 1
            inner = self.expr()
            self.take("close2")
            return unlabel(inner)
        if t.kind == "(":
            self.i += 1
            inner = self.expr()
            self.take(")")
            return inner
        raise ExpressionError(f"expected a graph, found {t.text or 'end of input'!r}", t.pos)


def parse_expression(text: str) -> QuantumGraph:
    """Parse the quantum-graph expression language."""
    p = _Parser(text)
    if p.tok.kind == "end":
        raise ExpressionError("empty expression", 0)
    if p.tok.kind == "num" and p.tokens[1].kind == "end" and Fraction(p.tok.text) == 0:
        return QuantumGraph.zero()
    value = p.expr()
    p.take("end")
    return value


def graph_literal(h: LabeledGraph) -> str:
    return "{" + to_edge_list(h.graph, labels=h.vertex_of) + "}"


def to_expression(f: QuantumGraph) -> str:
    """Serialize in canonical term order; ``parse_expression`` inverts it."""
    if not f:
        return "0"
    parts = []
    for key in f.keys():
        c = f.terms[key]
        h = graph_from_key(key)
        mag = abs(c)
        body = graph_literal(h)
        text = body if mag == 1 else f"{mag}*{body}"
        if not parts:
            parts.append(text if c > 0 else "-" + text)
        else:
            parts.append(("+ " if c > 0 else "- ") + text)
    return " ".join(parts)
