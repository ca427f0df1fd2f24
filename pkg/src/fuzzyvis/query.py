"""Composite-concept queries: text grammar, AST, and evaluation.

Grammar (case-insensitive keywords, NOT > AND > OR, AND/OR left-associative
and flattened to n-ary nodes):

    expr  := or
    or    := and { "OR" and }
    and   := unary { "AND" unary }
    unary := "NOT" unary | "(" expr ")" | atom
    atom  := bare-id | double-quoted label

Quoted labels resolve by exact case-insensitive label match; bare tokens
resolve first as a concept id, then as a single-word label. Embedded quotes
in labels are escaped as ``\\"``.

Evaluation maps the AST onto element-wise fuzzy operators over the stored
membership vectors and is a pure function of (node, matrix, config).
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from typing import Union

import numpy as np

from .algebra import (
    FuzzyConfig,
    elementwise_negate,
    elementwise_tconorm,
    elementwise_tnorm,
)
from .embedding import EmbeddingMatrix
from .errors import AmbiguousLabel, InvalidParams, QuerySyntaxError, UnknownConcept
from .ontology import OntologyGraph
from .store import RankedHit, VectorIndex, top_k

QueryNode = Union["ConceptRef", "And", "Or", "Not"]

_KEYWORDS = {"AND", "OR", "NOT"}


@dataclass(frozen=True)
class ConceptRef:
    id: str


@dataclass(frozen=True)
class And:
    children: tuple[QueryNode, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("AND needs at least two operands")


@dataclass(frozen=True)
class Or:
    children: tuple[QueryNode, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("OR needs at least two operands")


@dataclass(frozen=True)
class Not:
    child: QueryNode


@dataclass(frozen=True)
class QueryResult:
    hits: list[RankedHit]
    zero_query: bool
    echo: str


def make_and(parts: list[QueryNode]) -> QueryNode:
    """n-ary AND with same-operator children spliced in (canonical form)."""
    flat: list[QueryNode] = []
    for p in parts:
        flat.extend(p.children) if isinstance(p, And) else flat.append(p)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def make_or(parts: list[QueryNode]) -> QueryNode:
    flat: list[QueryNode] = []
    for p in parts:
        flat.extend(p.children) if isinstance(p, Or) else flat.append(p)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


# --- tokenizer ----------------------------------------------------------------

@dataclass(frozen=True)
class _Token:
    kind: str  # "lparen" | "rparen" | "keyword" | "bare" | "label" | "end"
    value: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", "(", i))
            i += 1
        elif ch == ")":
            tokens.append(_Token("rparen", ")", i))
            i += 1
        elif ch == '"':
            start = i
            i += 1
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n:
                    buf.append(text[i + 1])
                    i += 2
                else:
                    buf.append(text[i])
                    i += 1
            if i >= n:
                raise QuerySyntaxError(start, "unterminated quoted label")
            i += 1
            tokens.append(_Token("label", "".join(buf), start))
        else:
            start = i
            while i < n and not text[i].isspace() and text[i] not in '()"':
                i += 1
            word = text[start:i]
            if word.upper() in _KEYWORDS:
                tokens.append(_Token("keyword", word.upper(), start))
            else:
                tokens.append(_Token("bare", word, start))
    tokens.append(_Token("end", "", n))
    return tokens


# --- resolution ---------------------------------------------------------------

def _suggestions(name: str, graph: OntologyGraph) -> list[str]:
    pool = [rec.label for rec in graph.concepts.values()] + list(graph.concepts)
    return difflib.get_close_matches(name, pool, n=5, cutoff=0.4)


def _resolve_label(label: str, graph: OntologyGraph) -> str:
    needle = label.lower()
    matches = [cid for cid, rec in graph.concepts.items() if rec.label.lower() == needle]
    if not matches:
        raise UnknownConcept(label, _suggestions(label, graph))
    if len(matches) > 1:
        raise AmbiguousLabel(label, sorted(matches))
    return matches[0]


def _resolve_bare(token: str, graph: OntologyGraph) -> str:
    if token in graph:
        return token
    return _resolve_label(token, graph)


# --- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, tokens: list[_Token], graph: OntologyGraph):
        self.tokens = tokens
        self.graph = graph
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> QueryNode:
        node = self.parse_or()
        tok = self.peek()
        if tok.kind != "end":
            raise QuerySyntaxError(tok.position, f"unexpected {tok.value!r}", ["AND", "OR", "end of input"])
        return node

    def parse_or(self) -> QueryNode:
        parts = [self.parse_and()]
        while self.peek().kind == "keyword" and self.peek().value == "OR":
            self.take()
            parts.append(self.parse_and())
        return make_or(parts)

    def parse_and(self) -> QueryNode:
        parts = [self.parse_unary()]
        while self.peek().kind == "keyword" and self.peek().value == "AND":
            self.take()
            parts.append(self.parse_unary())
        return make_and(parts)

    def parse_unary(self) -> QueryNode:
        tok = self.peek()
        if tok.kind == "keyword" and tok.value == "NOT":
            self.take()
            return Not(self.parse_unary())
        if tok.kind == "lparen":
            self.take()
            node = self.parse_or()
            closing = self.take()
            if closing.kind != "rparen":
                raise QuerySyntaxError(closing.position, f"unexpected {closing.value or 'end of input'!r}", [")"])
            return node
        if tok.kind == "label":
            self.take()
            return ConceptRef(_resolve_label(tok.value, self.graph))
        if tok.kind == "bare":
            self.take()
            return ConceptRef(_resolve_bare(tok.value, self.graph))
        raise QuerySyntaxError(
            tok.position,
            f"unexpected {tok.value or 'end of input'!r}",
            ["NOT", "(", "concept id", "quoted label"],
        )


def parse_expression(text: str, graph: OntologyGraph) -> QueryNode:
    """Parse query text and resolve every atom against the graph."""
    return _Parser(_tokenize(text), graph).parse()


# --- formatting ---------------------------------------------------------------

_PREC = {Or: 1, And: 2, Not: 3, ConceptRef: 4}


def _fmt(node: QueryNode, context: int) -> str:
    if isinstance(node, ConceptRef):
        return node.id
    if isinstance(node, Not):
        text = "NOT " + _fmt(node.child, _PREC[Not])
    elif isinstance(node, And):
        text = " AND ".join(_fmt(c, _PREC[And]) for c in node.children)
    else:
        text = " OR ".join(_fmt(c, _PREC[Or]) for c in node.children)
    return f"({text})" if _PREC[type(node)] < context else text


def format_expression(node: QueryNode) -> str:
    """Canonical text with minimal parentheses; parse(format(n)) == n."""
    return _fmt(node, 0)


# --- JSON AST codec -----------------------------------------------------------

def node_to_json(node: QueryNode) -> dict:
    if isinstance(node, ConceptRef):
        return {"op": "ref", "id": node.id}
    if isinstance(node, Not):
        return {"op": "not", "children": [node_to_json(node.child)]}
    op = "and" if isinstance(node, And) else "or"
    return {"op": op, "children": [node_to_json(c) for c in node.children]}


def node_from_json(obj) -> QueryNode:
    if not isinstance(obj, dict) or "op" not in obj:
        raise InvalidParams("AST node must be an object with an 'op' key")
    op = obj["op"]
    if op == "ref":
        cid = obj.get("id")
        if not isinstance(cid, str) or not cid:
            raise InvalidParams("ref node needs a non-empty 'id'")
        return ConceptRef(cid)
    children = obj.get("children")
    if not isinstance(children, list):
        raise InvalidParams(f"{op!r} node needs a 'children' array")
    if op == "not":
        if len(children) != 1:
            raise InvalidParams("'not' takes exactly one child")
        return Not(node_from_json(children[0]))
    if op in ("and", "or"):
        if len(children) < 2:
            raise InvalidParams(f"{op!r} takes at least two children")
        parts = [node_from_json(c) for c in children]
        return make_and(parts) if op == "and" else make_or(parts)
    raise InvalidParams(f"unknown op {op!r}")


# --- evaluation ---------------------------------------------------------------

def evaluate(
    node: QueryNode,
    matrix: EmbeddingMatrix,
    config: FuzzyConfig,
    graph: OntologyGraph | None = None,
) -> np.ndarray:
    """Compose the query's membership vector from stored primitive vectors.

    AND/OR left-fold the element-wise t-norm/t-conorm over children in listed
    order; NOT is the standard negation. The graph, when given, lets unknown
    ids be reported as UnknownConcept rather than MissingEmbedding.
    """
    if isinstance(node, ConceptRef):
        if graph is not None and node.id not in graph:
            raise UnknownConcept(node.id)
        return matrix.vector(node.id)
    if isinstance(node, Not):
        return elementwise_negate(config, evaluate(node.child, matrix, config, graph))
    op = elementwise_tnorm if isinstance(node, And) else elementwise_tconorm
    acc = evaluate(node.children[0], matrix, config, graph)
    for child in node.children[1:]:
        acc = op(config, acc, evaluate(child, matrix, config, graph))
    return acc


def answer(
    node: QueryNode,
    index: VectorIndex,
    matrix: EmbeddingMatrix,
    config: FuzzyConfig,
    k: int,
    graph: OntologyGraph | None = None,
) -> QueryResult:
    """Evaluate the composite concept and rank primitive concepts against it."""
    vector = evaluate(node, matrix, config, graph)
    ranked = top_k(index, vector, k)
    return QueryResult(hits=ranked.hits, zero_query=ranked.zero_query, echo=format_expression(node))
