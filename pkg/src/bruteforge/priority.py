"""Priority-program DSL and the greedy cap-set constructor.

A priority expression ranks vectors; the greedy constructor visits all
3^n vectors sorted by (priority descending, lexicographic ascending) and
adjoins each one that keeps the set a cap.  Expressions are total by
construction: indices wrap mod n, mod by zero returns its left operand,
and all arithmetic is 64-bit signed with wraparound.

Expression grammar:

    expr    := term { ("+" | "-") term }
    term    := unary { ("*" | "%") unary }
    unary   := "-" unary | primary
    primary := INT | "n" | "v" "[" expr "]"
             | ("min" | "max") "(" expr "," expr ")" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .capset import DimensionBudgetError, MAX_GREEDY_DIMENSION, all_vectors, extends_cap

_U64 = 1 << 64
_I64_MAX = (1 << 63) - 1


def _wrap(x):
    x &= _U64 - 1
    return x - _U64 if x > _I64_MAX else x


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: int


@dataclass(frozen=True)
class Dim(Expr):
    """The dimension n of the run."""


@dataclass(frozen=True)
class Index(Expr):
    """v[e]: digit of the vector at index e mod n."""

    index: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - * %
    left: Expr
    right: Expr


@dataclass(frozen=True)
class MinMax(Expr):
    fn: str  # min | max
    left: Expr
    right: Expr


def eval_priority(expr, v, n=None):
    """Deterministic 64-bit integer value of expr on vector v; never fails."""
    if n is None:
        n = len(v)

    def ev(e):
        if isinstance(e, Const):
            return _wrap(e.value)
        if isinstance(e, Dim):
            return n
        if isinstance(e, Index):
            return v[ev(e.index) % n]
        if isinstance(e, BinOp):
            a, b = ev(e.left), ev(e.right)
            if e.op == "+":
                return _wrap(a + b)
            if e.op == "-":
                return _wrap(a - b)
            if e.op == "*":
                return _wrap(a * b)
            if e.op == "%":
                # Euclidean mod; mod by zero is identity on the left operand
                return a if b == 0 else _wrap(a % abs(b))
            raise ValueError(f"unknown operator {e.op!r}")
        if isinstance(e, MinMax):
            a, b = ev(e.left), ev(e.right)
            return min(a, b) if e.fn == "min" else max(a, b)
        raise TypeError(f"not an expression: {e!r}")

    return ev(expr)


def format_expr(e):
    if isinstance(e, Const):
        return str(e.value) if e.value >= 0 else f"({e.value})"
    if isinstance(e, Dim):
        return "n"
    if isinstance(e, Index):
        return f"v[{format_expr(e.index)}]"
    if isinstance(e, BinOp):
        return f"({format_expr(e.left)} {e.op} {format_expr(e.right)})"
    if isinstance(e, MinMax):
        return f"{e.fn}({format_expr(e.left)}, {format_expr(e.right)})"
    raise TypeError(f"not an expression: {e!r}")


class ExprSyntaxError(ValueError):
    pass


_EXPR_TOKEN = re.compile(r"\s*(\d+|[nv]|min|max|[-+*%()\[\],])")


def parse_expr(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _EXPR_TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"bad character at {pos}: {text[pos]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expected=None):
        nonlocal i
        if i >= len(tokens):
            raise ExprSyntaxError("unexpected end of input")
        tok = tokens[i]
        if expected is not None and tok != expected:
            raise ExprSyntaxError(f"expected {expected!r}, got {tok!r}")
        i += 1
        return tok

    def parse_sum():
        left = parse_term()
        while peek() in ("+", "-"):
            op = take()
            left = BinOp(op, left, parse_term())
        return left

    def parse_term():
        left = parse_unary()
        while peek() in ("*", "%"):
            op = take()
            left = BinOp(op, left, parse_unary())
        return left

    def parse_unary():
        if peek() == "-":
            take()
            inner = parse_unary()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return BinOp("-", Const(0), inner)
        return parse_primary()

    def parse_primary():
        tok = take()
        if tok.isdigit():
            return Const(int(tok))
        if tok == "n":
            return Dim()
        if tok == "v":
            take("[")
            idx = parse_sum()
            take("]")
            return Index(idx)
        if tok in ("min", "max"):
            take("(")
            a = parse_sum()
            take(",")
            b = parse_sum()
            take(")")
            return MinMax(tok, a, b)
        if tok == "(":
            inner = parse_sum()
            take(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {tok!r}")

    out = parse_sum()
    if i < len(tokens):
        raise ExprSyntaxError(f"trailing input {tokens[i]!r}")
    return out


def greedy(expr, n):
    """Greedy cap construction under the expression's ranking; deterministic."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_GREEDY_DIMENSION:
        raise DimensionBudgetError(
            f"dimension {n} above greedy limit {MAX_GREEDY_DIMENSION}"
        )
    vectors = all_vectors(n)
    ranked = sorted(vectors, key=lambda v: (-eval_priority(expr, v, n), v))
    chosen = set()
    for v in ranked:
        if extends_cap(chosen, v):
            chosen.add(v)
    return chosen


def score(expr, n):
    """Fitness of a priority program: the size of its greedy cap set."""
    return len(greedy(expr, n))
