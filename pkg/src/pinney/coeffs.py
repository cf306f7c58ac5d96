"""Coefficient expressions a(x): parsing, evaluation, pretty-printing.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?      # right-associative, binds above unary minus
    atom   := NUMBER | 'x' | NAME '(' expr ')' | '(' expr ')'

NUMBER accepts decimal and scientific literals (``2``, ``.5``, ``1.5e-3``).
The callable names form a closed set: sin, cos, exp, sqrt, tanh, abs.
An expression with no occurrence of ``x`` is folded to a constant at parse
time, which is what lets downstream code select the fully analytic
constant-coefficient path before any integration starts.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import (
    EvalDomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)

_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "tanh": math.tanh,
    "abs": math.fabs,
}


# --- AST -------------------------------------------------------------------

@dataclass(frozen=True)
class Number:
    value: float


@dataclass(frozen=True)
class Var:
    """The independent variable x."""


@dataclass(frozen=True)
class Unary:
    child: "ExprNode"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "ExprNode"
    right: "ExprNode"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "ExprNode"


ExprNode = Union[Number, Var, Unary, Binary, Call]


@dataclass(frozen=True)
class CoefficientSpec:
    """A parsed coefficient, either a plain constant or an expression tree.

    ``a0`` is set (and ``ast`` is None) exactly when the source contained no
    occurrence of x; that choice routes constant problems to the analytic
    solver path.
    """

    text: str
    a0: float | None = None
    ast: ExprNode | None = None

    @property
    def is_constant(self) -> bool:
        return self.a0 is not None

    @classmethod
    def constant(cls, a0: float) -> "CoefficientSpec":
        return cls(text=_format_number(float(a0)), a0=float(a0))

    def __call__(self, x: float) -> float:
        return eval_coefficient(self, x)


# --- tokenizer -------------------------------------------------------------

_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, text, 1-based position) triples, ending with ('end',...)."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(("op", ch, i + 1))
            i += 1
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(("number", m.group(), i + 1))
            i = m.end()
            continue
        m = _NAME_RE.match(text, i)
        if m:
            tokens.append(("name", m.group(), i + 1))
            i = m.end()
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", i + 1)
    tokens.append(("end", "", n + 1))
    return tokens


# --- parser ----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, at = self.peek()
        if kind != "op" or text != op:
            raise ExpressionSyntaxError(f"expected {op!r}", at)
        return self.advance()

    def parse(self) -> ExprNode:
        node = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {text!r}", at)
        return node

    def expr(self) -> ExprNode:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Binary(text, node, self.term())
            else:
                return node

    def term(self) -> ExprNode:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Binary(text, node, self.unary())
            else:
                return node

    def unary(self) -> ExprNode:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary(self.unary())
        return self.power()

    def power(self) -> ExprNode:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # exponent parses as unary so 2^-3 works and 2^3^2 nests right
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> ExprNode:
        kind, text, at = self.advance()
        if kind == "number":
            value = float(text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"literal {text!r} overflows", at)
            return Number(value)
        if kind == "name":
            if text == "x":
                return Var()
            if text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise UnknownIdentifierError(text, at)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ExpressionSyntaxError("unexpected end of expression", at)
        raise ExpressionSyntaxError(f"unexpected {text!r}", at)


# --- evaluation ------------------------------------------------------------

def _eval_node(node: ExprNode, x: float) -> float:
    if isinstance(node, Number):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Unary):
        return -_eval_node(node.child, x)
    if isinstance(node, Binary):
        left = _eval_node(node.left, x)
        right = _eval_node(node.right, x)
        try:
            if node.op == "+":
                value = left + right
            elif node.op == "-":
                value = left - right
            elif node.op == "*":
                value = left * right
            elif node.op == "/":
                value = left / right
            else:
                value = math.pow(left, right)
        except ZeroDivisionError:
            raise EvalDomainError("division by zero", x) from None
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(str(exc) or "domain error", x) from None
        if not math.isfinite(value):
            raise EvalDomainError("non-finite result", x)
        return value
    if isinstance(node, Call):
        arg = _eval_node(node.arg, x)
        try:
            value = _FUNCTIONS[node.fn](arg)
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(f"{node.fn}: {exc}", x) from None
        if not math.isfinite(value):
            raise EvalDomainError(f"{node.fn}: non-finite result", x)
        return value
    raise TypeError(f"not an expression node: {node!r}")


def _contains_var(node: ExprNode) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Unary):
        return _contains_var(node.child)
    if isinstance(node, Binary):
        return _contains_var(node.left) or _contains_var(node.right)
    if isinstance(node, Call):
        return _contains_var(node.arg)
    return False


def parse_coefficient(text: str) -> CoefficientSpec:
    """Parse a coefficient expression.

    x-free input is evaluated eagerly and returned as the constant variant;
    an x-free expression that cannot be evaluated (say ``1/0``) raises
    :class:`EvalDomainError` here rather than at first use.
    """
    if not text or not text.strip():
        raise ExpressionSyntaxError("empty expression", 1)
    ast = _Parser(text).parse()
    if not _contains_var(ast):
        return CoefficientSpec(text=text, a0=_eval_node(ast, 0.0))
    return CoefficientSpec(text=text, ast=ast)


def eval_coefficient(spec: CoefficientSpec, x: float) -> float:
    """Evaluate a(x) in IEEE double precision; constants ignore x."""
    if spec.a0 is not None:
        return spec.a0
    return _eval_node(spec.ast, x)


# --- printing --------------------------------------------------------------

def _format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
_UNARY_PREC = 3


def _node_prec(node: ExprNode) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary):
        return _UNARY_PREC
    return 5


def _print_node(node: ExprNode) -> str:
    if isinstance(node, Number):
        return _format_number(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Unary):
        child = _print_node(node.child)
        if _node_prec(node.child) < _UNARY_PREC:
            child = f"({child})"
        return f"-{child}"
    if isinstance(node, Call):
        return f"{node.fn}({_print_node(node.arg)})"
    if isinstance(node, Binary):
        prec = _PREC[node.op]
        left = _print_node(node.left)
        right = _print_node(node.right)
        if node.op == "^":
            # right-associative: parenthesize a left-hand power, not a right one
            if _node_prec(node.left) <= prec:
                left = f"({left})"
            if _node_prec(node.right) < prec and not isinstance(node.right, Unary):
                right = f"({right})"
        else:
            if _node_prec(node.left) < prec:
                left = f"({left})"
            if _node_prec(node.right) <= prec:
                right = f"({right})"
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")


def pretty(spec: CoefficientSpec) -> str:
    """Normalized text form; reparsing it yields a structurally equal spec."""
    if spec.a0 is not None:
        return _format_number(spec.a0)
    return _print_node(spec.ast)
