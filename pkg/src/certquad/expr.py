"""Integrand expressions in one variable ``t``.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' factor)?
    primary := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
    FUNC    := sin | cos | exp | log | sqrt | abs

``^`` is right-associative and binds tighter than unary minus, so ``-t^2``
is ``-(t^2)`` and ``2^-1`` is ``2^(-1)``. There is no implicit
multiplication: ``2t`` is a syntax error.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

from .errors import CertQuadError, DomainError

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}
CONSTANTS = {"pi": math.pi, "e": math.e}
VARIABLE = "t"


class ExprSyntaxError(CertQuadError, ValueError):
    def __init__(self, source: str, offset: int, expected: frozenset[str], found: str):
        self.source = source
        self.offset = offset
        self.expected = expected
        self.found = found
        want = ", ".join(sorted(expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {{{want}}}, found {found}")


class EvalError(DomainError):
    def __init__(self, message: str, node: Expr):
        super().__init__(message)
        self.node = node


# AST. ``pos`` is the source offset, ignored by equality.

@dataclass(frozen=True)
class Num:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: Expr
    pos: int = field(default=0, compare=False)


Expr = Union[Num, Var, Const, Neg, BinOp, Call]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)
_END = "end of input"


def _tokenize(src: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            rest = src[pos:]
            start = pos + len(rest) - len(rest.lstrip())
            if start == len(src):
                tokens.append((_END, None, start))
                return tokens
            raise ExprSyntaxError(src, start, frozenset({"number", "name", "operator"}), repr(src[start]))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()


_PRIMARY_START = frozenset({"number", "t", "pi", "e", "function", "'('", "'-'"})


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def _fail(self, expected):
        kind, text, pos = self.tok
        found = _END if kind == _END else repr(text)
        raise ExprSyntaxError(self.src, pos, frozenset(expected), found)

    def _is_op(self, *ops):
        kind, text, _ = self.tok
        return kind == "op" and text in ops

    def _expect_op(self, op):
        if not self._is_op(op):
            self._fail({repr(op)})
        self.i += 1

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok[0] != _END:
            self._fail({"'+'", "'-'", "'*'", "'/'", "'^'", _END})
        return node

    def expr(self):
        node = self.term()
        while self._is_op("+", "-"):
            _, op, pos = self.tok
            self.i += 1
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.factor()
        while self._is_op("*", "/"):
            _, op, pos = self.tok
            self.i += 1
            node = BinOp(op, node, self.factor(), pos)
        return node

    def factor(self):
        if self._is_op("-"):
            pos = self.tok[2]
            self.i += 1
            return Neg(self.factor(), pos)
        return self.power()

    def power(self):
        base = self.primary()
        if self._is_op("^"):
            pos = self.tok[2]
            self.i += 1
            return BinOp("^", base, self.factor(), pos)
        return base

    def primary(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(text), pos)
        if kind == "name":
            self.i += 1
            if text == VARIABLE:
                return Var(pos)
            if text in CONSTANTS:
                return Const(text, pos)
            if text in FUNCTIONS:
                self._expect_op("(")
                arg = self.expr()
                self._expect_op(")")
                return Call(text, arg, pos)
            self.i -= 1
            self._fail(_PRIMARY_START)
        if self._is_op("("):
            self.i += 1
            node = self.expr()
            self._expect_op(")")
            return node
        self._fail(_PRIMARY_START)


def parse(src: str) -> Expr:
    return _Parser(src).parse()


def evaluate(node: Expr, t: float) -> float:
    """Evaluate at ``t``; domain violations raise :class:`EvalError`."""
    try:
        value = _eval(node, t)
    except EvalError:
        raise
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvalError(f"evaluation failed at t={t!r}: {exc}", node) from None
    return value


def _checked(value, node, what):
    if not math.isfinite(value):
        raise EvalError(f"{what} at offset {node.pos} is not finite", node)
    return value


def _eval(node, t):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return t
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Neg):
        return -_eval(node.operand, t)
    if isinstance(node, Call):
        x = _eval(node.arg, t)
        if node.func == "log" and x <= 0:
            raise EvalError(f"log of non-positive value {x!r} at offset {node.pos}", node)
        if node.func == "sqrt" and x < 0:
            raise EvalError(f"sqrt of negative value {x!r} at offset {node.pos}", node)
        try:
            return _checked(FUNCTIONS[node.func](x), node, node.func)
        except OverflowError:
            raise EvalError(f"{node.func} overflowed at offset {node.pos}", node) from None
    if isinstance(node, BinOp):
        x = _eval(node.left, t)
        y = _eval(node.right, t)
        op = node.op
        if op == "+":
            return _checked(x + y, node, "sum")
        if op == "-":
            return _checked(x - y, node, "difference")
        if op == "*":
            return _checked(x * y, node, "product")
        if op == "/":
            if y == 0:
                raise EvalError(f"division by zero at offset {node.pos}", node)
            return _checked(x / y, node, "quotient")
        try:
            return _checked(math.pow(x, y), node, "power")
        except (ValueError, OverflowError, ZeroDivisionError):
            raise EvalError(f"power {x!r}^{y!r} undefined at offset {node.pos}", node) from None
    raise TypeError(f"not an expression node: {node!r}")


def to_source(node: Expr) -> str:
    """Fully parenthesised source that parses back to an equal tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return VARIABLE
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")


class Function:
    """Parsed expression usable as an integrand ``f(t)``."""

    def __init__(self, source: str):
        self.source = source
        self.tree = parse(source)

    def __call__(self, t: float) -> float:
        return evaluate(self.tree, float(t))

    def __repr__(self):
        return f"Function({self.source!r})"
