"""Parse and evaluate scalar coefficient expressions in the time variable t.

Grammar (whitespace insensitive)::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := unary ("^" factor)?          # power is right-associative
    unary   := "-" unary | primary
    primary := number | "t" | "pi" | "e" | ident "(" expr ")" | "(" expr ")"

Numbers may carry a decimal point and scientific exponent (``2.5e-3``); the
bare identifier ``e`` is Euler's constant.  The unary functions are ``sin``,
``cos``, ``tan``, ``atan``, ``exp``, ``ln``, ``sqrt`` and ``abs``.

Evaluation is strict about the real domain: ``ln`` of a nonpositive value,
``sqrt`` of a negative value, a fractional power of a negative base, an exact
zero denominator, and overflow to non-finite all raise instead of letting a
NaN escape.

Three evaluation routes are provided: :func:`eval_at` (reference tree walk),
:func:`compile_scalar` (closure-compiled, same semantics, used in quadrature
inner loops) and :func:`eval_array` (numpy-vectorized over a time grid).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DivisionByZeroError, DomainError, ParseError, UnknownFunctionError

__all__ = [
    "Expr",
    "Num",
    "TimeVar",
    "Const",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "eval_at",
    "compile_scalar",
    "eval_array",
    "pretty",
    "FUNCTIONS",
    "CONSTANTS",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class TimeVar:
    pass


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, TimeVar, Const, Neg, BinOp, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}

FUNCTIONS = ("sin", "cos", "tan", "atan", "exp", "ln", "sqrt", "abs")


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "lparen", "rparen", "end"
    text: str
    pos: int
    value: float = 0.0


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        m = _NUMBER.match(src, i)
        if m:
            tokens.append(_Token("num", m.group(), i, float(m.group())))
            i = m.end()
            continue
        m = _IDENT.match(src, i)
        if m:
            tokens.append(_Token("ident", m.group(), i))
            i = m.end()
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
        elif ch == "(":
            tokens.append(_Token("lparen", ch, i))
        elif ch == ")":
            tokens.append(_Token("rparen", ch, i))
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
        i += 1
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Expr:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        base = self.unary()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            return BinOp("^", base, self.factor())  # right-associative
        return base

    def unary(self) -> Expr:
        if self.cur.kind == "op" and self.cur.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return Num(tok.value)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            if self.cur.kind != "rparen":
                raise ParseError("expected ')'", self.cur.pos)
            self.advance()
            return node
        if tok.kind == "ident":
            self.advance()
            if self.cur.kind == "lparen":
                if tok.text not in FUNCTIONS:
                    raise UnknownFunctionError(
                        f"unknown function {tok.text!r}", tok.pos)
                self.advance()
                arg = self.expr()
                if self.cur.kind != "rparen":
                    raise ParseError(
                        "expected ')' closing the function argument",
                        self.cur.pos)
                self.advance()
                return Call(tok.text, arg)
            if tok.text == "t":
                return TimeVar()
            if tok.text in CONSTANTS:
                return Const(tok.text)
            if tok.text in FUNCTIONS:
                raise ParseError(
                    f"function {tok.text!r} needs a parenthesized argument",
                    tok.pos)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.pos)
        raise ParseError(
            f"expected a number, 't', constant, function or '('", tok.pos)


def parse(src: str) -> Expr:
    """Parse expression text into an AST.

    Raises :class:`ParseError` (with byte offset) on malformed input and
    :class:`UnknownFunctionError` for calls to names we do not know.
    """
    if not src or not src.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(src))
    node = parser.expr()
    if parser.cur.kind != "end":
        raise ParseError(f"unexpected trailing input {parser.cur.text!r}",
                         parser.cur.pos)
    return node


# ---------------------------------------------------------------------------
# Scalar evaluation
# ---------------------------------------------------------------------------

def _power(base: float, exponent: float) -> float:
    # integer exponents take the exact repeated-multiplication route, which
    # also covers negative bases
    if exponent == math.floor(exponent) and abs(exponent) <= 2**31:
        if base == 0.0 and exponent < 0:
            raise DivisionByZeroError("zero base with negative exponent")
        try:
            return float(base ** int(exponent))
        except OverflowError:
            raise DomainError("power overflow") from None
    if base < 0.0:
        raise DomainError("fractional power of a negative base")
    if base == 0.0 and exponent < 0.0:
        raise DivisionByZeroError("zero base with negative exponent")
    try:
        return math.pow(base, exponent)
    except (OverflowError, ValueError):
        raise DomainError("power overflow") from None


def _apply(fn: str, x: float) -> float:
    if fn == "sin":
        return math.sin(x)
    if fn == "cos":
        return math.cos(x)
    if fn == "tan":
        return math.tan(x)
    if fn == "atan":
        return math.atan(x)
    if fn == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise DomainError("exp overflow") from None
    if fn == "ln":
        if x <= 0.0:
            raise DomainError(f"ln of nonpositive value {x!r}")
        return math.log(x)
    if fn == "sqrt":
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}")
        return math.sqrt(x)
    if fn == "abs":
        return abs(x)
    raise UnknownFunctionError(f"unknown function {fn!r}", 0)


def eval_at(e: Expr, t: float) -> float:
    """Evaluate ``e`` at time ``t`` (reference tree-walking implementation)."""
    r = _eval_at(e, t)
    if not math.isfinite(r):
        raise DomainError("evaluation produced a non-finite value")
    return r


def _eval_at(e: Expr, t: float) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, TimeVar):
        return t
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval_at(e.arg, t)
    if isinstance(e, BinOp):
        a = _eval_at(e.lhs, t)
        b = _eval_at(e.rhs, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if b == 0.0:
                raise DivisionByZeroError("division by zero")
            return a / b
        return _power(a, b)
    return _apply(e.fn, _eval_at(e.arg, t))


def compile_scalar(e: Expr) -> Callable[[float], float]:
    """Compile ``e`` to a fast scalar callable with eval_at semantics.

    Quadrature calls coefficient functions millions of times; the closure
    chain built here avoids the per-node isinstance dispatch of
    :func:`eval_at` while raising the same domain errors.
    """
    f = _compile(e)

    def evaluate(t: float) -> float:
        r = f(t)
        if not math.isfinite(r):
            raise DomainError("evaluation produced a non-finite value")
        return r

    return evaluate


def _compile(e: Expr) -> Callable[[float], float]:
    if isinstance(e, Num):
        v = e.value
        return lambda t: v
    if isinstance(e, TimeVar):
        return lambda t: t
    if isinstance(e, Const):
        v = CONSTANTS[e.name]
        return lambda t: v
    if isinstance(e, Neg):
        g = _compile(e.arg)
        return lambda t: -g(t)
    if isinstance(e, BinOp):
        fa = _compile(e.lhs)
        fb = _compile(e.rhs)
        if e.op == "+":
            return lambda t: fa(t) + fb(t)
        if e.op == "-":
            return lambda t: fa(t) - fb(t)
        if e.op == "*":
            return lambda t: fa(t) * fb(t)
        if e.op == "/":
            def div(t):
                d = fb(t)
                if d == 0.0:
                    raise DivisionByZeroError("division by zero")
                return fa(t) / d
            return div
        return lambda t: _power(fa(t), fb(t))
    g = _compile(e.arg)
    if e.fn == "sin":
        return lambda t: math.sin(g(t))
    if e.fn == "cos":
        return lambda t: math.cos(g(t))
    if e.fn == "tan":
        return lambda t: math.tan(g(t))
    if e.fn == "atan":
        return lambda t: math.atan(g(t))
    if e.fn == "abs":
        return lambda t: abs(g(t))
    fn = e.fn
    return lambda t: _apply(fn, g(t))


# ---------------------------------------------------------------------------
# Vectorized evaluation
# ---------------------------------------------------------------------------

def eval_array(e: Expr, ts: np.ndarray) -> np.ndarray:
    """Evaluate ``e`` on a whole time grid at once.

    Domain checks mirror the scalar route: any grid point that would raise
    under :func:`eval_at` makes the whole call raise.
    """
    ts = np.asarray(ts, dtype=float)
    with np.errstate(all="ignore"):
        r = _eval_array(e, ts)
    r = np.broadcast_to(np.asarray(r, dtype=float), ts.shape).copy()
    if not np.all(np.isfinite(r)):
        raise DomainError("evaluation produced a non-finite value")
    return r


def _eval_array(e: Expr, ts: np.ndarray):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, TimeVar):
        return ts
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval_array(e.arg, ts)
    if isinstance(e, BinOp):
        a = _eval_array(e.lhs, ts)
        b = _eval_array(e.rhs, ts)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if e.op == "/":
            if np.any(np.asarray(b) == 0.0):
                raise DivisionByZeroError("division by zero")
            return a / b
        return _power_array(a, b)
    x = _eval_array(e.arg, ts)
    fn = e.fn
    if fn == "ln":
        if np.any(np.asarray(x) <= 0.0):
            raise DomainError("ln of nonpositive value")
        return np.log(x)
    if fn == "sqrt":
        if np.any(np.asarray(x) < 0.0):
            raise DomainError("sqrt of negative value")
        return np.sqrt(x)
    ufunc = {"sin": np.sin, "cos": np.cos, "tan": np.tan,
             "atan": np.arctan, "exp": np.exp, "abs": np.abs}[fn]
    return ufunc(x)


def _power_array(base, exponent):
    b = np.asarray(base, dtype=float)
    p = np.asarray(exponent, dtype=float)
    integral = p == np.floor(p)
    if np.any((b < 0.0) & ~integral):
        raise DomainError("fractional power of a negative base")
    if np.any((b == 0.0) & (p < 0.0)):
        raise DivisionByZeroError("zero base with negative exponent")
    return np.power(b, p)


# ---------------------------------------------------------------------------
# Pretty printer
# ---------------------------------------------------------------------------

_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


def pretty(e: Expr) -> str:
    """Render ``e`` as text that reparses to a structurally identical AST."""
    return _pretty(e, _ADD)


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "^": _POW}[e.op]
    if isinstance(e, Neg):
        return _UNARY
    return _ATOM


def _pretty(e: Expr, minimum: int) -> str:
    if isinstance(e, Num):
        return repr(e.value)
    if isinstance(e, TimeVar):
        return "t"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({_pretty(e.arg, _ADD)})"
    if isinstance(e, Neg):
        s = "-" + _unary_slot(e.arg)
        return s if _UNARY >= minimum else f"({s})"
    assert isinstance(e, BinOp)
    mine = _prec(e)
    if e.op == "^":
        # per the grammar the base is a unary, the exponent another factor
        s = _unary_slot(e.lhs) + "^" + _pretty(e.rhs, _UNARY)
    else:
        s = _pretty(e.lhs, mine) + e.op + _pretty(e.rhs, mine + 1)
    return s if mine >= minimum else f"({s})"


def _unary_slot(e: Expr) -> str:
    # grammar slots that accept only a unary: powers (prec 4) do not fit and
    # need parentheses even though they bind tighter than unary minus
    if _prec(e) in (_UNARY, _ATOM):
        return _pretty(e, _UNARY)
    return f"({_pretty(e, _ADD)})"
