"""Expression frontend: parse, evaluate and symbolically differentiate f(x).

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = atom [ "^" unary ] ;
    atom    = number | "x" | func "(" expr ")" | "(" expr ")" ;
    func    = "sin" | "cos" | "exp" | "ln" | "sqrt" ;
    number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
            | "." digits [ exponent ] ;

``^`` binds tightest and is right-associative, so ``-x^2`` is ``-(x^2)`` and
``2^3^2`` is ``2^(3^2)``.  Numeric literals are stored as exact fractions.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, Union

Number = Union[int, float, Fraction]

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")


class ParseError(ValueError):
    """Malformed expression text."""

    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {offset}: expected {expected}, found {found}")


class EvalDomainError(ArithmeticError):
    """Evaluation left the natural domain of the expression."""

    def __init__(self, message: str, subexpr: "Expr"):
        self.subexpr = subexpr
        super().__init__(f"{message} in '{render(subexpr)}'")


class Expr:
    """Base class of the immutable expression tree."""

    __slots__ = ()

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class Const(Expr):
    value: Number


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


X = Var()

# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ParseError(bad, "token", repr(text[bad]))
        kind = m.lastgroup
        if kind is None:  # trailing whitespace only
            break
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str):
        kind, value, offset = self.peek()
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(offset, expected, found)

    def expect_op(self, op: str):
        kind, value, _ = self.peek()
        if kind != "op" or value != op:
            self.fail(repr(op))
        self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, value, offset = self.peek()
        if kind == "num":
            self.advance()
            return Const(Fraction(value))
        if kind == "name":
            if value == "x":
                self.advance()
                return X
            if value in FUNCTIONS:
                self.advance()
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            raise ParseError(offset, "variable 'x' or one of " + ", ".join(FUNCTIONS), repr(value))
        if kind == "op" and value == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail("operand")


def parse(text: str) -> Expr:
    """Parse *text* into an expression tree, raising :class:`ParseError`."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# rendering

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _format_const(value: Number) -> str:
    if isinstance(value, float):
        return repr(value) if value >= 0 else f"({value!r})"
    value = Fraction(value)
    if value.denominator == 1:
        s = str(value.numerator)
    else:
        den = value.denominator
        for p in (2, 5):
            while den % p == 0:
                den //= p
        if den == 1:
            # terminating decimal: render exactly so it re-parses to the same fraction
            with localcontext() as ctx:
                ctx.prec = 2 * len(str(value.denominator)) + len(str(value.numerator)) + 10
                s = format(Decimal(value.numerator) / Decimal(value.denominator), "f")
        else:
            s = f"{abs(value.numerator)}/{value.denominator}"
            return f"(-{s})" if value < 0 else f"({s})"
    return f"({s})" if value < 0 else s


def _render(node: Expr) -> tuple[str, int]:
    if isinstance(node, Const):
        s = _format_const(node.value)
        return s, _PREC_ATOM
    if isinstance(node, Var):
        return "x", _PREC_ATOM
    if isinstance(node, Call):
        return f"{node.func}({_render(node.arg)[0]})", _PREC_ATOM
    if isinstance(node, Neg):
        s, p = _render(node.operand)
        return "-" + (s if p >= _PREC_NEG else f"({s})"), _PREC_NEG
    if isinstance(node, BinOp):
        ls, lp = _render(node.left)
        rs, rp = _render(node.right)
        if node.op == "^":
            ls = ls if lp >= _PREC_ATOM else f"({ls})"
            rs = rs if rp >= _PREC_NEG else f"({rs})"
            return f"{ls}^{rs}", _PREC_POW
        prec = _PREC_ADD if node.op in "+-" else _PREC_MUL
        ls = ls if lp >= prec else f"({ls})"
        rs = rs if rp > prec else f"({rs})"
        sep = f" {node.op} " if prec == _PREC_ADD else node.op
        return f"{ls}{sep}{rs}", prec
    raise TypeError(f"not an expression node: {node!r}")


def render(node: Expr) -> str:
    """Render *node* back to grammar text with minimal parentheses."""
    return _render(node)[0]


# --------------------------------------------------------------------------
# evaluation


def is_exact_number(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _is_integral(value) -> bool:
    if isinstance(value, float):
        return value.is_integer()
    return Fraction(value).denominator == 1


def _eval(node: Expr, x, exact: bool):
    if isinstance(node, Const):
        v = node.value
        return v if exact and is_exact_number(v) else float(v)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x, exact)
    if isinstance(node, BinOp):
        a = _eval(node.left, x, exact)
        b = _eval(node.right, x, exact)
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise EvalDomainError("division by zero", node)
            return Fraction(a) / b if is_exact_number(a) and is_exact_number(b) else a / b
        return _power(a, b, node)
    if isinstance(node, Call):
        a = float(_eval(node.arg, x, exact))
        name = node.func
        try:
            if name == "sin":
                return math.sin(a)
            if name == "cos":
                return math.cos(a)
            if name == "exp":
                return math.exp(a)
            if name == "ln":
                if a <= 0:
                    raise EvalDomainError("logarithm of non-positive value", node)
                return math.log(a)
            if name == "sqrt":
                if a < 0:
                    raise EvalDomainError("square root of negative value", node)
                return math.sqrt(a)
        except OverflowError:
            raise EvalDomainError("overflow", node) from None
        raise EvalDomainError(f"unknown function {name}", node)
    raise TypeError(f"not an expression node: {node!r}")


def _power(a, b, node: Expr):
    if _is_integral(b):
        n = int(b)
        if n < 0 and a == 0:
            raise EvalDomainError("zero raised to a negative power", node)
        if is_exact_number(a):
            return Fraction(a) ** n
        try:
            return float(a) ** n
        except (OverflowError, ZeroDivisionError):
            raise EvalDomainError("overflow", node) from None
    if a <= 0:
        raise EvalDomainError("non-integer power of non-positive base", node)
    try:
        return math.exp(float(b) * math.log(float(a)))
    except OverflowError:
        raise EvalDomainError("overflow", node) from None


def evaluate(f: Expr, x: Number, exact: bool = False):
    """Evaluate *f* at *x*.

    With ``exact=True`` and a rational *x*, polynomial and rational subtrees
    are computed with unbounded fractions; any transcendental call or
    non-integer power drops that branch to floating point.
    """
    if exact and is_exact_number(x):
        return _eval(f, Fraction(x), True)
    return _eval(f, float(x), False)


def as_function(f) -> Callable:
    """Accept an expression tree, expression text, or plain callable."""
    if isinstance(f, str):
        f = parse(f)
    if isinstance(f, Expr):
        return lambda x: _eval(f, float(x), False)
    if callable(f):
        return f
    raise TypeError(f"cannot evaluate {f!r}")


# --------------------------------------------------------------------------
# symbolic differentiation

ZERO = Const(0)
ONE = Const(1)


def _num(node: Expr):
    return node.value if isinstance(node, Const) else None


def add(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Const(va + vb)
    if va == 0:
        return b
    if vb == 0:
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Const(va - vb)
    if vb == 0:
        return a
    if va == 0:
        return neg(b)
    return BinOp("-", a, b)


def neg(a: Expr) -> Expr:
    va = _num(a)
    if va is not None:
        return Const(-va)
    if isinstance(a, Neg):
        return a.operand
    return Neg(a)


def mul(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None:
        return Const(va * vb)
    if va == 0 or vb == 0:
        return ZERO
    if va == 1:
        return b
    if vb == 1:
        return a
    if va == -1:
        return neg(b)
    if vb == -1:
        return neg(a)
    if vb is not None:
        # keep constants on the left: x*3 -> 3*x
        return BinOp("*", b, a)
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    va, vb = _num(a), _num(b)
    if va is not None and vb is not None and vb != 0:
        return Const(Fraction(va) / vb if is_exact_number(va) and is_exact_number(vb) else va / vb)
    if va == 0:
        return ZERO
    if vb == 1:
        return a
    return BinOp("/", a, b)


def pow_(a: Expr, b: Expr) -> Expr:
    vb = _num(b)
    if vb == 0:
        return ONE
    if vb == 1:
        return a
    va = _num(a)
    if va is not None and vb is not None and is_exact_number(va) and is_exact_number(vb) \
            and Fraction(vb).denominator == 1 and (va != 0 or vb > 0):
        return Const(Fraction(va) ** int(vb))
    return BinOp("^", a, b)


def symbolic_derivative(f: Expr) -> Expr:
    """Return d f / dx using the sum, product, quotient and chain rules."""
    if isinstance(f, Const):
        return ZERO
    if isinstance(f, Var):
        return ONE
    if isinstance(f, Neg):
        return neg(symbolic_derivative(f.operand))
    if isinstance(f, BinOp):
        u, v = f.left, f.right
        du = symbolic_derivative(u)
        dv = symbolic_derivative(v)
        if f.op == "+":
            return add(du, dv)
        if f.op == "-":
            return sub(du, dv)
        if f.op == "*":
            return add(mul(du, v), mul(u, dv))
        if f.op == "/":
            return div(sub(mul(du, v), mul(u, dv)), pow_(v, Const(2)))
        # power
        if isinstance(v, Const):
            c = v.value
            return mul(mul(Const(c), pow_(u, Const(c - 1))), du)
        # u^v = exp(v ln u)  =>  u^v * (v' ln u + v u'/u)
        return mul(f, add(mul(dv, Call("ln", u)), div(mul(v, du), u)))
    if isinstance(f, Call):
        u = f.arg
        du = symbolic_derivative(u)
        if f.func == "sin":
            outer = Call("cos", u)
        elif f.func == "cos":
            outer = neg(Call("sin", u))
        elif f.func == "exp":
            outer = f
        elif f.func == "ln":
            return div(du, u)
        elif f.func == "sqrt":
            return div(du, mul(Const(2), f))
        else:
            raise ValueError(f"unknown function {f.func}")
        return mul(outer, du)
    raise TypeError(f"not an expression node: {f!r}")


def nth_derivative(f: Expr, n: int) -> list[Expr]:
    """Return ``[f, f', ..., f^(n)]``."""
    out = [f]
    for _ in range(n):
        out.append(symbolic_derivative(out[-1]))
    return out


def central_difference(f, x: float, h: float) -> float:
    """Symmetric difference quotient ``(f(x+h) - f(x-h)) / 2h``."""
    if h <= 0:
        raise ValueError("step h must be positive")
    g = as_function(f)
    return (g(x + h) - g(x - h)) / (2 * h)
