"""Tokenizer and infix expression parser shared by scalars, shapes and identities.

Grammar (``^`` binds tightest and is right associative, unary minus sits
between ``^`` and ``*``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := INT | NAME | '(' expr ')'

Expressions are parsed to small tuples and evaluated against an environment,
so the same tree can be evaluated over rationals, rational functions, sympy
polynomials or bilinear forms.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Mapping

from sympy import integer_nthroot

from .scalars import MalformedScalar, Scalar, simplify, symbol


class ParseError(ValueError):
    def __init__(self, msg: str, text: str = "", pos: int = -1):
        self.text, self.pos = text, pos
        where = f" at position {pos}" if pos >= 0 else ""
        super().__init__(f"{msg}{where}: {text!r}" if text else msg)


class IrrationalError(ArithmeticError):
    """A fractional power of a rational that has no rational value."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1):
            out.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            if m.group(3) not in "+-*/^()=":
                raise ParseError(f"unexpected character {m.group(3)!r}", text, m.start(3))
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}",
                             self.text, tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = (op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = (op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return ("neg", self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return ("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.take()
            return ("num", Fraction(int(val)))
        if kind == "name":
            self.take()
            return ("var", val)
        if val == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_expr(text: str):
    p = _Parser(text)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", text, pos)
    return node


def names(node) -> set[str]:
    if node[0] == "var":
        return {node[1]}
    if node[0] == "num":
        return set()
    return set().union(*(names(ch) for ch in node[1:]))


def exact_root(x: Fraction, q: int) -> Fraction:
    """The real q-th root of a rational, if rational."""
    if x < 0 and q % 2 == 0:
        raise IrrationalError(f"even root of negative {x}")
    sign = -1 if x < 0 else 1
    out = []
    for part in (abs(x).numerator, abs(x).denominator):
        root, exact = integer_nthroot(part, q)
        if not exact:
            raise IrrationalError(f"{x} has no rational root of order {q}")
        out.append(root)
    return sign * Fraction(out[0], out[1])


def _power(base, exp):
    if not isinstance(exp, Fraction):
        raise ParseError(f"exponent must be a rational constant, got {exp!r}")
    if exp.denominator == 1:
        n = exp.numerator
        if n < 0:
            return 1 / base ** (-n)
        return base ** n
    if not isinstance(base, (int, Fraction)):
        raise IrrationalError("fractional power of a non-constant")
    return exact_root(Fraction(base), exp.denominator) ** exp.numerator


def evaluate(node, env: Mapping[str, Any] | Callable[[str], Any]):
    """Evaluate a parsed tree; ``env`` maps variable names to values."""
    lookup = env if callable(env) else env.__getitem__
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "var":
        return lookup(node[1])
    if tag == "neg":
        return -evaluate(node[1], lookup)
    a = evaluate(node[1], lookup)
    b = evaluate(node[2], lookup)
    if tag == "+":
        return a + b
    if tag == "-":
        return a - b
    if tag == "*":
        return a * b
    if tag == "/":
        if b == 0:
            raise ZeroDivisionError("division by zero in expression")
        return a / b
    if tag == "^":
        return _power(a, b)
    raise AssertionError(tag)


def parse_scalar(text: str | int) -> Scalar:
    """Parse ``"p/q"`` or an infix rational function over ``t`` and ``a``."""
    if isinstance(text, int):
        return Fraction(text)
    tree = parse_expr(str(text))

    def lookup(name):
        try:
            return symbol(name)
        except KeyError:
            raise ParseError(f"unknown symbol {name!r} (only t and a are allowed)", text)

    try:
        return simplify(evaluate(tree, lookup))
    except ZeroDivisionError as exc:
        raise MalformedScalar(f"{text!r}: {exc}") from None
