"""Multilinear polynomial identities and Borel-type closed-set conditions.

Identity grammar::

    identity := side ('=' side)?
    side     := ['-'] term (('+' | '-') term)*
    term     := [coeff ['*']] monomial
    coeff    := INT ('/' INT)?
    monomial := factor ('*' factor)?
    factor   := VAR | '(' monomial ')'

Variables are single letters and nested products must be parenthesized, so
``x*y*z`` is rejected while ``(x*y)*z`` and ``x*(y*z)`` are fine.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .algebra import Algebra, basis_vector, multiply
from .parser import ParseError, tokenize

Monomial = Union[str, tuple]  # a variable name or a pair (left, right)


class MultilinearityError(ValueError):
    pass


class UnsupportedIdentity(ValueError):
    pass


def monomial_text(m: Monomial, top: bool = True) -> str:
    if isinstance(m, str):
        return m
    inner = f"{monomial_text(m[0], False)}*{monomial_text(m[1], False)}"
    return inner if top else f"({inner})"


def leaves(m: Monomial) -> list[str]:
    if isinstance(m, str):
        return [m]
    return leaves(m[0]) + leaves(m[1])


@dataclass(frozen=True)
class Identity:
    variables: tuple[str, ...]
    terms: tuple[tuple[Fraction, Monomial], ...]
    name: str = ""

    @property
    def degree(self) -> int:
        return len(self.variables)

    def __str__(self):
        out = ""
        for coef, mon in self.terms:
            body = monomial_text(mon)
            mag = abs(coef)
            if mag != 1:
                body = f"{mag}*{body}" if isinstance(mon, str) else f"{mag}*({body})"
            sign = "-" if coef < 0 else "+"
            out += (f"{'-' if sign == '-' else ''}{body}" if not out else f" {sign} {body}")
        return out or "0"


class _IdParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", self.text, tok[2])
        self.i += 1
        return tok

    def side(self):
        terms = []
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            terms.append(self.term(sign))
        return terms

    def term(self, sign):
        coef = Fraction(sign)
        if self.peek()[0] == "int":
            num = int(self.take()[1])
            den = 1
            if self.peek()[1] == "/":
                self.take()
                kind, val, pos = self.take()
                if kind != "int":
                    raise ParseError("expected an integer denominator", self.text, pos)
                den = int(val)
                if den == 0:
                    raise ParseError("zero denominator in coefficient", self.text, pos)
            coef *= Fraction(num, den)
            if self.peek()[1] == "*":
                self.take()
        return coef, self.monomial()

    def monomial(self):
        left = self.factor()
        if self.peek()[1] == "*":
            self.take()
            right = self.factor()
            if self.peek()[1] == "*":
                raise ParseError("ambiguous product, add parentheses", self.text, self.peek()[2])
            return (left, right)
        return left

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "name":
            if len(val) != 1:
                raise ParseError(f"variables are single letters, got {val!r}", self.text, pos)
            self.take()
            return val
        if val == "(":
            self.take()
            m = self.monomial()
            self.take(")")
            return m
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def parse_identity(text: str, variables: Sequence[str] | None = None, name: str = "") -> Identity:
    """Parse an identity; both sides are moved to the left and like monomials merged."""
    p = _IdParser(text)
    terms = p.side()
    if p.peek()[1] == "=":
        p.take()
        terms += [(-c, m) for c, m in p.side()]
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", text, pos)

    seen: list[str] = []
    for _, m in terms:
        for v in leaves(m):
            if v not in seen:
                seen.append(v)
    varlist = tuple(variables) if variables is not None else tuple(sorted(seen))
    merged: dict = {}
    for c, m in terms:
        lv = leaves(m)
        if sorted(lv) != sorted(varlist):
            raise MultilinearityError(
                f"monomial {monomial_text(m)} does not use each of {', '.join(varlist)} exactly once")
        merged[m] = merged.get(m, Fraction(0)) + c
    out = tuple((c, m) for m, c in merged.items() if c != 0)
    return Identity(varlist, out, name)


# -- named identities ------------------------------------------------------

_NAMED = {
    "right-alternative": "(x*y)*z - x*(y*z) + (x*z)*y - x*(z*y)",
    "associative": "(x*y)*z - x*(y*z)",
    "anticommutative": "x*y + y*x",
    "commutative": "x*y - y*x",
    # right alternativity plus the cyclic sum of associators
    "minus-one-one-cyclic": None,
    "xyz-zero-left": "(x*y)*z",
    "xyz-zero-right": "x*(y*z)",
}

_CYCLIC = "(x*y)*z - x*(y*z) + (y*z)*x - y*(z*x) + (z*x)*y - z*(x*y)"


def named_identity(name: str) -> Identity | list[Identity]:
    """A built-in identity; ``minus-one-one-cyclic`` yields the pair defining (-1,1)-algebras."""
    if name not in _NAMED:
        raise KeyError(f"unknown identity {name!r}; available: {', '.join(sorted(_NAMED))}")
    if name == "minus-one-one-cyclic":
        return [named_identity("right-alternative"), parse_identity(_CYCLIC, name="cyclic-associator")]
    return parse_identity(_NAMED[name], name=name)


def identity_names() -> list[str]:
    return sorted(_NAMED)


def resolve_identities(spec) -> list[Identity]:
    if isinstance(spec, Identity):
        return [spec]
    if isinstance(spec, str):
        if spec in _NAMED:
            out = named_identity(spec)
            return out if isinstance(out, list) else [out]
        return [parse_identity(spec)]
    return [x for s in spec for x in resolve_identities(s)]


# -- evaluation ------------------------------------------------------------

def _eval_monomial(A: Algebra, m: Monomial, assign: dict) -> tuple:
    if isinstance(m, str):
        return assign[m]
    return multiply(A, _eval_monomial(A, m[0], assign), _eval_monomial(A, m[1], assign))


def evaluate_identity(A: Algebra, I: Identity, vectors: Sequence[Sequence]) -> tuple:
    """Value of the identity's left-hand side at the given vectors."""
    assign = dict(zip(I.variables, vectors))
    out = [Fraction(0)] * A.dim
    for coef, m in I.terms:
        v = _eval_monomial(A, m, assign)
        out = [o + coef * x for o, x in zip(out, v)]
    return tuple(out)


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    witness: tuple | None = None  # 1-based basis indices
    value: tuple | None = None

    def __bool__(self):
        return self.holds


def check_identity(A: Algebra, I: Identity | str) -> IdentityCheck:
    """Decide an identity by evaluating it on all basis tuples (enough by multilinearity)."""
    ids = resolve_identities(I)
    n = A.dim
    basis = [basis_vector(n, i) for i in range(n)]
    for ident in ids:
        for idx in itertools.product(range(n), repeat=ident.degree):
            val = evaluate_identity(A, ident, [basis[i] for i in idx])
            if any(x != 0 for x in val):
                return IdentityCheck(False, tuple(i + 1 for i in idx), val)
    return IdentityCheck(True)


def cocycle_constraints(A: Algebra, I: Identity | str) -> list[list]:
    """Linear system on the n^2 entries of theta (index ``i*n + j``) whose kernel is Z^2.

    Each monomial contributes theta applied at its outermost product, with the
    algebra's own product evaluated inside both factors.
    """
    ids = resolve_identities(I)
    n = A.dim
    basis = [basis_vector(n, i) for i in range(n)]
    rows = []
    for ident in ids:
        if ident.degree != 3:
            raise UnsupportedIdentity(f"cocycle constraints need a degree-3 identity, got degree {ident.degree}")
        for idx in itertools.product(range(n), repeat=ident.degree):
            assign = {v: basis[i] for v, i in zip(ident.variables, idx)}
            row = [Fraction(0)] * (n * n)
            for coef, m in ident.terms:
                left = _eval_monomial(A, m[0], assign)
                right = _eval_monomial(A, m[1], assign)
                for a, la in enumerate(left):
                    if la == 0:
                        continue
                    for b, rb in enumerate(right):
                        if rb != 0:
                            row[a * n + b] = row[a * n + b] + coef * la * rb
            if any(x != 0 for x in row):
                rows.append(row)
    return rows


# -- closed-set conditions -------------------------------------------------

@dataclass(frozen=True)
class PowerInclusion:
    """``A_p A_q`` is contained in ``A_r`` where ``A_i = <e_i, ..., e_n>``."""
    p: int
    q: int
    r: int

    def holds(self, A: Algebra) -> bool:
        n = A.dim
        for i in range(self.p, n + 1):
            for j in range(self.q, n + 1):
                for k in range(1, min(self.r, n + 1)):
                    if A.c(i, j, k) != 0:
                        return False
        return True

    def __str__(self):
        return f"A{self.p}*A{self.q} <= A{self.r}"


@dataclass(frozen=True)
class ConstantEquation:
    """``sum coeff * c_{ij}^k = 0`` over the listed 1-based index triples."""
    coefficients: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def holds(self, A: Algebra) -> bool:
        total = Fraction(0)
        for (i, j, k), coef in self.coefficients:
            total = total + coef * A.c(i, j, k)
        return total == 0

    def __str__(self):
        parts = [f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}c({i},{j},{k})"
                 for (i, j, k), c in self.coefficients]
        return " ".join(parts).lstrip("+") + " = 0"


ClosedSetCondition = Union[PowerInclusion, ConstantEquation]

_INCL = re.compile(r"^\s*A(\d+)\s*\*\s*A(\d+)\s*(<=|=)\s*(?:A(\d+)|0)\s*$")
_CTERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*c\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_condition(text: str, dim: int) -> ClosedSetCondition:
    """``"A1*A1 <= A3"``, ``"A3*A3 = 0"`` or ``"c(1,3,4) = c(3,1,4)"``."""
    m = _INCL.match(text)
    if m:
        p, q = int(m.group(1)), int(m.group(2))
        if m.group(3) == "=":
            if m.group(4) is not None:
                raise ParseError("use '<=' for an inclusion", text)
            r = dim + 1
        else:
            if m.group(4) is None:
                raise ParseError("expected A<r> after '<='", text)
            r = int(m.group(4))
        return PowerInclusion(p, q, r)
    if "=" not in text:
        raise ParseError("expected an inclusion or an equation", text)
    lhs, rhs = text.split("=", 1)
    coeffs: dict = {}
    for side, sgn in ((lhs, 1), (rhs, -1)):
        side = side.strip()
        if side == "0":
            continue
        pos = 0
        for mt in _CTERM.finditer(side):
            if side[pos:mt.start()].strip():
                raise ParseError(f"cannot read {side[pos:mt.start()]!r}", text)
            pos = mt.end()
            c = Fraction(mt.group(2)) if mt.group(2) else Fraction(1)
            if mt.group(1) == "-":
                c = -c
            key = (int(mt.group(3)), int(mt.group(4)), int(mt.group(5)))
            coeffs[key] = coeffs.get(key, Fraction(0)) + sgn * c
        if side[pos:].strip() or pos == 0:
            raise ParseError(f"cannot read {side!r}", text)
    return ConstantEquation(tuple((k, v) for k, v in coeffs.items() if v != 0))


def check_closed_set(A: Algebra, conditions: Sequence[ClosedSetCondition]) -> bool:
    return all(c.holds(A) for c in conditions)
