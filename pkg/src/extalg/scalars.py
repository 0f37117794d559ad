"""Exact scalars: rationals and rational functions in ``t`` and ``a`` (alpha).

Rationals are plain :class:`fractions.Fraction`.  Rational functions wrap an
element of the sparse fraction field QQ(t, a) from sympy, which keeps every
value reduced (numerator and denominator coprime).  Arithmetic that produces a
constant collapses back to a ``Fraction`` so that most of the code never sees
the heavier type.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

SYMBOLS = ("t", "a")

_FIELD, _T, _A = field(",".join(SYMBOLS), QQ, grlex)


class PoleError(ZeroDivisionError):
    """Raised when a limit or an evaluation hits a vanishing denominator."""


class MalformedScalar(ValueError):
    pass


def _qq(x):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


def _frac(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class RationalFunction:
    """Reduced quotient of two polynomials in t and a with rational coefficients."""

    __slots__ = ("_f",)

    def __init__(self, f):
        self._f = f

    @classmethod
    def from_polys(cls, numer: Mapping[tuple[int, int], Fraction],
                   denom: Mapping[tuple[int, int], Fraction]) -> "Scalar":
        """Build from sparse ``{(deg_t, deg_a): coeff}`` maps."""
        ring = _FIELD.ring
        num = ring({k: _qq(v) for k, v in numer.items() if v})
        den = ring({k: _qq(v) for k, v in denom.items() if v})
        if not den:
            raise MalformedScalar("zero denominator")
        return _wrap(_FIELD(num) / _FIELD(den))

    # -- structure -------------------------------------------------------
    def numerator(self) -> dict[tuple[int, int], Fraction]:
        return {m: _frac(c) for m, c in self._f.numer.terms()}

    def denominator(self) -> dict[tuple[int, int], Fraction]:
        return {m: _frac(c) for m, c in self._f.denom.terms()}

    def symbols(self) -> set[str]:
        out = set()
        for poly in (self._f.numer, self._f.denom):
            for mon, _ in poly.terms():
                out.update(s for s, e in zip(SYMBOLS, mon) if e)
        return out

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other._f
        if isinstance(other, (int, Fraction)):
            return _FIELD(_qq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _wrap(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _wrap(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _wrap(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else _wrap(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return _wrap(self._f / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return _wrap(o / self._f)

    def __neg__(self):
        return RationalFunction(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return _wrap(1 / self._f ** (-n))
        return _wrap(self._f ** n)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._f == o

    def __hash__(self):
        return hash(self._f)

    def __bool__(self):
        return bool(self._f)

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        return to_text(self)


Scalar = Union[Fraction, RationalFunction]


def _wrap(f) -> Scalar:
    if f.denom.is_ground and f.numer.is_ground:
        return _frac(f.numer.LC) / _frac(f.denom.LC) if f.numer else Fraction(0)
    return RationalFunction(f)


T = RationalFunction(_T)
ALPHA = RationalFunction(_A)


def symbol(name: str) -> RationalFunction:
    if name == "t":
        return T
    if name in ("a", "alpha"):
        return ALPHA
    raise KeyError(name)


def simplify(f) -> Scalar:
    """Canonical form: ``Fraction`` when constant, reduced ``RationalFunction`` otherwise."""
    if isinstance(f, RationalFunction):
        return _wrap(f._f)
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    raise TypeError(f"not a scalar: {f!r}")


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, RationalFunction))


def free_symbols(x) -> set[str]:
    return x.symbols() if isinstance(x, RationalFunction) else set()


def _subst_poly(poly: Mapping[tuple[int, int], Fraction], values: Mapping[int, Scalar]):
    """Substitute a subset of the variables (by index) into a sparse polynomial."""
    total = Fraction(0)
    gens = (T, ALPHA)
    for mon, c in poly.items():
        term = c
        for idx, e in enumerate(mon):
            if e:
                term = term * (values[idx] ** e if idx in values else gens[idx] ** e)
        total = total + term
    return total


def limit_at_t_zero(f: Scalar) -> Scalar:
    """Value of ``f`` at t = 0; raises :class:`PoleError` if t divides the denominator."""
    if not isinstance(f, RationalFunction):
        return f
    den = f.denominator()
    if all(m[0] > 0 for m in den):
        raise PoleError(f"{f} has a pole at t = 0")
    return _subst_poly(f.numerator(), {0: Fraction(0)}) / _subst_poly(den, {0: Fraction(0)})


def substitute(f: Scalar, assignment: Mapping[str, Scalar]) -> Scalar:
    """Partial substitution of symbols by scalars."""
    if not isinstance(f, RationalFunction):
        return f
    vals = {SYMBOLS.index("a" if k == "alpha" else k): v for k, v in assignment.items()}
    den = _subst_poly(f.denominator(), vals)
    if den == 0:
        raise PoleError(f"denominator of {f} vanishes at {dict(assignment)}")
    return _subst_poly(f.numerator(), vals) / den


def evaluate(f: Scalar, assignment: Mapping[str, Fraction]) -> Fraction:
    missing = free_symbols(f) - {("a" if k == "alpha" else k) for k in assignment}
    if missing:
        raise ValueError(f"no value given for {sorted(missing)}")
    out = substitute(f, assignment)
    assert isinstance(out, Fraction)
    return out


# -- text form -----------------------------------------------------------

def _poly_text(poly: Mapping[tuple[int, int], Fraction]) -> str:
    if not poly:
        return "0"
    parts = []
    for mon in sorted(poly, key=lambda m: (-sum(m), tuple(-e for e in m))):
        c = poly[mon]
        factors = []
        for s, e in zip(SYMBOLS, mon):
            if e == 1:
                factors.append(s)
            elif e:
                factors.append(f"{s}^{e}")
        mag = abs(c)
        body = "*".join(factors)
        if not body:
            body = str(mag)
        elif mag != 1:
            body = f"{mag}*{body}"
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def to_text(x) -> str:
    """Render a scalar in the same infix grammar the parser reads."""
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    num, den = x.numerator(), x.denominator()
    n = _poly_text(num)
    if len(num) > 1 and den != {(0, 0): Fraction(1)}:
        n = f"({n})"
    if den == {(0, 0): Fraction(1)}:
        return n
    d = _poly_text(den)
    if any(ch in d for ch in " */-"):
        d = f"({d})"
    return f"{n}/{d}"
