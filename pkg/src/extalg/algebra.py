"""Finite-dimensional algebras given by structure constants.

Conventions used throughout the package:

* ``constants[i][j]`` is the coordinate vector of ``e_i e_j`` (0-based
  internally, 1-based in every printed name such as ``c_{12}^3``).
* Vectors are coordinate tuples.
* :func:`change_basis` takes a matrix whose *rows* are the new basis vectors
  written in old coordinates, ``E_i = sum_j P[i][j] e_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import DimensionError, Subspace
from .parser import evaluate as eval_tree, parse_expr
from .scalars import Scalar, free_symbols, simplify, substitute, symbol


class SingularBasisError(linalg.SingularMatrixError):
    pass


def _zero_vec(n: int) -> tuple:
    return (Fraction(0),) * n


@dataclass(frozen=True, eq=False)
class Algebra:
    dim: int
    constants: tuple
    name: str = ""
    parameters: frozenset = field(default=frozenset())

    def __post_init__(self):
        n = self.dim
        c = self.constants
        if len(c) != n or any(len(row) != n or any(len(v) != n for v in row) for row in c):
            raise DimensionError(f"structure tensor does not have shape {n}x{n}x{n}")
        canon = tuple(tuple(tuple(simplify(x) for x in v) for v in row) for row in c)
        object.__setattr__(self, "constants", canon)
        syms = set()
        for row in canon:
            for v in row:
                for x in v:
                    syms |= free_symbols(x)
        object.__setattr__(self, "parameters", frozenset(syms))

    # -- construction helpers -------------------------------------------
    @classmethod
    def zero(cls, n: int, name: str | None = None) -> "Algebra":
        return cls(n, tuple(tuple(_zero_vec(n) for _ in range(n)) for _ in range(n)),
                   name if name is not None else f"zero{n}")

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, int, Scalar]],
                     name: str = "") -> "Algebra":
        """Build from 1-based ``(i, j, k, value)`` entries; omitted entries are zero."""
        c = [[list(_zero_vec(dim)) for _ in range(dim)] for _ in range(dim)]
        for i, j, k, value in entries:
            if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
                raise DimensionError(f"index ({i},{j},{k}) outside 1..{dim}")
            c[i - 1][j - 1][k - 1] = c[i - 1][j - 1][k - 1] + value
        return cls(dim, tuple(tuple(tuple(v) for v in row) for row in c), name)

    @classmethod
    def from_table(cls, dim: int, table: Mapping[tuple[int, int], str], name: str = "") -> "Algebra":
        """Build from products written like ``{(1, 1): "e2", (2, 1): "-e3 + a*e4"}``."""
        entries = []
        for (i, j), text in table.items():
            vec = eval_tree(parse_expr(text), lambda s: _basis_or_symbol(s, dim))
            for k, x in enumerate(vec.coords, start=1):
                if x != 0:
                    entries.append((i, j, k, x))
        return cls.from_entries(dim, entries, name)

    # -- basic access ----------------------------------------------------
    def c(self, i: int, j: int, k: int) -> Scalar:
        """Structure constant ``c_{ij}^k`` with 1-based indices."""
        return self.constants[i - 1][j - 1][k - 1]

    def entries(self) -> list[tuple[int, int, int, Scalar]]:
        n = self.dim
        return [(i + 1, j + 1, k + 1, self.constants[i][j][k])
                for i in range(n) for j in range(n) for k in range(n)
                if self.constants[i][j][k] != 0]

    def renamed(self, name: str) -> "Algebra":
        return Algebra(self.dim, self.constants, name)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.dim == other.dim and self.constants == other.constants

    def __hash__(self):
        return hash((self.dim, self.constants))

    def __repr__(self):
        label = self.name or "Algebra"
        return f"<{label}: {table_text(self) or 'zero product'}>"


class _Vec:
    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(coords)

    def __add__(self, o):
        return _Vec(x + y for x, y in zip(self.coords, o.coords))

    def __sub__(self, o):
        return _Vec(x - y for x, y in zip(self.coords, o.coords))

    def __neg__(self):
        return _Vec(-x for x in self.coords)

    def __mul__(self, s):
        return _Vec(x * s for x in self.coords)

    __rmul__ = __mul__


def _basis_or_symbol(name: str, dim: int):
    if name.startswith("e") and name[1:].isdigit():
        k = int(name[1:])
        if not 1 <= k <= dim:
            raise DimensionError(f"{name} outside dimension {dim}")
        return _Vec(Fraction(int(k == m)) for m in range(1, dim + 1))
    return symbol(name)


def table_text(A: Algebra) -> str:
    """Compact multiplication table, e.g. ``e1e1=e2 e2e1=-e3``."""
    from .scalars import to_text
    parts = []
    n = A.dim
    for i in range(n):
        for j in range(n):
            v = A.constants[i][j]
            terms = []
            for k, x in enumerate(v):
                if x == 0:
                    continue
                coef = to_text(x)
                if coef == "1":
                    s = f"e{k + 1}"
                elif coef == "-1":
                    s = f"-e{k + 1}"
                else:
                    if " " in coef or "/" in coef:
                        coef = f"({coef})"
                    s = f"{coef}*e{k + 1}"
                terms.append(s)
            if terms:
                rhs = terms[0] + "".join(t if t.startswith("-") else "+" + t for t in terms[1:])
                parts.append(f"e{i + 1}e{j + 1}={rhs}")
    return " ".join(parts)


# -- products --------------------------------------------------------------

def multiply(A: Algebra, x: Sequence, y: Sequence) -> tuple:
    n = A.dim
    if len(x) != n or len(y) != n:
        raise DimensionError(f"vectors must have length {n}")
    out = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        row = A.constants[i]
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            s = xi * yj
            for k, c in enumerate(row[j]):
                if c != 0:
                    out[k] = out[k] + s * c
    return tuple(out)


def basis_vector(n: int, i: int) -> tuple:
    """The 0-based ``i``-th coordinate vector."""
    return tuple(Fraction(int(i == m)) for m in range(n))


def product_space(A: Algebra, U: Subspace, W: Subspace) -> Subspace:
    """Span of all products ``u w`` with ``u`` in U and ``w`` in W."""
    return Subspace(A.dim, [multiply(A, u, w) for u in U.basis for w in W.basis])


def annihilator(A: Algebra) -> Subspace:
    """``{x : xA + Ax = 0}`` as the kernel of the stacked multiplication system."""
    n = A.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([A.constants[i][j][k] for i in range(n)])  # x e_j
            rows.append([A.constants[j][i][k] for i in range(n)])  # e_j x
    return linalg.kernel(rows, n)


@dataclass(frozen=True)
class PowerChain:
    spaces: tuple  # A^1, A^2, ... as Subspaces, ending with the zero space if nilpotent
    nil_index: int | None  # smallest N with A^N = 0; None if never reached

    @property
    def nilpotent(self) -> bool:
        return self.nil_index is not None

    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.spaces)


def power_chain(A: Algebra, max_steps: int | None = None) -> PowerChain:
    """Two-sided power filtration ``A^k = sum_{i+j=k} A^i A^j``."""
    n = A.dim
    cap = max_steps if max_steps is not None else 2 ** n + 1
    powers = [None, Subspace.full(n)]
    if n == 0:
        return PowerChain((powers[1],), 1)
    k = 1
    while powers[k].dim:
        if k >= cap:
            return PowerChain(tuple(powers[1:]), None)
        k += 1
        acc = Subspace.zero(n)
        for i in range(1, k):
            acc = acc + product_space(A, powers[i], powers[k - i])
        powers.append(acc)
    return PowerChain(tuple(powers[1:]), k)


def is_nilpotent(A: Algebra) -> bool:
    return power_chain(A).nilpotent


def change_basis(A: Algebra, P: Sequence[Sequence[Scalar]]) -> Algebra:
    """Structure constants of the same product in the basis given by the rows of P."""
    n = A.dim
    if len(P) != n or any(len(r) != n for r in P):
        raise DimensionError(f"basis matrix must be {n}x{n}")
    try:
        Pinv = linalg.inverse([list(r) for r in P])
    except linalg.SingularMatrixError:
        raise SingularBasisError("basis matrix is singular") from None
    rows = [tuple(r) for r in P]
    new = []
    for i in range(n):
        row = []
        for j in range(n):
            v = multiply(A, rows[i], rows[j])
            row.append(tuple(linalg.vec_mat(v, Pinv)))
        new.append(tuple(row))
    return Algebra(n, tuple(new), A.name)


def direct_sum(A: Algebra, k: int, name: str = "") -> Algebra:
    """``A`` plus ``k`` new coordinates that multiply to zero with everything."""
    n = A.dim + k
    c = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < A.dim and j < A.dim:
                row.append(tuple(A.constants[i][j]) + _zero_vec(k))
            else:
                row.append(_zero_vec(n))
        c.append(tuple(row))
    return Algebra(n, tuple(c), name)


def specialize(A: Algebra, assignment: Mapping[str, Scalar]) -> Algebra:
    """Substitute values for the symbolic parameters (``a``, ``t``)."""
    if not A.parameters:
        return A
    c = tuple(tuple(tuple(substitute(x, assignment) for x in v) for v in row) for row in A.constants)
    return Algebra(A.dim, c, A.name)


def map_constants(A: Algebra, fn) -> Algebra:
    c = tuple(tuple(tuple(fn(x) for x in v) for v in row) for row in A.constants)
    return Algebra(A.dim, c, A.name)


def is_commutative(A: Algebra) -> bool:
    n = A.dim
    return all(A.constants[i][j] == A.constants[j][i] for i in range(n) for j in range(i + 1, n))


def subalgebra_generated(A: Algebra, vectors: Iterable[Sequence]) -> Subspace:
    """Smallest subspace containing ``vectors`` and closed under the product."""
    S = Subspace(A.dim, list(vectors))
    while True:
        bigger = S + product_space(A, S, S)
        if bigger.dim == S.dim:
            return S
        S = bigger
