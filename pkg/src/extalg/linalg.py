"""Dense exact linear algebra over any field whose elements support ``+ - * /``.

Matrices are lists of rows.  Entries are normally ``Fraction`` or
:class:`~extalg.scalars.RationalFunction`, but anything with exact zero tests
works (sympy fraction-field elements are used by the symbolic checks).
Pivoting always takes the first nonzero entry, so results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list  # list of rows


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    out = zeros(n, n)
    for i, x in enumerate(entries):
        out[i][i] = x
    return out


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def mat_vec(m: Matrix, v: Sequence) -> list:
    return [_dot(row, v) for row in m]


def vec_mat(v: Sequence, m: Matrix) -> list:
    return [_dot(v, col) for col in transpose(m)]


def _dot(u, v):
    total = Fraction(0)
    for x, y in zip(u, v):
        if x and y:
            total = total + x * y
    return total


def rref(m: Matrix, ncols: int | None = None) -> tuple[Matrix, int, list[int]]:
    """Gauss-Jordan reduced row echelon form.

    Returns ``(R, rank, pivot_columns)``; ``R`` keeps the zero rows at the
    bottom so it has the same shape as ``m``.
    """
    rows = [list(r) for r in m]
    ncols = len(rows[0]) if rows else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv if x != 0 else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y if y != 0 else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, r, pivots


def rank(m: Matrix) -> int:
    return rref(m)[1]


def kernel(m: Matrix, ncols: int | None = None) -> "Subspace":
    """Right null space ``{v : m v = 0}``."""
    n = len(m[0]) if m else ncols
    if n is None:
        raise DimensionError("kernel of an empty matrix needs ncols")
    if not m:
        return Subspace.full(n)
    R, rk, piv = rref(m)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, piv):
            if row[f] != 0:
                v[pc] = -row[f]
        basis.append(v)
    return Subspace(n, basis)


def solve(m: Matrix, b: Sequence) -> list | None:
    """One solution of ``m x = b`` (free variables zero), or ``None``."""
    n = len(m[0])
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    R, rk, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(R, piv):
        x[pc] = row[n]
    return x


def det(m: Matrix):
    n = len(m)
    rows = [list(r) for r in m]
    out = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            out = -out
        pv = rows[c][c]
        out = out * pv
        for i in range(c + 1, n):
            f = rows[i][c]
            if f != 0:
                f = f / pv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return out


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionError("inverse of a non-square matrix")
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    R, rk, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return [row[n:] for row in R[:n]]


class Subspace:
    """Linear subspace of ``K^ambient_dim`` held as a canonical RREF basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        if vecs:
            R, rk, piv = rref(vecs)
            self.basis = [tuple(r) for r in R[:rk]]
            self.pivots = tuple(piv)
        else:
            self.basis, self.pivots = [], ()
        self.ambient_dim = ambient_dim

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls(n, [[Fraction(int(i == j)) for j in range(n)] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim} differ")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.basis or not other.basis:
            return Subspace.zero(self.ambient_dim)
        # a.U = b.W  <=>  [U^T | -W^T] (a, b) = 0
        cols = [list(u) for u in self.basis] + [[-x for x in w] for w in other.basis]
        k = kernel(transpose(cols))
        vecs = []
        for sol in k.basis:
            coeffs = sol[: self.dim]
            vecs.append([_dot(coeffs, col) for col in zip(*self.basis)])
        return Subspace(self.ambient_dim, vecs)

    __and__ = intersection

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        return self.coordinates(v) is not None

    __contains__ = contains

    def coordinates(self, v: Sequence) -> list | None:
        """Coefficients of ``v`` on the RREF basis, or ``None`` if ``v`` is outside."""
        coeffs = [v[p] for p in self.pivots]
        rest = list(v)
        for c, b in zip(coeffs, self.basis):
            if c != 0:
                rest = [x - c * y for x, y in zip(rest, b)]
        if any(x != 0 for x in rest):
            return None
        return coeffs

    def issubspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.basis)))

    def quotient_dim(self, sub: "Subspace") -> int:
        self._check(sub)
        if not sub.issubspace(self):
            raise DimensionError("quotient by a subspace that is not contained")
        return self.dim - sub.dim

    def complement_in(self, bigger: "Subspace") -> list[tuple]:
        """Vectors of ``bigger``'s basis that extend this basis to a basis of ``bigger``."""
        chosen = list(self.basis)
        out = []
        current = self.dim
        for v in bigger.basis:
            trial = Subspace(self.ambient_dim, chosen + [v])
            if trial.dim > current:
                chosen.append(v)
                out.append(v)
                current += 1
        return out

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    return u + w


def intersection(u: Subspace, w: Subspace) -> Subspace:
    return u.intersection(w)


def quotient_dim(u: Subspace, w: Subspace) -> int:
    return u.quotient_dim(w)
