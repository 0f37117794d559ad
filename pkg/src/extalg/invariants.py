"""Isomorphism invariants and a finite-field isomorphism search.

Derivations are matrices acting on coordinates by ``D(e_i) = sum_k D[i][k] e_k``
(row convention, the same one :func:`~extalg.algebra.change_basis` uses).
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .algebra import Algebra, annihilator, is_commutative, power_chain, specialize
from .identity import check_identity


def derivation_system(A: Algebra) -> list[list]:
    """Rows of ``D(e_i e_j) - D(e_i) e_j - e_i D(e_j) = 0``; unknown ``D[a][b]`` at ``a*n + b``."""
    n = A.dim
    c = A.constants
    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                for l in range(n):
                    if c[i][j][l] != 0:
                        row[l * n + k] += c[i][j][l]
                for m in range(n):
                    if c[m][j][k] != 0:
                        row[i * n + m] -= c[m][j][k]
                    if c[i][m][k] != 0:
                        row[j * n + m] -= c[i][m][k]
                if any(x != 0 for x in row):
                    rows.append(row)
    return rows


def derivation_algebra(A: Algebra) -> tuple[int, list]:
    n = A.dim
    ker = linalg.kernel(derivation_system(A), n * n)
    basis = [[list(v[a * n:(a + 1) * n]) for a in range(n)] for v in ker.basis]
    return ker.dim, basis


def is_derivation(A: Algebra, D) -> bool:
    n = A.dim
    flat = [D[a][b] for a in range(n) for b in range(n)]
    return all(sum((x * y for x, y in zip(row, flat)), Fraction(0)) == 0 for row in derivation_system(A))


@dataclass(frozen=True)
class InvariantVector:
    dim: int
    dim_A2: int
    dim_A3: int
    nil_index: int | None
    dim_ann: int
    dim_der: int
    commutative: bool
    associative: bool
    right_alternative: bool

    def as_tuple(self) -> tuple:
        return tuple(asdict(self).values())

    def differences(self, other: "InvariantVector") -> list[str]:
        a, b = asdict(self), asdict(other)
        return [k for k in a if a[k] != b[k]]


def invariant_vector(A: Algebra, alpha: Mapping[str, Fraction] | None = None) -> InvariantVector:
    if A.parameters:
        if not alpha:
            raise ValueError(f"{A.name} depends on {sorted(A.parameters)}; give sample values")
        A = specialize(A, alpha)
    chain = power_chain(A)
    dims = chain.dims()
    return InvariantVector(
        dim=A.dim,
        dim_A2=dims[1] if len(dims) > 1 else 0,
        dim_A3=dims[2] if len(dims) > 2 else 0,
        nil_index=chain.nil_index,
        dim_ann=annihilator(A).dim,
        dim_der=derivation_algebra(A)[0],
        commutative=is_commutative(A),
        associative=bool(check_identity(A, "associative")),
        right_alternative=bool(check_identity(A, "right-alternative")),
    )


# -- finite fields ---------------------------------------------------------

class NotIntegral(ValueError):
    pass


def reduce_mod(A: Algebra, p: int) -> list:
    """Structure constants reduced modulo ``p`` as ``c[i][j][k]`` ints."""
    if A.parameters:
        raise NotIntegral(f"{A.name} still depends on {sorted(A.parameters)}")
    out = []
    for row in A.constants:
        r = []
        for v in row:
            w = []
            for x in v:
                if x.denominator % p == 0:
                    raise NotIntegral(f"constant {x} is not {p}-integral")
                w.append(x.numerator * pow(x.denominator, -1, p) % p)
            r.append(w)
        out.append(r)
    return out


@dataclass(frozen=True)
class IsoWitness:
    matrix: tuple  # rows are images of the basis, as in change_basis
    prime: int
    caveat: str = "evidence only: isomorphism mod p says nothing definite over Q or C"

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoneFoundModP:
    prime: int
    searched: int  # partial bases visited
    caveat: str = "evidence only: no isomorphism mod p does not prove non-isomorphism over C"

    def __bool__(self):
        return False


def _rank_mod(rows: list, p: int) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] % p:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def ff_iso_evidence(A: Algebra, B: Algebra, prime: int) -> IsoWitness | NoneFoundModP:
    """Exhaustive search of GL_n(F_p) for P with ``change_basis(A mod p, P) == B mod p``.

    Rows of P are chosen one at a time in lexicographic order; a partial
    choice is dropped as soon as the rows become dependent or a product
    constraint whose rows are all chosen fails, so the first witness found is
    the lexicographically smallest.
    """
    if A.dim != B.dim:
        return NoneFoundModP(prime, 0)
    if prime not in (2, 3, 5):
        raise ValueError("prime must be 2, 3 or 5")
    n, p = A.dim, prime
    a = reduce_mod(A, p)
    b = reduce_mod(B, p)

    def mul(x, y):
        out = [0] * n
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        s = xi * yj
                        for k, c in enumerate(a[i][j]):
                            if c:
                                out[k] += s * c
        return [v % p for v in out]

    # constraint (i, j) becomes checkable once rows i, j and every k with b_ij^k != 0 are set
    ready: dict[int, list] = {r: [] for r in range(n)}
    for i in range(n):
        for j in range(n):
            need = max([i, j] + [k for k in range(n) if b[i][j][k]])
            ready[need].append((i, j))

    vectors = [list(v) for v in itertools.product(range(p), repeat=n) if any(v)]
    rows: list = []
    visited = 0

    def ok(r):
        for i, j in ready[r]:
            lhs = mul(rows[i], rows[j])
            rhs = [0] * n
            for k in range(n):
                if b[i][j][k]:
                    rhs = [(x + b[i][j][k] * y) % p for x, y in zip(rhs, rows[k])]
            if lhs != rhs:
                return False
        return True

    def search(r):
        nonlocal visited
        if r == n:
            return True
        for v in vectors:
            visited += 1
            rows.append(v)
            if _rank_mod(rows, p) == r + 1 and ok(r) and search(r + 1):
                return True
            rows.pop()
        return False

    if search(0):
        return IsoWitness(tuple(tuple(Fraction(x) for x in r) for r in rows), p)
    return NoneFoundModP(p, visited)


def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p ** n - p ** i
    return out
