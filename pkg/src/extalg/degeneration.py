"""Degenerations through parametric bases, and closed-set certificates.

A parametric basis is a matrix over QQ(t) (or QQ(t, a)) whose rows are the
vectors ``E_i^t`` in old coordinates.  The source algebra is rewritten in that
basis and every structure constant is sent to its value at ``t = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from . import linalg
from .algebra import Algebra, change_basis, multiply, specialize
from .identity import ClosedSetCondition, check_closed_set
from .parser import parse_scalar
from .scalars import PoleError, Scalar, free_symbols, limit_at_t_zero, substitute, to_text


class ParametricBasis:
    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Sequence]):
        rows = [[parse_scalar(x) if isinstance(x, (str, int)) else x for x in row] for row in entries]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise linalg.DimensionError("parametric basis must be square")
        if linalg.det(rows) == 0:
            raise linalg.SingularMatrixError("parametric basis is identically singular")
        self.entries = rows

    @property
    def dim(self) -> int:
        return len(self.entries)

    def symbols(self) -> set[str]:
        return set().union(*(free_symbols(x) for row in self.entries for x in row))

    def specialize(self, assignment: Mapping[str, Scalar]) -> "ParametricBasis":
        return ParametricBasis([[substitute(x, assignment) for x in row] for row in self.entries])

    def rows_text(self) -> list[str]:
        out = []
        for i, row in enumerate(self.entries, start=1):
            terms = [f"({to_text(x)})*e{j}" for j, x in enumerate(row, start=1) if x != 0]
            out.append(f"E{i} = " + " + ".join(terms))
        return out


def apply_parametric_basis(A: Algebra, E: ParametricBasis) -> Algebra:
    return change_basis(A, E.entries)


@dataclass(frozen=True)
class PoleReport:
    poles: tuple  # 1-based (i, j, k) whose constant has no limit at t = 0

    def __bool__(self):
        return False


def degeneration_limit(A: Algebra, E: ParametricBasis) -> Algebra | PoleReport:
    moved = apply_parametric_basis(A, E)
    n = A.dim
    poles = []
    c = []
    for i in range(n):
        row = []
        for j in range(n):
            v = []
            for k in range(n):
                try:
                    v.append(limit_at_t_zero(moved.constants[i][j][k]))
                except PoleError:
                    poles.append((i + 1, j + 1, k + 1))
                    v.append(Fraction(0))
            row.append(tuple(v))
        c.append(tuple(row))
    if poles:
        return PoleReport(tuple(poles))
    return Algebra(n, tuple(c), f"lim {A.name}")


def constant_diff(X: Algebra, Y: Algebra) -> list[tuple]:
    """``(i, j, k, x, y)`` for every structure constant where the algebras differ."""
    n = X.dim
    return [(i + 1, j + 1, k + 1, X.constants[i][j][k], Y.constants[i][j][k])
            for i in range(n) for j in range(n) for k in range(n)
            if X.constants[i][j][k] != Y.constants[i][j][k]]


@dataclass
class DegenerationRow:
    name: str
    source: str
    target: str
    basis: ParametricBasis
    alpha_samples: tuple = ()
    excluded: tuple = ()
    provenance: str = ""

    @classmethod
    def from_json(cls, data: Mapping) -> "DegenerationRow":
        samples = tuple(parse_scalar(x) for x in data.get("alpha_samples", ()))
        excluded = tuple(parse_scalar(x) for x in data.get("excluded", ()))
        bad = [s for s in samples if s in excluded]
        if bad:
            raise ValueError(f"row {data['name']}: sample values {bad} are excluded")
        return cls(data["name"], data["source"], data["target"], ParametricBasis(data["basis"]),
                   samples, excluded, data.get("provenance", ""))


@dataclass
class RowResult:
    row: str
    verified: bool
    mode: str  # "exact", "symbolic", "sampled"
    details: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"row": self.row, "status": "Verified" if self.verified else "Failed",
                "mode": self.mode, "details": self.details}


def _compare(limit, target: Algebra) -> tuple[bool, dict]:
    if isinstance(limit, PoleReport):
        return False, {"poles": [list(p) for p in limit.poles]}
    diff = constant_diff(limit, target)
    if diff:
        return False, {"mismatch": [[i, j, k, to_text(x), to_text(y)] for i, j, k, x, y in diff]}
    return True, {}


def verify_degeneration_row(row: DegenerationRow, resolve: Callable[[str], Algebra],
                            alpha_samples: Sequence[Fraction] | None = None) -> RowResult:
    """Exact comparison of the limit with the target; symbolic in alpha when possible."""
    source, target = resolve(row.source), resolve(row.target)
    if source.dim != row.basis.dim or target.dim != row.basis.dim:
        return RowResult(row.name, False, "exact", [{"error": "dimension mismatch"}])
    parametric = "a" in (row.basis.symbols() | source.parameters | target.parameters)
    limit = degeneration_limit(source, row.basis)
    ok, info = _compare(limit, target)
    if ok or not parametric:
        return RowResult(row.name, ok, "symbolic" if parametric else "exact", [info] if info else [])
    samples = tuple(alpha_samples) if alpha_samples is not None else row.alpha_samples
    details = [{"symbolic": info}]
    if not samples:
        return RowResult(row.name, False, "symbolic", details)
    all_ok = True
    for a in samples:
        if a in row.excluded:
            raise ValueError(f"alpha = {a} is excluded for {row.name}")
        env = {"a": a}
        lim = degeneration_limit(specialize(source, env), row.basis.specialize(env))
        ok_a, info_a = _compare(lim, specialize(target, env))
        all_ok &= ok_a
        details.append({"alpha": str(a), "status": "Verified" if ok_a else "Failed", **info_a})
    return RowResult(row.name, all_ok, "sampled", details)


# -- closed sets -------------------------------------------------------------

class _LazyBasisChange:
    """Structure constants in a new basis, computed only when a condition asks."""

    def __init__(self, A: Algebra, P):
        self.A = A
        self.dim = A.dim
        self.rows = [tuple(r) for r in P]
        self.Pinv = linalg.inverse([list(r) for r in P])
        self._cache: dict = {}

    def c(self, i: int, j: int, k: int):
        key = (i, j)
        if key not in self._cache:
            self._cache[key] = multiply(self.A, self.rows[i - 1], self.rows[j - 1])
        v = self._cache[key]
        total = Fraction(0)
        for l, x in enumerate(v):
            if x != 0:
                total += x * self.Pinv[l][k - 1]
        return total


@dataclass(frozen=True)
class BasisFound:
    matrix: tuple
    trial: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NoBasisFound:
    trials: int
    seed: int
    label: str = "evidence only: a bounded random search cannot rule out every basis"

    def __bool__(self):
        return False


_BOX = sorted({Fraction(m, d) for d in (1, 2) for m in range(-3 * d, 3 * d + 1)})
CHUNK = 1000


def random_basis(rng: random.Random, n: int):
    while True:
        P = [[rng.choice(_BOX) for _ in range(n)] for _ in range(n)]
        if linalg.det(P) != 0:
            return P


def _search_chunk(A: Algebra, conditions, seed, chunk: int, count: int):
    rng = random.Random(f"{seed}:{chunk}")
    for t in range(count):
        P = random_basis(rng, A.dim)
        if check_closed_set(_LazyBasisChange(A, P), conditions):
            return chunk * CHUNK + t + 1, P
    return None


def closed_set_basis_search(A: Algebra, conditions: Sequence[ClosedSetCondition],
                            trials: int = 10_000, seed: int = 0,
                            jobs: int = 1) -> BasisFound | NoBasisFound:
    """Look for a basis in which A satisfies every condition.

    Trial 0 is the stored basis.  The remaining trials are split into fixed
    chunks of 1000, each with its own seed derived from ``seed``, so the
    outcome does not depend on ``jobs``.
    """
    if A.parameters:
        raise ValueError(f"{A.name} depends on {sorted(A.parameters)}; specialize it first")
    n = A.dim
    if check_closed_set(A, conditions):
        return BasisFound(tuple(map(tuple, linalg.identity(n))), 0)
    chunks = [(c, min(CHUNK, trials - c * CHUNK)) for c in range((trials + CHUNK - 1) // CHUNK)]
    if jobs > 1 and len(chunks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_search_chunk, *zip(*[(A, list(conditions), seed, c, k) for c, k in chunks])))
    else:
        results = []
        for c, k in chunks:
            results.append(_search_chunk(A, conditions, seed, c, k))
            if results[-1]:
                break
    for res in results:
        if res:
            trial, P = res
            # re-check through the full change of basis before reporting
            assert check_closed_set(change_basis(A, P), conditions)
            return BasisFound(tuple(map(tuple, P)), trial)
    return NoBasisFound(trials, seed)
