"""Second cohomology, central extensions and the automorphism action on cocycles.

Bilinear forms are n x n matrices with ``theta[i][j] = theta(e_i, e_j)``; as
vectors they are flattened row-major (``D_ij`` sits at index ``i*n + j``).

Automorphisms are matrices acting on column coordinate vectors, so the image
``phi(e_j)`` is column ``j``.  This matches the shapes displayed for
automorphism groups, and the action on forms is ``phi^T theta phi``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .algebra import Algebra, basis_vector, multiply
from .identity import Identity, check_identity, cocycle_constraints
from .linalg import DimensionError, Subspace
from .parser import evaluate as eval_tree, names as tree_names, parse_expr
from .scalars import Scalar, symbol, to_text


class CocycleError(ValueError):
    pass


class PreconditionError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class BadShapeError(ValueError):
    pass


class BilinearForm:
    """Matrix of a bilinear form in the ``D_ij`` basis."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Sequence[Sequence]):
        n = len(matrix)
        if any(len(r) != n for r in matrix):
            raise DimensionError("bilinear form must be square")
        self.matrix = tuple(tuple(r) for r in matrix)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @classmethod
    def zero(cls, n: int) -> "BilinearForm":
        return cls([[Fraction(0)] * n for _ in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "BilinearForm":
        """``D_ij`` with 1-based indices."""
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i - 1][j - 1] = Fraction(1)
        return cls(m)

    @classmethod
    def from_vector(cls, n: int, v: Sequence) -> "BilinearForm":
        return cls([list(v[i * n:(i + 1) * n]) for i in range(n)])

    def vector(self) -> tuple:
        return tuple(x for row in self.matrix for x in row)

    def __call__(self, x: Sequence, y: Sequence):
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi != 0:
                for j, yj in enumerate(y):
                    if yj != 0 and self.matrix[i][j] != 0:
                        total = total + xi * yj * self.matrix[i][j]
        return total

    def _zip(self, other, op):
        if not isinstance(other, BilinearForm):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError("forms of different sizes")
        return BilinearForm([[op(a, b) for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        return BilinearForm([[-a for a in r] for r in self.matrix])

    def __mul__(self, s):
        if isinstance(s, BilinearForm):
            return NotImplemented
        return BilinearForm([[a * s for a in r] for r in self.matrix])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.matrix for x in r)

    def __str__(self):
        return form_text(self.vector(), self.n)

    def __repr__(self):
        return f"BilinearForm({self})"


def form_text(v: Sequence, n: int) -> str:
    """Render a flattened form as ``D12+D21``-style text."""
    parts = []
    for idx, x in enumerate(v):
        if x == 0:
            continue
        i, j = divmod(idx, n)
        label = f"D{i + 1}{j + 1}" if n < 10 else f"D{i + 1}_{j + 1}"
        coef = to_text(x) if not hasattr(x, "numer") else str(x)
        if coef == "1":
            body, sign = label, "+"
        elif coef == "-1":
            body, sign = label, "-"
        else:
            neg = coef.startswith("-") and " " not in coef and "(" not in coef
            mag = coef[1:] if neg else coef
            if any(ch in mag for ch in " +-/") and not mag.startswith("("):
                mag = f"({mag})"
            body, sign = f"{mag}*{label}", "-" if neg else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return out + "".join(f"{s}{b}" for s, b in parts[1:])


_DNAME = re.compile(r"^D(\d)(\d)$|^D(\d+)_(\d+)$")


def parse_form(text: str, n: int, env: Mapping[str, object] | None = None) -> BilinearForm:
    """Parse ``"D12+D21+a*D33"``; other names are looked up in ``env`` then as t/a."""
    tree = parse_expr(text)

    def lookup(name):
        m = _DNAME.match(name)
        if m:
            i, j = (int(m.group(1)), int(m.group(2))) if m.group(1) else (int(m.group(3)), int(m.group(4)))
            if not (1 <= i <= n and 1 <= j <= n):
                raise DimensionError(f"{name} outside dimension {n}")
            return BilinearForm.unit(n, i, j)
        if env is not None and name in env:
            return env[name]
        return symbol(name)

    out = eval_tree(tree, lookup)
    if not isinstance(out, BilinearForm):
        if out == 0:
            return BilinearForm.zero(n)
        raise ValueError(f"{text!r} is not a linear combination of D_ij")
    return out


# -- Z^2, B^2, H^2 ----------------------------------------------------------

def coboundaries(A: Algebra) -> Subspace:
    """B^2: span of the forms ``(i, j) -> c_ij^k``, one per coordinate functional."""
    n = A.dim
    forms = [[A.constants[i][j][k] for i in range(n) for j in range(n)] for k in range(n)]
    return Subspace(n * n, forms)


def cocycles(A: Algebra, identity: Identity | str = "right-alternative") -> Subspace:
    n = A.dim
    return linalg.kernel(cocycle_constraints(A, identity), n * n)


@dataclass(frozen=True)
class CohomologyReport:
    z2: Subspace
    b2: Subspace
    h2_dim: int
    h2_representatives: tuple  # BilinearForms completing a basis of B^2 to Z^2

    def as_dict(self, n: int) -> dict:
        return {
            "Z2": [form_text(v, n) for v in self.z2.basis],
            "B2": [form_text(v, n) for v in self.b2.basis],
            "H2_dim": self.h2_dim,
            "H2": [f"[{r}]" for r in self.h2_representatives],
        }


def cohomology(A: Algebra, identity: Identity | str = "right-alternative") -> CohomologyReport:
    chk = check_identity(A, identity)
    if not chk:
        raise PreconditionError(f"{A.name or 'algebra'} does not satisfy the identity "
                                f"(witness {chk.witness})", chk)
    z2 = cocycles(A, identity)
    b2 = coboundaries(A)
    reps = tuple(BilinearForm.from_vector(A.dim, v) for v in b2.complement_in(z2))
    return CohomologyReport(z2, b2, z2.quotient_dim(b2), reps)


def same_class(A: Algebra, theta: BilinearForm, other: BilinearForm) -> bool:
    """``[theta] == [other]`` in H^2, i.e. the difference is a coboundary."""
    return coboundaries(A).contains((theta - other).vector())


def central_extension(A: Algebra, thetas: Sequence[BilinearForm],
                      identity: Identity | str | None = "right-alternative",
                      name: str = "") -> Algebra:
    """``A + V`` with product ``xy + sum_r theta_r(x, y) e_{n+r}``."""
    if not thetas:
        raise ValueError("need at least one cocycle")
    n, s = A.dim, len(thetas)
    if identity is not None:
        z2 = cocycles(A, identity)
        for th in thetas:
            if th.n != n:
                raise DimensionError(f"cocycle of size {th.n} for an algebra of dimension {n}")
            if not z2.contains(th.vector()):
                raise CocycleError(f"{th} is not a cocycle")
    m = n + s
    c = []
    for i in range(m):
        row = []
        for j in range(m):
            v = [Fraction(0)] * m
            if i < n and j < n:
                v[:n] = A.constants[i][j]
                for r, th in enumerate(thetas):
                    v[n + r] = th.matrix[i][j]
            row.append(tuple(v))
        c.append(tuple(row))
    return Algebra(m, tuple(c), name)


def quotient_last(A: Algebra, s: int = 1) -> Algebra:
    """Drop the last ``s`` coordinates (inverse of a central extension on constants)."""
    n = A.dim - s
    c = tuple(tuple(tuple(A.constants[i][j][:n]) for j in range(n)) for i in range(n))
    return Algebra(n, c)


def cocycle_annihilator(theta: BilinearForm) -> Subspace:
    """``{x : theta(x, A) + theta(A, x) = 0}``."""
    n = theta.n
    rows = [[theta.matrix[i][j] for i in range(n)] for j in range(n)]  # theta(x, e_j)
    rows += [list(theta.matrix[j]) for j in range(n)]  # theta(e_j, x)
    return linalg.kernel(rows, n)


def act_on_cocycle(phi: Sequence[Sequence], theta: BilinearForm) -> BilinearForm:
    """``(phi theta)(x, y) = theta(phi x, phi y)``, i.e. ``phi^T theta phi``."""
    if len(phi) != theta.n or any(len(r) != theta.n for r in phi):
        raise DimensionError("automorphism and form sizes differ")
    phi = [list(r) for r in phi]
    return BilinearForm(linalg.matmul(linalg.matmul(linalg.transpose(phi), [list(r) for r in theta.matrix]), phi))


def verify_automorphism(A: Algebra, phi: Sequence[Sequence]) -> bool:
    n = A.dim
    if len(phi) != n or any(len(r) != n for r in phi):
        return False
    phi = [list(r) for r in phi]
    if linalg.rank(phi) < n:
        return False
    images = [linalg.mat_vec(phi, basis_vector(n, i)) for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = linalg.mat_vec(phi, A.constants[i][j])
            if tuple(lhs) != multiply(A, images[i], images[j]):
                return False
    return True


# -- automorphism shapes and orbit evidence --------------------------------

@dataclass
class AutomorphismShape:
    """Parametric matrix shape for Aut(A), transcribed rather than computed."""
    algebra: str
    parameters: tuple[str, ...]
    matrix: tuple  # parsed expression trees
    nonzero: tuple = ()  # parsed trees that must not vanish
    source: dict = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: Mapping) -> "AutomorphismShape":
        mat = tuple(tuple(parse_expr(str(e)) for e in row) for row in data["matrix"])
        params = tuple(data["parameters"])
        used = set().union(*(tree_names(e) for row in mat for e in row))
        unknown = used - set(params)
        if unknown:
            raise ValueError(f"shape for {data['algebra']} uses undeclared names {sorted(unknown)}")
        nz = tuple(parse_expr(str(e)) for e in data.get("nonzero", ()))
        return cls(data["algebra"], params, mat, nz, dict(data))

    def instantiate(self, values: Mapping[str, object]):
        return [[eval_tree(e, values) for e in row] for row in self.matrix]

    def sample(self, rng: random.Random, box: int = 5, max_tries: int = 1000):
        """Random rational parameters from a small box with all side conditions satisfied."""
        for _ in range(max_tries):
            vals = {p: Fraction(rng.randint(-box, box), rng.choice((1, 1, 2, 3))) for p in self.parameters}
            if any(eval_tree(e, vals) == 0 for e in self.nonzero):
                continue
            phi = self.instantiate(vals)
            if linalg.det(phi) != 0:
                return vals, phi
        raise BadShapeError("could not sample an invertible matrix from the shape")


@dataclass(frozen=True)
class NoEquivalenceFound:
    samples: int
    seed: int
    label: str = "evidence only: random sampling cannot prove distinct orbits"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class EquivalenceWitness:
    phi: tuple
    scale: Scalar  # W2 = scale * phi(W1) modulo B^2
    sample_index: int

    def __bool__(self):
        return True


def class_scale(b2: Subspace, image: BilinearForm, target: BilinearForm):
    """``lam`` with ``target = lam * image`` modulo B^2, or ``None``."""
    if b2.contains(image.vector()):
        return None
    # columns are independent, so the solution is unique
    cols = [list(c) for c in b2.basis] + [list(image.vector())]
    sol = linalg.solve(linalg.transpose(cols), target.vector())
    if sol is None or sol[-1] == 0:
        return None
    return sol[-1]


def orbit_distinctness_evidence(A: Algebra, w1: BilinearForm, w2: BilinearForm,
                                shape: AutomorphismShape, samples: int = 1000,
                                seed: int = 0) -> NoEquivalenceFound | EquivalenceWitness:
    """Look for ``phi`` in the shape and ``lam`` with ``w2 = lam * phi(w1)`` mod B^2."""
    b2 = coboundaries(A)
    rng = random.Random(seed)
    ident = linalg.identity(A.dim)
    lam = class_scale(b2, w1, w2)
    if lam is not None:
        return EquivalenceWitness(tuple(map(tuple, ident)), lam, 0)
    for idx in range(1, samples + 1):
        _, phi = shape.sample(rng)
        if not verify_automorphism(A, phi):
            raise BadShapeError(f"sampled matrix {phi} is not an automorphism of {A.name}")
        lam = class_scale(b2, act_on_cocycle(phi, w1), w2)
        if lam is not None:
            return EquivalenceWitness(tuple(map(tuple, phi)), lam, idx)
    return NoEquivalenceFound(samples, seed)



# -- symbolic action formulas and orbit representatives -------------------

def _coordinate_map(basis: Sequence[Sequence]):
    """Map a vector in span(basis) to its coordinates in that basis.

    The pivot columns of the RREF give an invertible square block, so only
    those entries of the vector are read.  Works on sympy entries too.
    """
    M = [list(b) for b in basis]
    _, _, pivots = linalg.rref(M)
    inv = linalg.inverse([[row[c] for c in pivots] for row in M])

    def coords(v):
        picked = [v[c] for c in pivots]
        return [sum((picked[r] * inv[r][k] for r in range(len(pivots))), 0) for k in range(len(M))]
    return coords


def _sym_matrix(shape: AutomorphismShape, extra: Sequence[str] = ()):
    import sympy
    env = {name: sympy.Symbol(name) for name in (*shape.parameters, *extra)}
    return env, sympy.Matrix([[sympy.sympify(eval_tree(e, env)) for e in row] for row in shape.matrix])


def _sym(text: str, env):
    import sympy
    return sympy.sympify(eval_tree(parse_expr(text), env))


@dataclass(frozen=True)
class FormulaCheck:
    label: str
    status: str  # "VERIFIED" or "DISCREPANCY"
    claimed: str
    computed: str

    def as_dict(self) -> dict:
        return {"label": self.label, "status": self.status, "claimed": self.claimed, "computed": self.computed}


def action_formulas(A: Algebra, shape: AutomorphismShape, nablas: Sequence[BilinearForm],
                    claimed: Sequence[str], coeff_names: Sequence[str] | None = None) -> list[FormulaCheck]:
    """Recompute the coefficients ``alpha*_i`` of ``phi^T (sum alpha_i nabla_i) phi`` modulo B^2.

    The generic form uses coefficient names ``a1, a2, ...``; ``claimed`` are
    the expected expressions in those names and the shape parameters.
    """
    import sympy
    n = A.dim
    names = list(coeff_names or [f"a{i + 1}" for i in range(len(nablas))])
    env, phi = _sym_matrix(shape, names)
    theta = sympy.zeros(n, n)
    for name, nab in zip(names, nablas):
        theta += env[name] * sympy.Matrix(nab.matrix)
    image = (phi.T * theta * phi).applyfunc(sympy.expand)
    basis = list(coboundaries(A).basis) + [nab.vector() for nab in nablas]
    coords = _coordinate_map(basis)([image[i, j] for i in range(n) for j in range(n)])
    b2dim = len(basis) - len(nablas)
    out = []
    for i, text in enumerate(claimed):
        got = sympy.expand(coords[b2dim + i])
        ok = sympy.expand(got - _sym(text, env)) == 0
        out.append(FormulaCheck(f"{names[i]}*", "VERIFIED" if ok else "DISCREPANCY", text, str(got)))
    return out


def expansion_check(shape: AutomorphismShape, theta: BilinearForm,
                    claimed_terms: Sequence[tuple[str, str]]) -> list[FormulaCheck]:
    """Compare ``phi^T theta phi`` entry by entry with a claimed expansion.

    ``claimed_terms`` pairs a coefficient expression with a form such as
    ``"D12+D21"``.  One check per matrix entry where either side is nonzero.
    """
    import sympy
    n = theta.n
    env, phi = _sym_matrix(shape)
    image = (phi.T * sympy.Matrix(theta.matrix) * phi).applyfunc(sympy.expand)
    claim = sympy.zeros(n, n)
    for coef, form in claimed_terms:
        claim += _sym(coef, env) * sympy.Matrix(parse_form(form, n).matrix)
    out = []
    for i in range(n):
        for j in range(n):
            got, want = image[i, j], sympy.expand(claim[i, j])
            if got == 0 and want == 0:
                continue
            ok = sympy.expand(got - want) == 0
            out.append(FormulaCheck(f"D{i + 1}{j + 1}", "VERIFIED" if ok else "DISCREPANCY", str(want), str(got)))
    return out


@dataclass(frozen=True)
class CaseCheck:
    label: str
    status: str  # "VERIFIED", "DISCREPANCY" or "SKIPPED-IRRATIONAL"
    detail: str = ""

    def as_dict(self) -> dict:
        return {"label": self.label, "status": self.status, "detail": self.detail}


def representative_case(A: Algebra, shape: AutomorphismShape, nablas: Sequence[BilinearForm],
                        target: BilinearForm, sample: Mapping[str, Scalar],
                        settings: Mapping[str, str], label: str = "",
                        conditions: Mapping[str, Sequence[str]] | None = None) -> CaseCheck:
    """Check one orbit-representative choice at a rational sample point.

    ``sample`` gives the coefficients ``a1, a2, ...`` of the generic cocycle;
    ``settings`` gives each shape parameter as an expression in them.  The
    case passes when the chosen automorphism sends the generic cocycle to a
    nonzero multiple of ``target`` modulo B^2.
    """
    from .parser import IrrationalError
    conditions = conditions or {}
    for text in conditions.get("zero", ()):
        if eval_tree(parse_expr(text), sample) != 0:
            raise ValueError(f"{label}: sample violates {text} = 0")
    for text in conditions.get("nonzero", ()):
        if eval_tree(parse_expr(text), sample) == 0:
            raise ValueError(f"{label}: sample violates {text} != 0")
    values = {}
    try:
        for p in shape.parameters:
            values[p] = eval_tree(parse_expr(settings.get(p, "0")), sample)
    except IrrationalError as exc:
        return CaseCheck(label, "SKIPPED-IRRATIONAL", f"{p}: {exc}")
    phi = shape.instantiate(values)
    shown = ", ".join(f"{k}={v}" for k, v in values.items())
    if linalg.det(phi) == 0 or not verify_automorphism(A, phi):
        return CaseCheck(label, "DISCREPANCY", f"chosen matrix is not an automorphism ({shown})")
    theta = BilinearForm.zero(A.dim)
    for i, nab in enumerate(nablas):
        theta = theta + nab * sample[f"a{i + 1}"]
    image = act_on_cocycle(phi, theta)
    lam = class_scale(coboundaries(A), image, target)
    if lam is None:
        return CaseCheck(label, "DISCREPANCY", f"image {image} is not a multiple of {target} mod B^2 ({shown})")
    return CaseCheck(label, "VERIFIED", f"{target} = {lam} * image mod B^2 ({shown})")
