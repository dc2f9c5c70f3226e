"""Structure-constant Lie algebras over the rationals.

An algebra is its dimension plus the bracket table on basis pairs i < j;
the other half of the table is implied by antisymmetry. All indices are
0-based internally and 1-based in files and reports.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction

from gderive.errors import (
    DimensionMismatch,
    InputError,
    UnknownName,
    UnvalidatedAutomorphism,
)
from gderive.linalg import (
    Matrix,
    Subspace,
    format_rational,
    inverse,
    kernel_basis,
    parse_rational,
)

_ABELIAN_RE = re.compile(r"^abelian\(([0-9]+)\)$")


@dataclass(frozen=True, eq=True)
class LieAlgebra:
    """Bilinear antisymmetric product given by structure constants."""

    name: str
    dim: int
    structure: dict
    lie_validated: bool = False

    def pair_bracket(self, i: int, j: int):
        """[e_i, e_j] as a coordinate vector, any index order."""
        zero = tuple(Fraction(0) for _ in range(self.dim))
        if i == j:
            return zero
        if i < j:
            return self.structure.get((i, j), zero)
        value = self.structure.get((j, i), zero)
        return tuple(-a for a in value)


def bracket(g: LieAlgebra, x, y):
    """Bilinear extension of the structure constants."""
    if len(x) != g.dim or len(y) != g.dim:
        raise DimensionMismatch("vectors must have the algebra dimension")
    x = [Fraction(a) if isinstance(a, int) else a for a in x]
    y = [Fraction(a) if isinstance(a, int) else a for a in y]
    out = [Fraction(0)] * g.dim
    for (i, j), cij in g.structure.items():
        coeff = x[i] * y[j] - x[j] * y[i]
        if coeff:
            for k, a in enumerate(cij):
                out[k] += coeff * a
    return tuple(out)


def ad(g: LieAlgebra, x) -> Matrix:
    """Adjoint matrix of x: column j holds [x, e_j]."""
    basis = Matrix.identity(g.dim).entries
    columns = [bracket(g, x, e) for e in basis]
    return Matrix(g.dim, g.dim, tuple(
        tuple(col[i] for col in columns) for i in range(g.dim)
    ))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_lie(g: LieAlgebra) -> ValidationReport:
    """Check the Jacobi identity on every basis triple.

    Violations are (i, j, k, residual) entries with 1-based indices;
    antisymmetry holds by construction and is not rechecked.
    """
    basis = Matrix.identity(g.dim).entries
    violations = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            for k in range(j + 1, g.dim):
                ei, ej, ek = basis[i], basis[j], basis[k]
                residual = tuple(
                    a + b + c
                    for a, b, c in zip(
                        bracket(g, bracket(g, ei, ej), ek),
                        bracket(g, bracket(g, ej, ek), ei),
                        bracket(g, bracket(g, ek, ei), ej),
                    )
                )
                if any(residual):
                    violations.append((i + 1, j + 1, k + 1, residual))
    return ValidationReport(tuple(violations))


def with_validation(g: LieAlgebra) -> LieAlgebra:
    """Return g flagged lie_validated when the Jacobi report is clean."""
    if validate_lie(g).ok:
        return replace(g, lie_validated=True)
    return g


def center(g: LieAlgebra) -> Subspace:
    basis = Matrix.identity(g.dim).entries
    rows = []
    for e in basis:
        rows.extend(ad(g, e).entries)
    if not rows:
        return Subspace.full(g.dim)
    return kernel_basis(Matrix.from_rows(rows))


def centralizer(g: LieAlgebra, x) -> Subspace:
    return kernel_basis(ad(g, x))


def derived_subalgebra(g: LieAlgebra) -> Subspace:
    return Subspace.span(g.dim, list(g.structure.values()))


def is_perfect(g: LieAlgebra) -> bool:
    return derived_subalgebra(g).dim == g.dim


def is_abelian(g: LieAlgebra) -> bool:
    return all(not any(v) for v in g.structure.values())


def is_automorphism(g: LieAlgebra, m: Matrix) -> bool:
    """Invertible and multiplicative on all basis pairs i < j."""
    if m.rows != g.dim or m.cols != g.dim:
        return False
    try:
        inverse(m)
    except Exception:
        return False
    basis = Matrix.identity(g.dim).entries
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = m.apply(g.pair_bracket(i, j))
            rhs = bracket(g, m.apply(basis[i]), m.apply(basis[j]))
            if lhs != rhs:
                return False
    return True


@dataclass(frozen=True)
class Automorphism:
    algebra: LieAlgebra
    matrix: Matrix
    validated: bool = False

    @staticmethod
    def identity(g: LieAlgebra) -> "Automorphism":
        return Automorphism(g, Matrix.identity(g.dim), True)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.algebra, inverse(self.matrix), self.validated)

    def power(self, k: int) -> "Automorphism":
        base = self.matrix if k >= 0 else inverse(self.matrix)
        return Automorphism(self.algebra, base.power(abs(k)), self.validated)


def make_automorphism(g: LieAlgebra, m: Matrix) -> Automorphism:
    if not is_automorphism(g, m):
        raise UnvalidatedAutomorphism(
            "matrix is not an automorphism of the algebra"
        )
    return Automorphism(g, m, True)


def require_validated(sigma: Automorphism) -> Automorphism:
    if not sigma.validated:
        raise UnvalidatedAutomorphism("automorphism was not validated")
    return sigma


def _relations(pairs) -> dict:
    return {
        (i, j): tuple(Fraction(a) for a in vec) for (i, j), vec in pairs.items()
    }


def builtin(name: str) -> LieAlgebra:
    """Catalog of the worked example algebras, pre-validated."""
    if name == "sl2":
        structure = _relations({
            (0, 1): (-1, 0, 0),
            (0, 2): (0, 2, 0),
            (1, 2): (0, 0, -1),
        })
        return with_validation(LieAlgebra("sl2", 3, structure))
    if name == "heisenberg":
        structure = _relations({(0, 1): (0, 0, 1)})
        return with_validation(LieAlgebra("heisenberg", 3, structure))
    if name == "example_4_6":
        structure = _relations({(0, 1): (0, 1, 0), (0, 2): (0, 0, 2)})
        return with_validation(LieAlgebra("example_4_6", 3, structure))
    match = _ABELIAN_RE.match(name)
    if match:
        n = int(match.group(1))
        return with_validation(LieAlgebra(name, n, {}))
    raise UnknownName(f"no built-in algebra named {name!r}")


def algebra_from_json_dict(data: dict) -> LieAlgebra:
    """Load {"name", "dim", "brackets": [{"left","right","result"}]} (1-based)."""
    try:
        name = data["name"]
        dim = data["dim"]
        entries = data["brackets"]
    except (TypeError, KeyError) as exc:
        raise InputError("algebra object needs name, dim, brackets") from exc
    if not isinstance(dim, int) or dim < 0:
        raise InputError("dim must be a nonnegative integer")
    structure = {}
    for item in entries:
        try:
            i, j, result = item["left"], item["right"], item["result"]
        except (TypeError, KeyError) as exc:
            raise InputError("bracket entries need left, right, result") from exc
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= dim):
            raise InputError(f"bracket pair ({i},{j}) must satisfy 1 <= i < j <= dim")
        vec = [Fraction(0)] * dim
        for coeff, k in result:
            if not (isinstance(k, int) and 1 <= k <= dim):
                raise InputError(f"component index {k} out of range")
            vec[k - 1] += parse_rational(coeff)
        structure[(i - 1, j - 1)] = tuple(vec)
    return LieAlgebra(name, dim, structure)


def algebra_to_json_dict(g: LieAlgebra) -> dict:
    brackets = []
    for (i, j) in sorted(g.structure):
        vec = g.structure[(i, j)]
        result = [
            [format_rational(a), k + 1] for k, a in enumerate(vec) if a
        ]
        if result:
            brackets.append({"left": i + 1, "right": j + 1, "result": result})
    return {"name": g.name, "dim": g.dim, "brackets": brackets}
