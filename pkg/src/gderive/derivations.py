"""Twisted-derivation spaces and the operator constructions built on them.

Every solver assembles an explicit exact linear system in the n^2 entries
of the unknown map and returns the canonical kernel basis. For a twisted
pair the residual D([x,y]) - [D(x), sigma(y)] - [tau(x), D(y)] is NOT
antisymmetric in (x,y) unless sigma = tau, so assembly runs over all
ordered basis pairs including the diagonal in the twisted case and over
i < j only in the untwisted one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gderive.algebra import (
    Automorphism,
    LieAlgebra,
    ad,
    bracket,
    center,
    derived_subalgebra,
    is_abelian,
    require_validated,
)
from gderive.errors import (
    AbelianAlgebra,
    AdNotInvertibleOnH,
    DimensionMismatch,
    NotSigmaStable,
    SingularMatrix,
)
from gderive.linalg import (
    Matrix,
    Subspace,
    inverse,
    kernel_basis,
    matrix_order,
    solve,
    subspace_intersect,
    vec_to_matrix,
)


@dataclass(frozen=True)
class DerivationSpace:
    algebra: LieAlgebra
    sigma: Automorphism
    tau: Automorphism
    kind: str
    basis: tuple
    subspace: Subspace
    generators_for_minus: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)


def _basis_vectors(n: int):
    return Matrix.identity(n).entries


def _check_shape(g: LieAlgebra, m: Matrix):
    if m.rows != g.dim or m.cols != g.dim:
        raise DimensionMismatch("matrix does not act on the algebra")


def _identity_pairs(g: LieAlgebra, sigma: Matrix, tau: Matrix):
    """Index pairs on which the defining identity must be imposed."""
    n = g.dim
    if sigma == tau:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    return [(i, j) for i in range(n) for j in range(n)]


def _pair_rows(g: LieAlgebra, sigma: Matrix, tau: Matrix, i: int, j: int):
    """Coefficient rows (one per coordinate) of the (e_i, e_j) residual.

    Unknown D[k][m] sits at flat index m*n + k (stacked images).
    """
    n = g.dim
    basis = _basis_vectors(n)
    cij = g.pair_bracket(i, j)
    sig_j = sigma.col(j)
    tau_i = tau.col(i)
    rows = [[Fraction(0)] * (n * n) for _ in range(n)]
    for m in range(n):
        # D([e_i,e_j]) contributes c_m * D[r][m].
        if cij[m]:
            for r in range(n):
                rows[r][m * n + r] += cij[m]
        # -[D(e_i), sigma(e_j)] contributes -[e_m, sigma e_j]_r * D[m][i].
        left = bracket(g, basis[m], sig_j)
        for r in range(n):
            if left[r]:
                rows[r][i * n + m] -= left[r]
        # -[tau(e_i), D(e_j)] contributes -[tau e_i, e_m]_r * D[m][j].
        right = bracket(g, tau_i, basis[m])
        for r in range(n):
            if right[r]:
                rows[r][j * n + m] -= right[r]
    return rows


def _commutation_rows(n: int, sigma: Matrix):
    """Rows of D*sigma - sigma*D = 0 in the flattened unknowns."""
    rows = []
    for r in range(n):
        for c in range(n):
            row = [Fraction(0)] * (n * n)
            for m in range(n):
                row[m * n + r] += sigma[m, c]
                row[c * n + m] -= sigma[r, m]
            rows.append(row)
    return rows


def _solve_rows(n: int, rows) -> tuple:
    system = Matrix.from_rows(rows) if rows else Matrix(0, n * n, ())
    space = kernel_basis(system)
    matrices = tuple(vec_to_matrix(v, n, n) for v in space.basis)
    return matrices, space


def is_derivation_pair(
    g: LieAlgebra, d: Matrix, sigma: Automorphism, tau: Automorphism
) -> bool:
    """Check the defining identity of Der_{sigma,tau} on basis pairs."""
    require_validated(sigma)
    require_validated(tau)
    _check_shape(g, d)
    basis = _basis_vectors(g.dim)
    for i, j in _identity_pairs(g, sigma.matrix, tau.matrix):
        lhs = d.apply(g.pair_bracket(i, j))
        rhs = tuple(
            a + b
            for a, b in zip(
                bracket(g, d.apply(basis[i]), sigma.matrix.apply(basis[j])),
                bracket(g, tau.matrix.apply(basis[i]), d.apply(basis[j])),
            )
        )
        if lhs != rhs:
            return False
    return True


def derivation_space(
    g: LieAlgebra,
    sigma: Automorphism,
    tau: Automorphism = None,
    kind: str = "plain",
    gens: tuple = (),
) -> DerivationSpace:
    """Solve for Der_{sigma,tau}(g), optionally with interior constraints.

    kind "plus" adds commutation with sigma; kind "minus" adds commutation
    with every automorphism in gens.
    """
    require_validated(sigma)
    if tau is None:
        tau = Automorphism.identity(g)
    require_validated(tau)
    _check_shape(g, sigma.matrix)
    _check_shape(g, tau.matrix)
    n = g.dim
    rows = []
    for i, j in _identity_pairs(g, sigma.matrix, tau.matrix):
        rows.extend(_pair_rows(g, sigma.matrix, tau.matrix, i, j))
    if kind == "plus":
        rows.extend(_commutation_rows(n, sigma.matrix))
    elif kind == "minus":
        for other in gens:
            require_validated(other)
            _check_shape(g, other.matrix)
            rows.extend(_commutation_rows(n, other.matrix))
    elif kind != "plain":
        raise DimensionMismatch(f"unknown kind {kind!r}")
    matrices, space = _solve_rows(n, rows)
    return DerivationSpace(g, sigma, tau, kind, matrices, space, tuple(gens))


def plus_interior(g: LieAlgebra, sigma: Automorphism) -> DerivationSpace:
    return derivation_space(g, sigma, kind="plus")


def minus_interior(
    g: LieAlgebra, sigma: Automorphism, gens
) -> DerivationSpace:
    return derivation_space(g, sigma, kind="minus", gens=tuple(gens))


def centroid(g: LieAlgebra) -> DerivationSpace:
    """Maps commuting with all bracket multiplications.

    [D(x), y] = D([x,y]) over all ordered pairs (including the diagonal)
    covers both defining identities, since [x, D(y)] = D([x,y]) at (i,j)
    is the first identity at (j,i) up to sign.
    """
    n = g.dim
    basis = _basis_vectors(n)
    rows = []
    for i in range(n):
        for j in range(n):
            cij = g.pair_bracket(i, j)
            pair_rows = [[Fraction(0)] * (n * n) for _ in range(n)]
            for m in range(n):
                if cij[m]:
                    for r in range(n):
                        pair_rows[r][m * n + r] += cij[m]
                left = bracket(g, basis[m], basis[j])
                for r in range(n):
                    if left[r]:
                        pair_rows[r][i * n + m] -= left[r]
            rows.extend(pair_rows)
    ident = Automorphism.identity(g)
    matrices, space = _solve_rows(n, rows)
    return DerivationSpace(g, ident, ident, "centroid", matrices, space)


def twist(d: Matrix, tau: Automorphism) -> Matrix:
    """Compose with the inverse of tau: D -> tau^{-1} D."""
    return inverse(tau.matrix) @ d


def sigma_bracket(d: Matrix, t: Matrix, sigma: Automorphism) -> Matrix:
    """sigma [sigma^{-1} D, sigma^{-1} T], the transported commutator."""
    inv = inverse(sigma.matrix)
    a, b = inv @ d, inv @ t
    return sigma.matrix @ (a @ b - b @ a)


def left_symmetric_product(
    g: LieAlgebra, d: Matrix, sigma: Automorphism
):
    """Product table x_i * x_j = D^{-1}([sigma e_i, D e_j]).

    Requires invertible D; together with D in Der_{sigma,sigma} this makes
    the table left-symmetric with commutator bracket equal to the original.
    """
    require_validated(sigma)
    _check_shape(g, d)
    try:
        d_inv = inverse(d)
    except SingularMatrix:
        raise SingularMatrix("the twisted derivation is not invertible")
    basis = _basis_vectors(g.dim)
    table = []
    for i in range(g.dim):
        row = []
        sig_i = sigma.matrix.apply(basis[i])
        for j in range(g.dim):
            row.append(d_inv.apply(bracket(g, sig_i, d.apply(basis[j]))))
        table.append(tuple(row))
    return tuple(table)


def phi_x_sigma(
    g: LieAlgebra, d: Matrix, sigma: Automorphism, x
) -> Matrix:
    """The map D -> ad(sigma^{-1} D(x)) underlying the rank bound."""
    return ad(g, inverse(sigma.matrix).apply(d.apply(x)))


def _functionals_vanishing_on(space: Subspace) -> tuple:
    """Rows f with f . v = 0 for every v in the subspace."""
    if not space.basis:
        return tuple(Matrix.identity(space.ambient_dim).entries)
    return kernel_basis(Matrix.from_rows(space.basis)).basis


def _image_constraint_rows(n: int, x, target: Subspace):
    """Rows forcing D(x) into the target subspace."""
    rows = []
    for f in _functionals_vanishing_on(target):
        row = [Fraction(0)] * (n * n)
        for r in range(n):
            if f[r]:
                for m in range(n):
                    if x[m]:
                        row[m * n + r] += f[r] * x[m]
        rows.append(row)
    return rows


def kernel_phi(g: LieAlgebra, sigma: Automorphism, x) -> DerivationSpace:
    """{D in Der_sigma : D(x) lies in the center}."""
    require_validated(sigma)
    tau = Automorphism.identity(g)
    n = g.dim
    rows = []
    for i, j in _identity_pairs(g, sigma.matrix, tau.matrix):
        rows.extend(_pair_rows(g, sigma.matrix, tau.matrix, i, j))
    x = tuple(Fraction(a) if isinstance(a, int) else a for a in x)
    rows.extend(_image_constraint_rows(n, x, center(g)))
    matrices, space = _solve_rows(n, rows)
    return DerivationSpace(g, sigma, tau, "kernel_phi", matrices, space)


def quasiderivation_witness(g: LieAlgebra, d: Matrix):
    """A map T with [D(x),y] + [x,D(y)] = T([x,y]), or None.

    Both sides are antisymmetric bilinear, so basis pairs i < j suffice.
    """
    _check_shape(g, d)
    n = g.dim
    basis = _basis_vectors(n)
    rows = []
    rhs = []
    for i in range(n):
        for j in range(i + 1, n):
            cij = g.pair_bracket(i, j)
            target = tuple(
                a + b
                for a, b in zip(
                    bracket(g, d.apply(basis[i]), basis[j]),
                    bracket(g, basis[i], d.apply(basis[j])),
                )
            )
            for r in range(n):
                row = [Fraction(0)] * (n * n)
                for m in range(n):
                    if cij[m]:
                        row[m * n + r] += cij[m]
                rows.append(row)
                rhs.append(target[r])
    if not rows:
        return Matrix.zero(n, n)
    solution = solve(Matrix.from_rows(rows), rhs)
    if solution is None:
        return None
    return vec_to_matrix(solution, n, n)


def abg_space(g: LieAlgebra, alpha, beta, gamma) -> DerivationSpace:
    """Solutions of alpha D[x,y] = beta [D(x),y] + gamma [x,D(y)].

    The two sides have mismatched symmetry when beta != gamma, so the
    system then runs over all ordered pairs including the diagonal.
    """
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    n = g.dim
    basis = _basis_vectors(n)
    if beta == gamma:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(n)]
    rows = []
    for i, j in pairs:
        cij = g.pair_bracket(i, j)
        pair_rows = [[Fraction(0)] * (n * n) for _ in range(n)]
        for m in range(n):
            if cij[m]:
                for r in range(n):
                    pair_rows[r][m * n + r] += alpha * cij[m]
            left = bracket(g, basis[m], basis[j])
            for r in range(n):
                if left[r]:
                    pair_rows[r][i * n + m] -= beta * left[r]
            right = bracket(g, basis[i], basis[m])
            for r in range(n):
                if right[r]:
                    pair_rows[r][j * n + m] -= gamma * right[r]
        rows.extend(pair_rows)
    matrices, space = _solve_rows(n, rows)
    ident = Automorphism.identity(g)
    kind = f"abg({alpha},{beta},{gamma})"
    return DerivationSpace(g, ident, ident, kind, matrices, space)


def stabilized_space(
    g: LieAlgebra, sigma: Automorphism, h: Subspace
) -> DerivationSpace:
    """{D in Der_sigma : D(h) inside h} for a sigma-stable subspace h."""
    require_validated(sigma)
    for v in h.basis:
        if not h.contains(sigma.matrix.apply(v)):
            raise NotSigmaStable("sigma does not preserve the subspace")
    tau = Automorphism.identity(g)
    n = g.dim
    rows = []
    for i, j in _identity_pairs(g, sigma.matrix, tau.matrix):
        rows.extend(_pair_rows(g, sigma.matrix, tau.matrix, i, j))
    for v in h.basis:
        rows.extend(_image_constraint_rows(n, v, h))
    matrices, space = _solve_rows(n, rows)
    return DerivationSpace(g, sigma, tau, "stabilized", matrices, space)


def _coords_in(h: Subspace, vector):
    pivots = [next(i for i, a in enumerate(row) if a != 0) for row in h.basis]
    coords = tuple(vector[p] for p in pivots)
    rebuilt = [Fraction(0)] * h.ambient_dim
    for c, row in zip(coords, h.basis):
        for i, a in enumerate(row):
            rebuilt[i] += c * a
    if tuple(rebuilt) != tuple(vector):
        raise NotSigmaStable("vector does not lie in the subspace")
    return coords


def restrict(d: Matrix, h: Subspace) -> Matrix:
    """The induced matrix on h, in h-basis coordinates."""
    if d.cols != h.ambient_dim:
        raise DimensionMismatch("matrix does not act on the ambient space")
    columns = [_coords_in(h, d.apply(v)) for v in h.basis]
    return Matrix(h.dim, h.dim, tuple(
        tuple(col[r] for col in columns) for r in range(h.dim)
    ))


def tilde_map(
    g: LieAlgebra, d: Matrix, sigma: Automorphism, x0, h: Subspace
) -> Matrix:
    """The induced map v -> 2 D(v) + [D(y), sigma x0] + [sigma y, D(x0)].

    Here y solves [x0, y] = v on h; requires ad(x0) to restrict to an
    invertible map of h.
    """
    require_validated(sigma)
    adx = ad(g, x0)
    try:
        restricted = restrict(adx, h)
        restricted_inv = inverse(restricted)
    except (NotSigmaStable, SingularMatrix) as exc:
        raise AdNotInvertibleOnH(
            "ad(x0) does not restrict invertibly to the subspace"
        ) from exc
    x0 = tuple(Fraction(a) if isinstance(a, int) else a for a in x0)
    sig_x0 = sigma.matrix.apply(x0)
    columns = []
    for v in h.basis:
        y_coords = restricted_inv.apply(_coords_in(h, v))
        y = [Fraction(0)] * h.ambient_dim
        for c, row in zip(y_coords, h.basis):
            for i, a in enumerate(row):
                y[i] += c * a
        image = tuple(
            2 * a + b + c
            for a, b, c in zip(
                d.apply(v),
                bracket(g, d.apply(y), sig_x0),
                bracket(g, sigma.matrix.apply(y), d.apply(x0)),
            )
        )
        columns.append(_coords_in(h, image))
    return Matrix(h.dim, h.dim, tuple(
        tuple(col[r] for col in columns) for r in range(h.dim)
    ))


def commutator_with_sigma(d: Matrix, sigma: Automorphism) -> Matrix:
    return d @ sigma.matrix - sigma.matrix @ d


def derived_in_kernel(g: LieAlgebra, d: Matrix, sigma: Automorphism) -> bool:
    comm = commutator_with_sigma(d, sigma)
    return all(
        all(a == 0 for a in comm.apply(v))
        for v in derived_subalgebra(g).basis
    )


@dataclass(frozen=True)
class IntersectionReport:
    dimension: int
    intersection: Subspace
    witness: tuple = None
    witness_in_centralizer: bool = None


def intersection_report(
    g: LieAlgebra, sigma: Automorphism, tau: Automorphism, witness=None
) -> IntersectionReport:
    """Dimension of Der_sigma meet Der_tau, plus the centralizer witness."""
    require_validated(sigma)
    require_validated(tau)
    first = derivation_space(g, sigma)
    second = derivation_space(g, tau)
    inter = subspace_intersect(first.subspace, second.subspace)
    witness_ok = None
    if witness is not None:
        witness = tuple(Fraction(a) if isinstance(a, int) else a for a in witness)
        moved = inverse(sigma.matrix).apply(tau.matrix.apply(witness))
        witness_ok = all(a == 0 for a in bracket(g, witness, moved))
    return IntersectionReport(inter.dim, inter, witness, witness_ok)


def _char_poly(m: Matrix):
    """Monic characteristic polynomial coefficients [1, c_{n-1}, ..., c_0]."""
    n = m.rows
    coeffs = [Fraction(1)]
    work = Matrix.zero(n, n)
    for k in range(1, n + 1):
        work = m @ work + Matrix.identity(n).scale(coeffs[-1])
        coeffs.append(-Fraction(1, k) * (m @ work).trace())
    return coeffs


def _rational_roots(coeffs):
    """All rational roots of the polynomial with the given coefficients."""
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    if not ints:
        return []
    roots = set()
    # Strip trailing zeros: they contribute the root 0.
    tail = list(ints)
    while tail[-1] == 0:
        roots.add(Fraction(0))
        tail.pop()
        if len(tail) == 1:
            break
    lead, const = tail[0], tail[-1]
    if const != 0:
        for p in _divisors(abs(const)):
            for q in _divisors(abs(lead)):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    value = Fraction(0)
                    for c in tail:
                        value = value * cand + c
                    if value == 0:
                        roots.add(cand)
    return sorted(roots)


def _divisors(value: int):
    out = []
    d = 1
    while d * d <= value:
        if value % d == 0:
            out.append(d)
            if d != value // d:
                out.append(value // d)
        d += 1
    return sorted(out)


@dataclass(frozen=True)
class PeriodicReport:
    nonabelian: bool
    in_der_sigma: bool
    order: int
    rational_fixed_eigenvector: bool
    verdict: str
    caveat: str = "eigenvector search is over rational eigenvalues only"


def periodic_check(
    g: LieAlgebra, d: Matrix, sigma: Automorphism, max_m: int
) -> PeriodicReport:
    """Verify the divisibility-by-6 conclusion for periodic twisted derivations."""
    if is_abelian(g):
        raise AbelianAlgebra("the periodicity statement needs a nonabelian algebra")
    require_validated(sigma)
    _check_shape(g, d)
    in_space = is_derivation_pair(
        g, d, sigma, Automorphism.identity(g)
    )
    order = matrix_order(d, max_m)
    if order is None:
        if d.power(g.dim).is_zero():
            return PeriodicReport(True, in_space, None, False, "hypothesis not met")
        return PeriodicReport(
            True, in_space, None, False, "order not found within bound"
        )
    fixed = kernel_basis(sigma.matrix - Matrix.identity(g.dim))
    found = False
    for root in _rational_roots(_char_poly(d)):
        eigenspace = kernel_basis(d - Matrix.identity(g.dim).scale(root))
        if subspace_intersect(eigenspace, fixed).dim > 0:
            found = True
            break
    if not (in_space and found):
        return PeriodicReport(True, in_space, order, found, "hypothesis not met")
    verdict = (
        "divisible-by-6 confirmed" if order % 6 == 0
        else "divisibility violated"
    )
    return PeriodicReport(True, in_space, order, found, verdict)
