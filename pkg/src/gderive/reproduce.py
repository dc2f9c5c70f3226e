"""Rerunnable verification suite for the recorded case-study results.

Each row recomputes one recorded result from scratch and compares it
against the frozen expected outcome.  A row passes when the computation
reproduces the recorded verdict; rows whose source display disagrees
with the computed values carry status "discrepancy" and pass exactly
when the computed values, not the displayed ones, come out again.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Automorphism, builtin, is_automorphism, make_automorphism
from .derivations import (
    centroid,
    derivation_space,
    intersection_report,
    quasiderivation_witness,
    restrict,
    sigma_bracket,
    twist,
)
from .errors import GDeriveError, InputError
from .hilbert import (
    detect_period,
    graded_dims,
    rational_series,
    render_series,
    series_matches_window,
)
from .linalg import (
    Matrix,
    Subspace,
    exp_nilpotent,
    inverse,
    matrix_to_vec,
    rref,
    subspace_intersect,
)
from .sl2 import (
    Sl2Family,
    classify_derivation,
    derivation_matrix,
    family_sigma,
    fixed_param_dimension,
    known_components,
    verify_decomposition,
)

F = Fraction


@dataclass(frozen=True)
class Row:
    key: str
    title: str
    ok: bool
    status: str
    detail: str


def _sl2():
    return builtin("sl2")


def _sigma_b(value) -> Matrix:
    return family_sigma(Sl2Family.fixed("b", b=value))


def _sigma_c(value) -> Matrix:
    return family_sigma(Sl2Family.fixed("c", c=value))


def _span_of(matrices) -> Matrix:
    return Matrix.from_rows([matrix_to_vec(m) for m in matrices])


def _in_span(stack: Matrix, m: Matrix) -> bool:
    extended = Matrix.from_rows(list(stack.entries) + [matrix_to_vec(m)])
    return rref(stack)[2] == rref(extended)[2]


def _run_thm51():
    g = _sl2()
    space = derivation_space(g, Automorphism.identity(g))
    generators = [
        derivation_matrix(1, 0, 0),
        derivation_matrix(0, 1, 0),
        derivation_matrix(0, 0, 1),
    ]
    ok = space.dim == 3
    solved = _span_of(space.basis)
    displayed = _span_of(generators)
    ok = ok and all(_in_span(solved, m) for m in generators)
    ok = ok and all(_in_span(displayed, m) for m in space.basis)
    return ok, "confirmed", "dimension 3; parametric family spans both ways"


def _run_thm52():
    rng = random.Random(52)
    checked = 0
    for _ in range(200):
        a, b, c = (
            F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3)
        )
        got = classify_derivation(a, b, c)
        if not got.consistent:
            return False, "confirmed", f"dichotomy fails at {(a, b, c)}"
        pattern = tuple(got.ranks[n] for n in (1, 2, 3))
        if (a, b, c) == (0, 0, 0):
            expected = (0, 0, 0)
        elif got.nilpotent:
            expected = (2, 1, 0)
        else:
            expected = (2, 2, 2)
        if pattern != expected:
            return False, "confirmed", f"rank pattern fails at {(a, b, c)}"
        checked += 1
    return (
        True,
        "confirmed",
        f"{checked} sampled triples follow the dichotomy and rank pattern",
    )


def _run_thm53():
    g = _sl2()
    ok = True
    for v in (F(1), F(-2), F(3, 5)):
        upper = _sigma_b(v)
        lower = _sigma_c(v)
        ok = ok and upper == Matrix.from_rows(
            [[1, v, -v * v], [0, 1, -2 * v], [0, 0, 1]]
        )
        ok = ok and lower == Matrix.from_rows(
            [[1, 0, 0], [-2 * v, 1, 0], [-v * v, v, 1]]
        )
        ok = ok and is_automorphism(g, upper) and is_automorphism(g, lower)
    for a, b in ((F(2), F(1)), (F(1), F(3))):
        sig = family_sigma(Sl2Family.fixed("ab", a=a, b=b))
        ok = ok and sig == exp_nilpotent(derivation_matrix(a, b, a * a / (4 * b)))
        ok = ok and is_automorphism(g, sig)
    return (
        ok,
        "confirmed",
        "exponentials match the displayed matrices and validate as automorphisms",
    )


def _run_thm16():
    report = verify_decomposition(Sl2Family.symbolic("b"))
    second = report.components[1]
    ok = (
        report.all_verdicts_true
        and second.claimed_form_satisfies_residuals is True
    )
    return (
        ok,
        "confirmed",
        "both components certified prime; recorded parametric form verified",
    )


def _run_cor510():
    reports = [
        fixed_param_dimension(Sl2Family.symbolic("b"), {"b": F(v)})
        for v in (0, 1, -2)
    ]
    dims = tuple(r.dimension for r in reports)
    ok = dims == (3, 1, 1) and all(
        r.paper_claim == 4 and r.matches_claim is False for r in reports
    )
    return (
        ok,
        "discrepancy",
        "computed dimensions (3, 1, 1) for the three sampled values; "
        "recorded claim of 4 does not match",
    )


def _run_thm511():
    report = verify_decomposition(Sl2Family.symbolic("c"))
    second = report.components[1]
    ok = (
        report.all_verdicts_true
        and second.claimed_form_satisfies_residuals is False
    )
    return (
        ok,
        "discrepancy",
        "decomposition certified; recorded parametric form fails the "
        "defining identity, corrected form verified instead",
    )


def _run_thm512():
    report = verify_decomposition(Sl2Family.symbolic("ab"))
    first, second = report.components
    ok = (
        report.product_contained
        and first.certificate.certified
        and first.contains_residuals
        and first.form_satisfies_residuals
        and first.dimension == 4
        and first.claimed_dimension == 3
        and second.contains_residuals
        and second.form_satisfies_residuals
        and second.certificate.certified is False
        and second.dimension == 3
    )
    return (
        ok,
        "discrepancy",
        "containments and parametric form verified; scalar component has no "
        "triangular certificate; first component dimension 4 against "
        "recorded 3",
    )


def _run_ex42():
    heis = builtin("heisenberg")
    shear = make_automorphism(
        heis, Matrix.from_rows([[1, -1, 0], [0, 1, 0], [0, 0, 1]])
    )
    cent = centroid(heis)
    twisted = derivation_space(heis, shear)
    inter = subspace_intersect(cent.subspace, twisted.subspace)
    computed = (cent.dim, twisted.dim, inter.dim)
    ok = computed == (3, 4, 2)
    return (
        ok,
        "discrepancy",
        "computed (centroid, twisted space, intersection) dimensions "
        "(3, 4, 2); displayed values are (5, 5, 3)",
    )


def _run_ex46():
    g = builtin("example_4_6")
    space = derivation_space(g, Automorphism.identity(g))
    ok = space.dim == 4
    for m in space.basis:
        ok = ok and all(a == 0 for a in m.row(0))
        ok = ok and m[1, 2] == 0 and m[2, 1] == 0
    h = Subspace.span(3, [(0, 1, 0), (0, 0, 1)])
    restrictions = [restrict(m, h) for m in space.basis]
    expected = sorted(
        [
            ((0, 0), (0, 0)),
            ((0, 0), (0, 0)),
            ((1, 0), (0, 0)),
            ((0, 0), (0, 1)),
        ]
    )
    ok = ok and sorted(r.entries for r in restrictions) == expected
    plane = builtin("abelian(2)")
    ok = ok and all(
        quasiderivation_witness(plane, r) is not None for r in restrictions
    )
    return (
        ok,
        "confirmed",
        "dimension 4 lower-triangular family; diagonal restrictions carry "
        "quasiderivation witnesses",
    )


def _run_prop21():
    g = _sl2()
    rng = random.Random(21)

    def sample():
        v = F(rng.randint(-3, 3), rng.randint(1, 3))
        base = _sigma_b(v) if rng.random() < 0.5 else _sigma_c(v)
        if rng.random() < 0.5:
            w = F(rng.randint(-3, 3), rng.randint(1, 3))
            other = _sigma_c(w) if rng.random() < 0.5 else _sigma_b(w)
            return base @ other
        return base

    checked = 0
    while checked < 50:
        sigma = make_automorphism(g, sample())
        tau = make_automorphism(g, sample())
        left = derivation_space(g, sigma, tau)
        moved = make_automorphism(g, inverse(tau.matrix) @ sigma.matrix)
        right = derivation_space(g, moved)
        if left.dim != right.dim:
            return False, "confirmed", "twist changed a dimension"
        twisted = [twist(d, tau) for d in left.basis]
        target = _span_of(right.basis) if right.basis else None
        if twisted:
            stacked = _span_of(twisted)
            if rref(stacked)[2] != left.dim:
                return False, "confirmed", "twist collapsed a basis"
            if target is None or not all(_in_span(target, m) for m in twisted):
                return False, "confirmed", "twist left the target space"
        checked += 1
    return (
        True,
        "confirmed",
        "50 automorphism pairs: twisting is a dimension-preserving bijection",
    )


def _run_thm13():
    g = _sl2()
    sigma = make_automorphism(g, _sigma_b(F(1)))
    space = derivation_space(g, sigma, sigma)
    ok = space.dim == 3
    basis = space.basis
    for a in basis:
        for b in basis:
            for c in basis:
                jac = (
                    sigma_bracket(a, sigma_bracket(b, c, sigma), sigma)
                    + sigma_bracket(b, sigma_bracket(c, a, sigma), sigma)
                    + sigma_bracket(c, sigma_bracket(a, b, sigma), sigma)
                )
                ok = ok and jac.is_zero()
    inv = inverse(sigma.matrix)
    moved = [inv @ d for d in basis]
    untwisted = derivation_space(g, Automorphism.identity(g))
    target = _span_of(untwisted.basis)
    ok = ok and all(_in_span(target, m) for m in moved)
    ok = ok and rref(_span_of(moved))[2] == 3
    for a in basis:
        for b in basis:
            transported = inv @ sigma_bracket(a, b, sigma)
            plain = (inv @ a) @ (inv @ b) - (inv @ b) @ (inv @ a)
            ok = ok and transported == plain
    return (
        ok,
        "confirmed",
        "transported bracket satisfies Jacobi and carries onto the "
        "untwisted commutator",
    )


def _run_prop41():
    g = _sl2()
    cent = centroid(g)
    sigmas = [
        _sigma_b(F(1)),
        _sigma_b(F(-2)),
        _sigma_c(F(1)),
        _sigma_c(F(3, 5)),
        family_sigma(Sl2Family.fixed("ab", a=2, b=1)),
        family_sigma(Sl2Family.fixed("ab", a=1, b=3)),
    ]
    ok = True
    bound_used = False
    for matrix in sigmas:
        space = derivation_space(g, make_automorphism(g, matrix))
        inter = subspace_intersect(cent.subspace, space.subspace)
        ok = ok and inter.dim == 0
        for j in range(g.dim):
            images = Matrix.from_rows(
                [[m[r, j] for r in range(g.dim)] for m in space.basis]
            ) if space.basis else None
            if images is not None and rref(images)[2] == space.dim:
                bound_used = True
                ok = ok and space.dim <= g.dim
                break
    ok = ok and bound_used
    return (
        ok,
        "confirmed",
        "centroid meets each sampled twisted space trivially; evaluation "
        "rank bound applies",
    )


def _run_rem37():
    g = _sl2()
    identity = Automorphism.identity(g)
    tau = make_automorphism(g, _sigma_b(F(1)))
    report = intersection_report(
        g, identity, tau, witness=(F(1), F(0), F(0))
    )
    ok = report.dimension == 0 and report.witness_in_centralizer is True
    return (
        ok,
        "confirmed",
        "trivial intersection while the moved witness stays in the "
        "centralizer",
    )


def _run_thm14():
    g = _sl2()
    sigma = make_automorphism(g, _sigma_b(F(1)))
    gd = graded_dims(g, sigma, window=6)
    ok = gd.finite_order is None
    ok = ok and gd.dims == {
        k: (3 if k == 0 else 1) for k in range(-6, 7)
    }
    found = detect_period(gd)
    ok = ok and found == (1, 1)
    series = rational_series(gd, cutoff=1, period=1)
    ok = ok and series_matches_window(gd, series)
    ok = ok and render_series(series) == "3 + t/(1-t) + t^-1/(1-t^-1)"
    flip = make_automorphism(
        g, Matrix.from_rows([[-1, 0, 0], [0, 1, 0], [0, 0, -1]])
    )
    flipped = graded_dims(g, flip, window=6)
    ok = ok and flipped.finite_order == 2
    finite = rational_series(flipped)
    ok = ok and finite.polynomial_part == ((0, 3), (1, 1))
    ok = ok and render_series(finite) == "3 + t"
    return (
        ok,
        "confirmed",
        "window dims (..., 1, 1, 3, 1, 1, ...) with period 1 closed form; "
        "order-2 twist gives the degree-1 polynomial",
    )


_RUNNERS = {
    "thm5.1": ("untwisted derivation family", _run_thm51),
    "thm5.2": ("nilpotency dichotomy", _run_thm52),
    "thm5.3": ("exponential automorphism families", _run_thm53),
    "thm1.6": ("one-parameter upper decomposition", _run_thm16),
    "cor5.10": ("fixed-parameter dimensions", _run_cor510),
    "thm5.11": ("one-parameter lower decomposition", _run_thm511),
    "thm5.12": ("two-parameter decomposition", _run_thm512),
    "ex4.2": ("nilpotent example intersection", _run_ex42),
    "ex4.6": ("solvable example restrictions", _run_ex46),
    "prop2.1": ("twist bijection", _run_prop21),
    "thm1.3": ("transported bracket", _run_thm13),
    "prop4.1": ("trivial centroid intersections", _run_prop41),
    "rem3.7": ("centralizer counterexample", _run_rem37),
    "thm1.4": ("graded dimension window", _run_thm14),
}


def run(keys=None):
    """Execute the suite (or a key subset) and return rows sorted by key."""
    if keys is None:
        selected = sorted(_RUNNERS)
    else:
        selected = []
        for key in keys:
            if key not in _RUNNERS:
                known = ", ".join(sorted(_RUNNERS))
                raise InputError(f"unknown row key {key!r}; known keys: {known}")
            if key not in selected:
                selected.append(key)
        selected.sort()
    rows = []
    for key in selected:
        title, runner = _RUNNERS[key]
        try:
            ok, status, detail = runner()
        except GDeriveError as exc:
            ok, status, detail = False, "error", f"aborted: {exc}"
        rows.append(Row(key, title, ok, status, detail))
    return rows
