from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gderive.errors import (
    DegreeGuardExceeded,
    DimensionMismatch,
    InputError,
    UnknownVariable,
)
from gderive.linalg import Matrix, kernel_basis
from gderive.polynomials import (
    Ideal,
    MultiPoly,
    contains,
    divide,
    groebner,
    ideal_from_json_dict,
    ideal_product,
    ideal_to_json_dict,
    linear_coefficient_matrix,
    member,
    poly_from_string,
    poly_to_string,
    remainder,
    substitute_ideal,
    triangular_prime_check,
)

# The ten-variable ring of the twisted-derivation ideal study, in its
# declared lex order.
RING = ("x11", "x12", "x13", "x21", "x22", "x23", "x31", "x32", "x33", "y")

# The sixteen displayed relations defining the family-b derivation ideal.
SIXTEEN = [
    "2*x21*y - x22*y^2 + 2*x31",
    "x12 + 2*x13*y + 2*x23",
    "2*x21 + 2*x23*y^2 + x32",
    "x13",
    "2*x21 + x32",
    "x12*y - x22",
    "x12 + 2*x23",
    "2*x11*y - x12*y^2 - 2*x21 - x32",
    "-x11 + x22 - x33",
    "x12 + 2*x23",
    "x12 - 2*x13*y + 2*x23",
    "x11 + x13*y^2 - x22 + x33",
    "x22 + 2*x23*y",
    "x22",
    "-2*x31 + x32*y",
    "2*x21 + x32 + 2*x33*y",
]

# J's expected reduced basis: the simplified relation set.
SIMPLIFIED = [
    "x11 + x33",
    "x12 + 2*x23",
    "x13",
    "x21 + 1/2*x32",
    "x22",
    "x23*y",
    "x31 - 1/2*x32*y",
    "x33*y",
]

P1_GENS = ["y", "x13", "x22", "x31", "x11 + x33", "x12 + 2*x23", "x21 + 1/2*x32"]
P2_GENS = [
    "x11", "x12", "x13", "x22", "x23", "x33",
    "x21 + 1/2*x32", "x31 - 1/2*x32*y",
]


def ring_poly(text):
    return poly_from_string(RING, text)


def ring_ideal(texts):
    return Ideal.make(RING, [ring_poly(t) for t in texts])


def xy_poly(text):
    return poly_from_string(("x", "y"), text)


J = ring_ideal(SIXTEEN)
P1 = ring_ideal(P1_GENS)
P2 = ring_ideal(P2_GENS)


class TestParsePrint:
    def test_round_trip(self):
        for text in SIXTEEN + SIMPLIFIED:
            p = ring_poly(text)
            assert ring_poly(poly_to_string(p)) == p

    def test_glued_minus(self):
        assert xy_poly("x^2-y") == xy_poly("x^2 - y")

    def test_constant(self):
        p = xy_poly("-3/2")
        assert p.terms == (((0, 0), Fraction(-3, 2)),)
        assert poly_to_string(p) == "-3/2"

    def test_repeated_variable_factors_multiply(self):
        assert xy_poly("x*x*y") == xy_poly("x^2*y")

    @pytest.mark.parametrize(
        "bad", ["(x)", "x y", "x**2", "x^-1", "x^1/2", "", "x +", "2*3", "x*"]
    )
    def test_rejects_bad_syntax(self, bad):
        with pytest.raises(InputError):
            xy_poly(bad)

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable):
            xy_poly("x + z")


class TestArithmetic:
    def test_binomial_square(self):
        x_plus_y = xy_poly("x + y")
        assert x_plus_y * x_plus_y == xy_poly("x^2 + 2*x*y + y^2")

    def test_lex_leading_term(self):
        p = xy_poly("x + y^5")
        assert p.leading_term() == ((1, 0), Fraction(1))

    def test_substitute_examples(self):
        f4 = ring_poly("x23*y")
        assert f4.substitute({"y": 1}) == poly_from_string(RING[:-1], "x23")
        f6 = ring_poly("x33*y")
        assert f6.substitute({"y": 0}).is_zero

    def test_substitute_unknown(self):
        with pytest.raises(UnknownVariable):
            xy_poly("x").substitute({"q": 1})

    def test_poly_substitution_ring_map(self):
        p = xy_poly("x^2 + y")
        target = ("a", "b")
        image = p.substitute_polys(
            target,
            {
                "x": poly_from_string(target, "a + b"),
                "y": poly_from_string(target, "-a^2"),
            },
        )
        assert image == poly_from_string(target, "2*a*b + b^2")


class TestDivision:
    def test_exact_quotient(self):
        qs, r = divide(xy_poly("x^2"), [xy_poly("x")])
        assert qs[0] == xy_poly("x") and r.is_zero

    def test_remainder_keeps_foreign_terms(self):
        _, r = divide(xy_poly("x^2 + y"), [xy_poly("x")])
        assert r == xy_poly("y")

    def test_multiple_of_member_reduces_to_zero(self):
        basis = list(groebner(J))
        _, r = divide(ring_poly("x22*y"), basis)
        assert r.is_zero

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 2), st.integers(0, 2),
                st.fractions(min_value=-3, max_value=3, max_denominator=3),
            ),
            min_size=1, max_size=4,
        ),
        st.lists(
            st.tuples(
                st.integers(0, 2), st.integers(0, 2),
                st.fractions(min_value=-3, max_value=3, max_denominator=3),
            ),
            min_size=1, max_size=3,
        ),
    )
    @settings(max_examples=50, deadline=None)
    def test_division_certificate(self, p_terms, g_terms):
        variables = ("x", "y")
        p = MultiPoly.from_dict(
            variables, {(a, b): c for a, b, c in p_terms}
        )
        g = MultiPoly.from_dict(
            variables, {(a, b): c for a, b, c in g_terms}
        )
        assume(not g.is_zero)
        qs, r = divide(p, [g])
        assert qs[0] * g + r == p
        lead = g.leading_term()[0]
        for exps, _ in r.terms:
            assert not all(a <= b for a, b in zip(lead, exps))


class TestBuchberger:
    def test_already_reduced(self):
        basis = groebner(Ideal.make(("x", "y"), [xy_poly("x - y"), xy_poly("y^2")]))
        assert list(basis) == [xy_poly("x - y"), xy_poly("y^2")]

    def test_generates_y_cubed(self):
        basis = groebner(Ideal.make(("x", "y"), [xy_poly("x^2"), xy_poly("x*y + y^2")]))
        assert list(basis) == [xy_poly("x^2"), xy_poly("x*y + y^2"), xy_poly("y^3")]

    def test_sixteen_relations_reduce_to_simplified_eight(self):
        assert list(groebner(J)) == [ring_poly(t) for t in SIMPLIFIED]

    def test_spolys_of_reduced_basis_vanish(self):
        basis = list(groebner(J))
        from gderive.polynomials import _spoly

        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                assert remainder(_spoly(basis[i], basis[j]), basis).is_zero

    def test_guard_trips(self):
        with pytest.raises(DegreeGuardExceeded):
            groebner(
                Ideal.make(("x", "y"), [xy_poly("x^2"), xy_poly("x*y + y^2")]),
                guard=0,
            )

    @given(
        st.lists(
            st.lists(
                st.tuples(
                    st.integers(0, 2), st.integers(0, 2), st.integers(0, 1),
                    st.fractions(min_value=-2, max_value=2, max_denominator=2),
                ),
                min_size=1, max_size=3,
            ),
            min_size=1, max_size=3,
        )
    )
    @settings(max_examples=25, deadline=None)
    def test_random_ideal_spolys_vanish(self, gen_terms):
        variables = ("x", "y", "z")
        gens = [
            MultiPoly.from_dict(
                variables, {(a, b, c): q for a, b, c, q in terms}
            )
            for terms in gen_terms
        ]
        gens = [g for g in gens if not g.is_zero]
        assume(gens)
        ideal = Ideal.make(variables, gens)
        try:
            basis = list(groebner(ideal, guard=200))
        except DegreeGuardExceeded:
            assume(False)
        from gderive.polynomials import _spoly

        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                assert remainder(_spoly(basis[i], basis[j]), basis).is_zero
        for g in gens:
            assert remainder(g, basis).is_zero


class TestMembership:
    def test_zero_in_everything(self):
        assert member(MultiPoly.zero(RING), J)

    def test_x22_is_a_member(self):
        assert member(ring_poly("x22"), J)

    def test_x32_is_not(self):
        assert not member(ring_poly("x32"), J)

    def test_order_independence(self):
        forward = ("x", "y", "z")
        backward = ("z", "y", "x")
        gens = ["x + y", "y*z - z^2"]
        samples = ["x + y", "x*z + y*z", "x", "z", "x^2 - y^2", "y*z - z^2"]
        ideal_f = Ideal.make(forward, [poly_from_string(forward, g) for g in gens])
        ideal_b = Ideal.make(backward, [poly_from_string(backward, g) for g in gens])
        for s in samples:
            assert member(poly_from_string(forward, s), ideal_f) == member(
                poly_from_string(backward, s), ideal_b
            )


class TestIdealOps:
    def test_product_with_unit(self):
        unit = Ideal.make(RING, [MultiPoly.const(RING, 1)])
        prod = ideal_product(J, unit)
        assert contains(J, prod) and contains(prod, J)

    def test_product_contained_in_factors(self):
        prod = ideal_product(P1, P2)
        assert contains(P1, prod)
        assert contains(P2, prod)

    def test_family_b_decomposition_containments(self):
        assert contains(P1, J)
        assert contains(P2, J)
        assert contains(J, ideal_product(P1, P2))

    def test_ring_mismatch(self):
        other = Ideal.make(("x", "y"), [xy_poly("x")])
        with pytest.raises(DimensionMismatch):
            ideal_product(J, other)


class TestPrimeCheck:
    def test_p1_certified(self):
        cert = triangular_prime_check(P1)
        assert cert.certified
        assert cert.free_vars == ("x23", "x32", "x33")

    def test_p2_certified(self):
        cert = triangular_prime_check(P2)
        assert cert.certified
        assert cert.free_vars == ("x32", "y")

    def test_square_not_certified(self):
        cert = triangular_prime_check(Ideal.make(("x",), [poly_from_string(("x",), "x^2")]))
        assert not cert.certified

    def test_unit_not_certified(self):
        cert = triangular_prime_check(Ideal.make(("x",), [poly_from_string(("x",), "1")]))
        assert not cert.certified


class TestSubstitution:
    def test_linearized_ideal_solution_dim(self):
        fixed = substitute_ideal(J, {"y": 1})
        matrix = linear_coefficient_matrix(fixed.generators, fixed.variables)
        assert kernel_basis(matrix).dim == 1

    def test_substitute_ideal_unknown(self):
        with pytest.raises(UnknownVariable):
            substitute_ideal(J, {"q": 1})


class TestJson:
    def test_round_trip(self):
        data = ideal_to_json_dict(P1)
        assert data["vars"] == list(RING)
        loaded = ideal_from_json_dict(data)
        assert loaded == P1

    def test_rejects_duplicate_vars(self):
        with pytest.raises(InputError):
            ideal_from_json_dict({"vars": ["x", "x"], "gens": ["x"]})

    def test_rejects_missing_keys(self):
        with pytest.raises(InputError):
            ideal_from_json_dict({"vars": ["x"]})
