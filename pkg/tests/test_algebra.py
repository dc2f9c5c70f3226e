from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gderive.algebra import (
    Automorphism,
    LieAlgebra,
    ad,
    algebra_from_json_dict,
    algebra_to_json_dict,
    bracket,
    builtin,
    center,
    centralizer,
    derived_subalgebra,
    is_abelian,
    is_automorphism,
    is_perfect,
    make_automorphism,
    validate_lie,
)
from gderive.errors import InputError, UnknownName, UnvalidatedAutomorphism
from gderive.linalg import Matrix, Subspace, exp_nilpotent

SL2 = builtin("sl2")
HEISENBERG = builtin("heisenberg")
EX46 = builtin("example_4_6")

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)

vectors3 = st.lists(
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    min_size=3,
    max_size=3,
).map(tuple)


def unipotent_upper(b):
    return exp_nilpotent(Matrix.from_rows([[0, b, 0], [0, 0, -2 * b], [0, 0, 0]]))


class TestValidation:
    def test_simple_algebra_satisfies_jacobi(self):
        assert validate_lie(SL2).ok and SL2.lie_validated

    def test_abelian_satisfies_jacobi(self):
        assert validate_lie(builtin("abelian(3)")).ok

    def test_tampered_relations_are_caught(self):
        bad = LieAlgebra("bad", 3, {
            (0, 1): (Fraction(-1), Fraction(0), Fraction(0)),
            (0, 2): (Fraction(2), Fraction(0), Fraction(0)),
            (1, 2): (Fraction(0), Fraction(0), Fraction(-1)),
        })
        report = validate_lie(bad)
        assert not report.ok
        assert report.violations[0][:3] == (1, 2, 3)


class TestBracket:
    def test_defining_relations(self):
        assert bracket(SL2, E1, E2) == (-1, 0, 0)
        assert bracket(SL2, E1, E3) == (0, 2, 0)
        assert bracket(SL2, E2, E3) == (0, 0, -1)

    def test_stored_pairs_are_antisymmetric(self):
        basis = Matrix.identity(3).entries
        for (i, j) in SL2.structure:
            forward = bracket(SL2, basis[i], basis[j])
            backward = bracket(SL2, basis[j], basis[i])
            assert backward == tuple(-a for a in forward)

    @given(vectors3)
    @settings(max_examples=40, deadline=None)
    def test_alternating(self, x):
        assert bracket(SL2, x, x) == (0, 0, 0)

    @given(vectors3, vectors3, vectors3)
    @settings(max_examples=40, deadline=None)
    def test_jacobi_extends_bilinearly(self, x, y, z):
        total = tuple(
            a + b + c
            for a, b, c in zip(
                bracket(SL2, bracket(SL2, x, y), z),
                bracket(SL2, bracket(SL2, y, z), x),
                bracket(SL2, bracket(SL2, z, x), y),
            )
        )
        assert total == (0, 0, 0)


class TestAdjoint:
    def test_ad_e1(self):
        assert ad(SL2, E1) == Matrix.from_rows([[0, -1, 0], [0, 0, 2], [0, 0, 0]])

    def test_ad_on_abelian_vanishes(self):
        assert ad(builtin("abelian(3)"), E1).is_zero()

    def test_ad_of_scaled_e1_is_the_upper_nilpotent(self):
        assert ad(SL2, (-1, 0, 0)) == Matrix.from_rows(
            [[0, 1, 0], [0, 0, -2], [0, 0, 0]]
        )

    @given(vectors3, vectors3, vectors3)
    @settings(max_examples=40, deadline=None)
    def test_ad_is_a_derivation(self, x, y, z):
        lhs = ad(SL2, x).apply(bracket(SL2, y, z))
        rhs = tuple(
            a + b
            for a, b in zip(
                bracket(SL2, ad(SL2, x).apply(y), z),
                bracket(SL2, y, ad(SL2, x).apply(z)),
            )
        )
        assert lhs == rhs


class TestStructureSpaces:
    def test_simple_algebra_is_centerless(self):
        assert center(SL2) == Subspace.zero(3)

    def test_heisenberg_center(self):
        assert center(HEISENBERG) == Subspace.span(3, [E3])

    def test_centralizer(self):
        assert centralizer(HEISENBERG, E1) == Subspace.span(3, [E1, E3])

    def test_derived_subalgebras(self):
        assert derived_subalgebra(EX46) == Subspace.span(3, [E2, E3])
        assert is_perfect(SL2)
        assert not is_perfect(HEISENBERG)

    def test_abelian_flags(self):
        assert is_abelian(builtin("abelian(4)"))
        assert not is_abelian(SL2)


class TestAutomorphisms:
    def test_identity(self):
        assert is_automorphism(SL2, Matrix.identity(3))

    def test_unipotent_family(self):
        assert is_automorphism(SL2, unipotent_upper(1))

    def test_diagonal_rescaling_fails(self):
        assert not is_automorphism(SL2, Matrix.from_rows(
            [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
        ))

    def test_singular_map_fails(self):
        assert not is_automorphism(SL2, Matrix.zero(3, 3))

    def test_make_automorphism_validates(self):
        sigma = make_automorphism(SL2, unipotent_upper(1))
        assert sigma.validated
        with pytest.raises(UnvalidatedAutomorphism):
            make_automorphism(SL2, Matrix.from_rows(
                [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
            ))

    def test_inverse_and_powers(self):
        sigma = make_automorphism(SL2, unipotent_upper(1))
        assert sigma.inverse().matrix == unipotent_upper(-1)
        assert sigma.power(3).matrix == unipotent_upper(3)
        assert sigma.power(-2).matrix == unipotent_upper(-2)
        assert sigma.power(0).matrix == Matrix.identity(3)

    @given(
        st.fractions(min_value=-3, max_value=3, max_denominator=3),
        st.fractions(min_value=-3, max_value=3, max_denominator=3),
    )
    @settings(max_examples=30, deadline=None)
    def test_closed_under_product_and_inverse(self, a, b):
        m1, m2 = unipotent_upper(a), unipotent_upper(b)
        assert is_automorphism(SL2, m1 @ m2)
        assert is_automorphism(SL2, make_automorphism(SL2, m1).inverse().matrix)


class TestBuiltins:
    def test_catalog(self):
        assert SL2.dim == 3 and len(SL2.structure) == 3
        assert HEISENBERG.dim == 3 and len(HEISENBERG.structure) == 1
        assert builtin("abelian(4)").dim == 4

    def test_unknown(self):
        with pytest.raises(UnknownName):
            builtin("su3")


class TestJson:
    def test_round_trip(self):
        data = algebra_to_json_dict(SL2)
        assert data == {
            "name": "sl2",
            "dim": 3,
            "brackets": [
                {"left": 1, "right": 2, "result": [["-1", 1]]},
                {"left": 1, "right": 3, "result": [["2", 2]]},
                {"left": 2, "right": 3, "result": [["-1", 3]]},
            ],
        }
        loaded = algebra_from_json_dict(data)
        assert loaded.structure == SL2.structure

    def test_rejects_bad_pair_order(self):
        with pytest.raises(InputError):
            algebra_from_json_dict({
                "name": "x",
                "dim": 2,
                "brackets": [{"left": 2, "right": 1, "result": [["1", 1]]}],
            })

    def test_rejects_out_of_range_component(self):
        with pytest.raises(InputError):
            algebra_from_json_dict({
                "name": "x",
                "dim": 2,
                "brackets": [{"left": 1, "right": 2, "result": [["1", 3]]}],
            })

    def test_rejects_missing_keys(self):
        with pytest.raises(InputError):
            algebra_from_json_dict({"name": "x"})
