"""Multivariate polynomials over Q with lex order, and polynomial ideals.

The monomial order is lexicographic in the declared variable order, which
is an explicit part of every polynomial's identity. Ideal calculations go
through Buchberger completion to the unique reduced basis; primality is
certified only through the triangular-linear criterion (leading variables
minus free variables), never decided in general.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from gderive.errors import (
    DegreeGuardExceeded,
    DimensionMismatch,
    InputError,
    UnknownVariable,
)
from gderive.linalg import Matrix, format_rational, parse_rational

DEFAULT_GUARD = 5000


def _normalize_terms(terms: dict) -> tuple:
    return tuple(sorted(
        ((e, c) for e, c in terms.items() if c != 0), reverse=True
    ))


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial as a map exponent-vector -> coefficient, sorted descending."""

    variables: tuple
    terms: tuple

    @staticmethod
    def from_dict(variables, terms: dict) -> "MultiPoly":
        variables = tuple(variables)
        for exps in terms:
            if len(exps) != len(variables):
                raise DimensionMismatch("exponent vector length differs")
        return MultiPoly(variables, _normalize_terms(terms))

    @staticmethod
    def zero(variables) -> "MultiPoly":
        return MultiPoly(tuple(variables), ())

    @staticmethod
    def const(variables, value) -> "MultiPoly":
        variables = tuple(variables)
        value = Fraction(value)
        if value == 0:
            return MultiPoly(variables, ())
        zero_exp = tuple(0 for _ in variables)
        return MultiPoly(variables, ((zero_exp, value),))

    @staticmethod
    def var(variables, name, power: int = 1) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(f"variable {name!r} not in ring")
        exps = tuple(power if v == name else 0 for v in variables)
        return MultiPoly(variables, ((exps, Fraction(1)),))

    def _check_ring(self, other: "MultiPoly"):
        if self.variables != other.variables:
            raise DimensionMismatch("polynomials live in different rings")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def leading_term(self):
        """(exponent vector, coefficient) of the lex-largest term."""
        if not self.terms:
            return None
        return self.terms[0]

    def coefficient(self, exps) -> Fraction:
        for e, c in self.terms:
            if e == exps:
                return c
        return Fraction(0)

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms:
            terms[e] = terms.get(e, Fraction(0)) + c
        return MultiPoly(self.variables, _normalize_terms(terms))

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.variables, tuple((e, -c) for e, c in self.terms))

    def scale(self, value) -> "MultiPoly":
        value = Fraction(value)
        if value == 0:
            return MultiPoly.zero(self.variables)
        return MultiPoly(self.variables, tuple(
            (e, value * c) for e, c in self.terms
        ))

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_ring(other)
        terms = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, Fraction(0)) + c1 * c2
        return MultiPoly(self.variables, _normalize_terms(terms))

    def __pow__(self, k: int) -> "MultiPoly":
        result = MultiPoly.const(self.variables, 1)
        for _ in range(k):
            result = result * self
        return result

    def monic(self) -> "MultiPoly":
        if self.is_zero:
            return self
        return self.scale(Fraction(1) / self.terms[0][1])

    def substitute(self, assignments: dict) -> "MultiPoly":
        """Partial evaluation at rational values; assigned variables drop out."""
        for name in assignments:
            if name not in self.variables:
                raise UnknownVariable(f"variable {name!r} not in ring")
        keep = [i for i, v in enumerate(self.variables) if v not in assignments]
        values = {
            i: Fraction(assignments[v])
            for i, v in enumerate(self.variables)
            if v in assignments
        }
        new_vars = tuple(self.variables[i] for i in keep)
        terms = {}
        for exps, coeff in self.terms:
            for i, value in values.items():
                coeff = coeff * value ** exps[i]
            if coeff == 0:
                continue
            new_exps = tuple(exps[i] for i in keep)
            terms[new_exps] = terms.get(new_exps, Fraction(0)) + coeff
        return MultiPoly(new_vars, _normalize_terms(terms))

    def substitute_polys(self, target_variables, mapping: dict) -> "MultiPoly":
        """Ring map: each variable goes to a polynomial over the target ring."""
        target_variables = tuple(target_variables)
        images = []
        for name in self.variables:
            if name in mapping:
                image = mapping[name]
                if image.variables != target_variables:
                    raise DimensionMismatch("image lives in the wrong ring")
            else:
                image = MultiPoly.var(target_variables, name)
            images.append(image)
        result = MultiPoly.zero(target_variables)
        for exps, coeff in self.terms:
            term = MultiPoly.const(target_variables, coeff)
            for image, e in zip(images, exps):
                if e:
                    term = term * image ** e
            result = result + term
        return result

    def __str__(self) -> str:
        return poly_to_string(self)

    def __repr__(self) -> str:
        return f"MultiPoly({poly_to_string(self)!r})"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<rat>-?[0-9]+(?:/[0-9]+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*^]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            raise InputError(f"bad polynomial syntax at {text[pos:]!r}")
        if match.group("rat") is not None:
            tokens.append(("rat", match.group("rat")))
        elif match.group("name") is not None:
            tokens.append(("name", match.group("name")))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    return tokens


def poly_from_string(variables, text: str) -> MultiPoly:
    """Parse a sum of monomials: rational coefficients, '*', '^', no parens."""
    variables = tuple(variables)
    index = {v: i for i, v in enumerate(variables)}
    tokens = _tokenize(text)
    if not tokens:
        raise InputError("empty polynomial string")
    terms = {}
    pos = 0

    def parse_term(sign: Fraction, pos: int):
        coeff = sign
        exps = [0] * len(variables)
        expect_factor = True
        saw_factor = False
        while pos < len(tokens):
            kind, value = tokens[pos]
            if expect_factor:
                if kind == "rat":
                    if saw_factor:
                        raise InputError("coefficient must lead its term")
                    coeff *= parse_rational(value)
                    saw_factor = True
                    pos += 1
                elif kind == "name":
                    if value not in index:
                        raise UnknownVariable(f"variable {value!r} not in ring")
                    power = 1
                    pos += 1
                    if pos + 1 < len(tokens) and tokens[pos] == ("op", "^"):
                        kind2, value2 = tokens[pos + 1]
                        if kind2 != "rat" or "/" in value2 or value2.startswith("-"):
                            raise InputError("exponent must be a nonnegative integer")
                        power = int(value2)
                        pos += 2
                    exps[index[value]] += power
                    saw_factor = True
                else:
                    raise InputError(f"unexpected {value!r} in polynomial")
                expect_factor = False
            else:
                if kind == "op" and value == "*":
                    expect_factor = True
                    pos += 1
                else:
                    break
        if not saw_factor:
            raise InputError("empty term in polynomial")
        if expect_factor:
            raise InputError("dangling '*' in polynomial")
        return coeff, tuple(exps), pos

    sign = Fraction(1)
    if tokens[0] == ("op", "-"):
        sign = Fraction(-1)
        pos = 1
    elif tokens[0] == ("op", "+"):
        pos = 1
    while True:
        coeff, exps, pos = parse_term(sign, pos)
        terms[exps] = terms.get(exps, Fraction(0)) + coeff
        if pos == len(tokens):
            break
        kind, value = tokens[pos]
        if kind == "rat" and value.startswith("-"):
            # A literal like "-3" straight after a term acts as "- 3".
            sign = Fraction(-1)
            tokens[pos] = ("rat", value[1:])
        elif kind == "op" and value in "+-":
            sign = Fraction(1) if value == "+" else Fraction(-1)
            pos += 1
        else:
            raise InputError(f"expected + or - between terms, got {value!r}")
    return MultiPoly(variables, _normalize_terms(terms))


def poly_to_string(p: MultiPoly) -> str:
    if p.is_zero:
        return "0"
    pieces = []
    for exps, coeff in p.terms:
        factors = []
        for name, e in zip(p.variables, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = format_rational(abs(coeff))
        elif abs(coeff) == 1:
            body = "*".join(factors)
        else:
            body = "*".join([format_rational(abs(coeff))] + factors)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


def _divides(e1, e2) -> bool:
    return all(a <= b for a, b in zip(e1, e2))


def _exp_sub(e1, e2):
    return tuple(a - b for a, b in zip(e1, e2))


def _exp_lcm(e1, e2):
    return tuple(max(a, b) for a, b in zip(e1, e2))


def divide(p: MultiPoly, divisors) -> tuple:
    """Multivariate division: p = sum(q_i * g_i) + r.

    No term of r is divisible by any divisor's leading term; the first
    divisor whose leading term divides is always chosen, so the result is
    deterministic for a fixed divisor list.
    """
    divisors = list(divisors)
    leads = []
    for g in divisors:
        p._check_ring(g)
        if g.is_zero:
            raise DimensionMismatch("zero divisor in division")
        leads.append(g.leading_term())
    quotients = [dict() for _ in divisors]
    remainder = {}
    work = dict(p.terms)
    while work:
        exps = max(work)
        coeff = work.pop(exps)
        if coeff == 0:
            continue
        for i, (lead_exps, lead_coeff) in enumerate(leads):
            if _divides(lead_exps, exps):
                factor_exps = _exp_sub(exps, lead_exps)
                factor_coeff = coeff / lead_coeff
                quotients[i][factor_exps] = quotients[i].get(
                    factor_exps, Fraction(0)
                ) + factor_coeff
                for g_exps, g_coeff in divisors[i].terms[1:]:
                    t = tuple(a + b for a, b in zip(factor_exps, g_exps))
                    work[t] = work.get(t, Fraction(0)) - factor_coeff * g_coeff
                    if work[t] == 0:
                        del work[t]
                break
        else:
            remainder[exps] = remainder.get(exps, Fraction(0)) + coeff
    qs = [MultiPoly(p.variables, _normalize_terms(q)) for q in quotients]
    r = MultiPoly(p.variables, _normalize_terms(remainder))
    return qs, r


def remainder(p: MultiPoly, divisors) -> MultiPoly:
    return divide(p, divisors)[1]


@dataclass(frozen=True)
class Ideal:
    variables: tuple
    generators: tuple

    @staticmethod
    def make(variables, generators) -> "Ideal":
        variables = tuple(variables)
        gens = []
        for g in generators:
            if g.variables != variables:
                raise DimensionMismatch("generator lives in the wrong ring")
            if not g.is_zero and g not in gens:
                gens.append(g)
        return Ideal(variables, tuple(gens))


_groebner_cache: dict = {}


def _spoly(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    ef, cf = f.leading_term()
    eg, cg = g.leading_term()
    l = _exp_lcm(ef, eg)
    mf = MultiPoly(f.variables, ((_exp_sub(l, ef), Fraction(1) / cf),))
    mg = MultiPoly(g.variables, ((_exp_sub(l, eg), Fraction(1) / cg),))
    return mf * f - mg * g


def groebner(ideal: Ideal, guard: int = DEFAULT_GUARD) -> tuple:
    """Reduced lex Groebner basis (monic, interreduced, sorted descending).

    Buchberger completion with normal pair selection (smallest lcm first)
    and the coprime-leading-term criterion; raises DegreeGuardExceeded when
    more than `guard` intermediate polynomials are generated.
    """
    key = (ideal, guard)
    if key in _groebner_cache:
        return _groebner_cache[key]
    basis = [g.monic() for g in ideal.generators if not g.is_zero]
    if not basis:
        result = ()
        _groebner_cache[key] = result
        return result
    pairs = {
        (i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))
    }
    generated = 0
    while pairs:
        best = min(
            pairs,
            key=lambda ij: (
                _exp_lcm(basis[ij[0]].terms[0][0], basis[ij[1]].terms[0][0]),
                ij,
            ),
        )
        pairs.remove(best)
        f, g = basis[best[0]], basis[best[1]]
        ef, eg = f.terms[0][0], g.terms[0][0]
        if all(a == 0 or b == 0 for a, b in zip(ef, eg)):
            continue  # coprime leading terms: S-polynomial reduces to zero
        s = remainder(_spoly(f, g), basis)
        if s.is_zero:
            continue
        generated += 1
        if generated > guard:
            raise DegreeGuardExceeded(
                f"basis completion exceeded {guard} generated polynomials"
            )
        basis.append(s.monic())
        new_index = len(basis) - 1
        pairs.update((i, new_index) for i in range(new_index))
    # Minimalize: drop elements whose leading term another one divides.
    keep = []
    for i, f in enumerate(basis):
        lead = f.terms[0][0]
        redundant = any(
            j != i and _divides(basis[j].terms[0][0], lead)
            and (basis[j].terms[0][0] != lead or j < i)
            for j in range(len(basis))
        )
        if not redundant:
            keep.append(f)
    # Interreduce tails against the other survivors.
    reduced = []
    for i, f in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        reduced.append(remainder(f, others).monic() if others else f.monic())
    result = tuple(sorted(reduced, key=lambda f: f.terms[0][0], reverse=True))
    _groebner_cache[key] = result
    return result


def member(p: MultiPoly, ideal: Ideal, guard: int = DEFAULT_GUARD) -> bool:
    basis = groebner(ideal, guard)
    if not basis:
        return p.is_zero
    return remainder(p, basis).is_zero


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    if a.variables != b.variables:
        raise DimensionMismatch("ideals live in different rings")
    return Ideal.make(a.variables, tuple(
        f * g for f in a.generators for g in b.generators
    ))


def contains(outer: Ideal, inner: Ideal, guard: int = DEFAULT_GUARD) -> bool:
    """True iff inner is a subset of outer (generator-wise membership)."""
    if outer.variables != inner.variables:
        raise DimensionMismatch("ideals live in different rings")
    return all(member(g, outer, guard) for g in inner.generators)


@dataclass(frozen=True)
class PrimeCertificate:
    certified: bool
    leading_vars: tuple
    free_vars: tuple
    reason: str


def triangular_prime_check(
    ideal: Ideal, guard: int = DEFAULT_GUARD
) -> PrimeCertificate:
    """Certify primality when the reduced basis is triangular-linear.

    Every basis element must be a single variable minus a polynomial in
    variables that are not leading variables of any element; the quotient
    is then a polynomial ring over the free variables, hence a domain.
    Anything else yields "not certified", never "not prime".
    """
    basis = groebner(ideal, guard)
    if not basis:
        return PrimeCertificate(False, (), (), "zero ideal not certified")
    leading_positions = []
    for f in basis:
        exps, _ = f.leading_term()
        if sum(exps) != 1:
            return PrimeCertificate(
                False, (), (), f"nonlinear leading term in {poly_to_string(f)}"
            )
        leading_positions.append(exps.index(1))
    if len(set(leading_positions)) != len(leading_positions):
        return PrimeCertificate(False, (), (), "repeated leading variable")
    lead_set = set(leading_positions)
    for f in basis:
        for exps, _ in f.terms[1:]:
            if any(exps[i] for i in lead_set):
                return PrimeCertificate(
                    False, (), (),
                    f"tail of {poly_to_string(f)} touches a leading variable",
                )
    leading_vars = tuple(ideal.variables[i] for i in sorted(lead_set))
    free_vars = tuple(
        v for i, v in enumerate(ideal.variables) if i not in lead_set
    )
    return PrimeCertificate(True, leading_vars, free_vars, "triangular-linear")


def substitute_ideal(ideal: Ideal, assignments: dict) -> Ideal:
    for name in assignments:
        if name not in ideal.variables:
            raise UnknownVariable(f"variable {name!r} not in ring")
    new_vars = tuple(v for v in ideal.variables if v not in assignments)
    gens = tuple(g.substitute(assignments) for g in ideal.generators)
    return Ideal.make(new_vars, gens)


def linear_coefficient_matrix(generators, variables) -> Matrix:
    """Rows of x-coefficients for homogeneous-linear generators."""
    variables = tuple(variables)
    rows = []
    for g in generators:
        if g.variables != variables:
            raise DimensionMismatch("generator lives in the wrong ring")
        row = [Fraction(0)] * len(variables)
        for exps, coeff in g.terms:
            if sum(exps) != 1:
                raise DimensionMismatch(
                    f"generator {poly_to_string(g)} is not homogeneous linear"
                )
            row[exps.index(1)] = coeff
        rows.append(row)
    if not rows:
        return Matrix.zero(0, len(variables))
    return Matrix.from_rows(rows)


def ideal_from_json_dict(data: dict) -> Ideal:
    try:
        variables = data["vars"]
        gens = data["gens"]
    except (TypeError, KeyError) as exc:
        raise InputError("ideal object needs vars and gens") from exc
    if not isinstance(variables, list) or not all(
        isinstance(v, str) for v in variables
    ):
        raise InputError("vars must be a list of names")
    if len(set(variables)) != len(variables):
        raise InputError("vars must be distinct")
    variables = tuple(variables)
    return Ideal.make(variables, tuple(
        poly_from_string(variables, g) for g in gens
    ))


def ideal_to_json_dict(ideal: Ideal) -> dict:
    return {
        "vars": list(ideal.variables),
        "gens": [poly_to_string(g) for g in ideal.generators],
    }
