"""Graded dimension windows over powers of an automorphism and their
closed-form generating series.

For infinite-order sigma the window is symmetric, |k| <= K; for finite
order m only one cycle 0 <= k < m is stored since the dims repeat. A
series is only built from a certified window: either the finite cycle,
or an eventually periodic pattern detected inside the window.
"""

from __future__ import annotations

from dataclasses import dataclass

from gderive.algebra import Automorphism, LieAlgebra, require_validated
from gderive.derivations import derivation_space
from gderive.errors import FiniteOrderInput, InputError, NoPeriod
from gderive.linalg import matrix_order

DEFAULT_WINDOW = 8
DEFAULT_ORDER_BOUND = 64


@dataclass(frozen=True)
class GradedDims:
    algebra: LieAlgebra
    sigma: Automorphism
    kind: str
    window: int
    dims: dict
    finite_order: int = None

    def grade(self, k: int) -> int:
        if self.finite_order is not None:
            return self.dims[k % self.finite_order]
        return self.dims[k]


def graded_dims(
    g: LieAlgebra,
    sigma: Automorphism,
    kind: str = "plain",
    window: int = DEFAULT_WINDOW,
    order_bound: int = DEFAULT_ORDER_BOUND,
) -> GradedDims:
    """Solve Der_{sigma^k}(g) for each grade in the window.

    kind "plus" additionally requires commuting with sigma^k, which is
    vacuous at k = 0, so grade 0 always carries dim Der(g).
    """
    require_validated(sigma)
    if kind not in ("plain", "plus"):
        raise InputError(f"unknown grading kind {kind!r}")
    if window < 1:
        raise InputError("window must be at least 1")
    order = matrix_order(sigma.matrix, order_bound)
    solver_kind = "plain" if kind == "plain" else "plus"
    if order is not None:
        grades = range(order)
        dims = {}
        for k in grades:
            power = sigma.power(k)
            dims[k] = derivation_space(g, power, kind=solver_kind).dim
        return GradedDims(g, sigma, kind, order, dims, order)
    dims = {}
    for k in range(-window, window + 1):
        power = sigma.power(k)
        dims[k] = derivation_space(g, power, kind=solver_kind).dim
    return GradedDims(g, sigma, kind, window, dims)


def detect_period(gd: GradedDims):
    """Least (cutoff, period) under which the window is eventually
    periodic on both sides, or None when nothing fits.

    Lexicographic minimum with cutoff + period <= window, so at least
    one repetition is actually witnessed.
    """
    if gd.finite_order is not None:
        raise FiniteOrderInput(
            "finite-order gradings are exactly periodic; no detection needed"
        )
    K = gd.window
    for cutoff in range(K):
        for period in range(1, K - cutoff + 1):
            ok = all(
                gd.dims[k] == gd.dims[k + period]
                for k in range(cutoff, K - period + 1)
            ) and all(
                gd.dims[-k] == gd.dims[-k - period]
                for k in range(cutoff, K - period + 1)
            )
            if ok:
                return cutoff, period
    return None


@dataclass(frozen=True)
class RationalSeries:
    """Closed form: Laurent polynomial plus two geometric tails.

    polynomial_part: tuple of (exponent, coefficient) pairs.
    positive_tail: (coeffs, period, start) meaning
        t^start * sum(coeffs[i] t^i) / (1 - t^period), or None.
    negative_tail: the mirror image in t^{-1}, or None.
    """

    polynomial_part: tuple
    positive_tail: tuple = None
    negative_tail: tuple = None
    finite_order: int = None

    def coefficient(self, k: int) -> int:
        if self.finite_order is not None:
            k %= self.finite_order
        total = 0
        for exponent, coeff in self.polynomial_part:
            if exponent == k:
                total += coeff
        if self.positive_tail is not None:
            coeffs, period, start = self.positive_tail
            if k >= start:
                total += coeffs[(k - start) % period]
        if self.negative_tail is not None:
            coeffs, period, start = self.negative_tail
            if -k >= start:
                total += coeffs[(-k - start) % period]
        return total


def rational_series(
    gd: GradedDims, cutoff: int = None, period: int = None
) -> RationalSeries:
    """Assemble the generating series certified by the window.

    Finite order gives a polynomial of degree < order. Otherwise the
    detected (cutoff, period) split the window into a central Laurent
    polynomial and two geometric tails.
    """
    if gd.finite_order is not None:
        poly = tuple(
            (k, gd.dims[k]) for k in range(gd.finite_order) if gd.dims[k]
        )
        return RationalSeries(poly, finite_order=gd.finite_order)
    if cutoff is None or period is None:
        found = detect_period(gd)
        if found is None:
            raise NoPeriod("no eventual period is visible in the window")
        cutoff, period = found
    start = max(cutoff, 1)
    poly = tuple(
        (k, gd.dims[k])
        for k in range(-(start - 1), start)
        if gd.dims[k]
    )
    pos = tuple(gd.dims[start + i] for i in range(period))
    neg = tuple(gd.dims[-start - i] for i in range(period))
    positive_tail = (pos, period, start) if any(pos) else None
    negative_tail = (neg, period, start) if any(neg) else None
    return RationalSeries(poly, positive_tail, negative_tail)


def series_matches_window(gd: GradedDims, series: RationalSeries) -> bool:
    """Exact agreement of the closed form with every computed grade."""
    return all(series.coefficient(k) == d for k, d in gd.dims.items())


def _monomial(exponent: int) -> str:
    if exponent == 0:
        return "1"
    if exponent == 1:
        return "t"
    return f"t^{exponent}"


def _term(exponent: int, coeff: int) -> str:
    if exponent == 0:
        return str(coeff)
    mono = _monomial(exponent)
    return mono if coeff == 1 else f"{coeff}*{mono}"


def _tail_text(coeffs, period: int, start: int, sign: int) -> str:
    terms = [
        _term(sign * (start + i), c) for i, c in enumerate(coeffs) if c
    ]
    numerator = " + ".join(terms)
    if len(terms) > 1:
        numerator = f"({numerator})"
    return f"{numerator}/(1-{_monomial(sign * period)})"


def render_series(series: RationalSeries) -> str:
    """Human-readable closed form, e.g. '3 + t/(1-t) + t^-1/(1-t^-1)'."""
    parts = [
        _term(e, c)
        for e, c in sorted(series.polynomial_part, key=lambda p: abs(p[0]))
        if c
    ]
    if series.positive_tail is not None:
        parts.append(_tail_text(*series.positive_tail, 1))
    if series.negative_tail is not None:
        parts.append(_tail_text(*series.negative_tail, -1))
    return " + ".join(parts) if parts else "0"
