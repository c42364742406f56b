"""Interpolation polynomial P, brace polynomials {a} = P(Q^a) and the brackets [a]_{QT^{a}}.

Both P and the interpolating brackets are computed along two independent
routes that are compared on every construction.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import CycloNumber, LaurentPoly, cyclotomic_field, eval_at_eps, q_number_at
from .series import BiSeries, USeries, compose, exp_of_laurent_argument, invert_unit, sinhc_coeffs


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


def _rational_laurent(p: LaurentPoly, what: str) -> LaurentPoly:
    if not p.coefficients_rational():
        raise ConsistencyError(f"{what} has irrational coefficients: {p!r}")
    return p.to_rational()


def P_product_formula(g: int) -> LaurentPoly:
    """(u^(g-1) + u^(1-g))/2 * prod_k (eps^k u - eps^-k u^-1)/(eps^k - eps^-k), computed in Q(zeta_2g)."""
    F = cyclotomic_field(2 * g)
    p = LaurentPoly({g - 1: Fraction(1, 2)}) + LaurentPoly({1 - g: Fraction(1, 2)})
    for k in range(1, g):
        ek, emk = F.zeta_power(k), F.zeta_power(-k)
        p = p * LaurentPoly({1: ek, -1: -emk}) * (ek - emk).inverse()
    return _rational_laurent(p, "product-formula P")


def lagrange_Pg(g: int) -> list:
    """Coefficients of the degree g-1 polynomial with P_g(1) = 1 and P_g(eps^(2k)) = 0 for 0 < k < g."""
    F = cyclotomic_field(2 * g)
    coeffs = [F.one()]
    for k in range(1, g):
        root = F.zeta_power(2 * k)
        denom = (1 - root).inverse()
        shifted = [F.zero()] + coeffs
        coeffs = [(shifted[i] - (root * coeffs[i] if i < len(coeffs) else 0)) * denom for i in range(len(shifted))]
    out = []
    for c in coeffs:
        if not c.is_rational():
            raise ConsistencyError(f"Lagrange interpolant has irrational coefficient {c!r}")
        out.append(c.to_rational())
    return out


def P_symmetrized(g: int) -> LaurentPoly:
    """(P_g(u^2) + P_g(u^-2)) / 2."""
    Pg = lagrange_Pg(g)
    terms = {}
    for k, c in enumerate(Pg):
        for e in (2 * k, -2 * k):
            terms[e] = terms.get(e, 0) + c / 2
    return LaurentPoly(terms)


@dataclass
class BracePoly:
    """The polynomial P for a given g together with per-integer caches of {a}."""

    g: int
    P: LaurentPoly
    _series_cache: dict = field(default_factory=dict, repr=False)

    def laurent(self, a: int) -> LaurentPoly:
        """{a} as a Laurent polynomial in Q."""
        return self.P.substitute_power(a)

    def h_series(self, a: int, order: int) -> USeries:
        """{a} with Q = exp(h)."""
        key = (a, order)
        s = self._series_cache.get(key)
        if s is None:
            s = exp_of_laurent_argument(self.laurent(a).terms, order, var="h")
            self._series_cache[key] = s
        return s

    def at_eps(self, a: int) -> CycloNumber:
        return eval_at_eps(self.laurent(a), self.g)

    def coefficient_table(self) -> list:
        return [(k, c) for k, c in sorted(self.P.terms.items())]


@functools.lru_cache(maxsize=None)
def build_P(g: int) -> BracePoly:
    if g < 1:
        raise ValueError(f"g must be >= 1, got {g}")
    a = P_product_formula(g)
    b = P_symmetrized(g)
    if a != b:
        raise ConsistencyError(f"P routes disagree for g={g}: {a!r} vs {b!r}")
    return BracePoly(g, a)


def brace(a: int, g: int, order: int = 6):
    """Return ({a} in Q, {a} as an h-series, {a} at Q = eps)."""
    B = build_P(g)
    return B.laurent(a), B.h_series(a, order), B.at_eps(a)


# ----------------------------------------------------------------------


def _exponents(a: int) -> range:
    return range(a - 1, -a, -2)


def classical_qnum_h(a: int, order: int, var: str = "h", scale: int = 1) -> USeries:
    """[a] with base exp(scale * t) as a series in t: sinh(scale a t) / sinh(scale t)."""
    sign = -1 if a < 0 else 1
    terms = {scale * p: sign for p in _exponents(abs(a))}
    return exp_of_laurent_argument(terms, order, var=var)


def eps_qnum_series(a: int, g: int, order: int, deformed: bool) -> USeries:
    """[a]_{eps T} as an h'-series over Q(zeta_2g) if ``deformed`` else the constant [a]_eps."""
    F = cyclotomic_field(2 * g)
    if not deformed:
        return USeries(order, {0: q_number_at(F, a)}, var="h'")
    sign = -1 if a < 0 else 1
    out = {}
    for r in range(order + 1):
        total = F.zero()
        for p in _exponents(abs(a)):
            total = total + F.zeta_power(p) * Fraction(sign * p**r, math.factorial(r))
        out[r] = total
    return USeries(order, out, var="h'")


@dataclass(frozen=True)
class InterpQNum:
    """[a]_{QT^{a}} truncated at total order N.

    ``series`` is the (h, h') form; ``lattice[r]`` is the Laurent polynomial in Q
    multiplying h'^r.
    """

    a: int
    g: int
    order: int
    series: BiSeries
    lattice: tuple

    def lattice_expanded(self) -> BiSeries:
        """Substitute Q = exp(h) into the lattice form."""
        coeffs = {}
        for r, L in enumerate(self.lattice):
            s = exp_of_laurent_argument(L.terms, self.order - r, var="h")
            for n, c in s.coeffs.items():
                coeffs[(n, r)] = c
        return BiSeries(self.order, coeffs)

    def at_eps(self) -> USeries:
        """Substitute Q = eps: an h'-series over Q(zeta_2g)."""
        return USeries(self.order, {r: eval_at_eps(L, self.g) for r, L in enumerate(self.lattice)}, var="h'")

    def at_hp_zero(self) -> USeries:
        return self.series.at_hp_zero()

    def at_h_zero(self) -> USeries:
        return self.series.at_h_zero()


def qnum_series_route(a: int, g: int, order: int) -> BiSeries:
    """a * sinhc(a x) / sinhc(x) with x = h + h' {a}(exp h)."""
    if a == 0:
        return BiSeries.zero(order)
    B = build_P(g)
    x = BiSeries.monomial(order, 1, 0) + BiSeries.monomial(order, 0, 1) * B.h_series(a, order).as_bi(order)
    sc = sinhc_coeffs(order)
    return compose(sc, x * a) * invert_unit(compose(sc, x)) * a


def qnum_lattice_route(a: int, g: int, order: int) -> tuple:
    """Coefficients of h'^r in sum_k (Q T^{a})^(a-1-2k): ({a}^r / r!) sum_k p_k^r Q^(p_k)."""
    if a == 0:
        return tuple(LaurentPoly() for _ in range(order + 1))
    # [a]_b = -[-a]_b, but the base b = Q T^{a} keeps the brace of a itself
    sign = -1 if a < 0 else 1
    Ba = build_P(g).laurent(a)
    out = []
    power = LaurentPoly.constant(Fraction(1))
    for r in range(order + 1):
        geo = LaurentPoly({p: Fraction(sign * p**r, math.factorial(r)) for p in _exponents(abs(a)) if p or r == 0})
        out.append(geo * power)
        power = power * Ba
    return tuple(out)


@functools.lru_cache(maxsize=None)
def interp_qnum(a: int, g: int, order: int) -> InterpQNum:
    q = InterpQNum(a, g, order, qnum_series_route(a, g, order), qnum_lattice_route(a, g, order))
    if q.lattice_expanded() != q.series:
        raise ConsistencyError(f"series and lattice routes disagree for [{a}] at g={g}, N={order}")
    return q


def interp_qnum_value(a: int, g: int, order: int) -> BiSeries:
    return interp_qnum(a, g, order).series
