"""U(sl2) in the PBW basis (X-)^a H^b (X+)^c.

Relations: [H, X+-] = +-2 X+-, [X+, X-] = H.
"""
from __future__ import annotations

import functools
import math
from typing import Mapping

Monomial = tuple  # (a, b, c)


def _hpoly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _linear_power(shift: int, b: int) -> list:
    """Coefficients of (H + shift)^b."""
    return [math.comb(b, i) * shift ** (b - i) for i in range(b + 1)]


@functools.lru_cache(maxsize=None)
def _straighten(b1: int, a2: int, c1: int, b2: int) -> tuple:
    """H^b1 (X+)^c1 (X-)^a2 H^b2 as sum over k of (X-)^(a2-k) poly_k(H) (X+)^(c1-k).

    Uses (X+)^c (X-)^a = sum_k k! C(a,k) C(c,k) (X-)^(a-k) prod_{j=1..k}(H - a - c + k + j) (X+)^(c-k),
    H^b (X-)^a = (X-)^a (H - 2a)^b and (X+)^c H^b = (H - 2c)^b (X+)^c.
    """
    out = []
    for k in range(min(a2, c1) + 1):
        lead = math.factorial(k) * math.comb(a2, k) * math.comb(c1, k)
        poly = [lead]
        for j in range(1, k + 1):
            poly = _hpoly_mul(poly, [k + j - a2 - c1, 1])
        poly = _hpoly_mul(_linear_power(-2 * (a2 - k), b1), poly)
        poly = _hpoly_mul(poly, _linear_power(-2 * (c1 - k), b2))
        out.append((k, tuple(poly)))
    return tuple(out)


def _monomial_product(m1: Monomial, m2: Monomial):
    a1, b1, c1 = m1
    a2, b2, c2 = m2
    if c1 == 0 or a2 == 0:
        return (((a1 + a2, b1 + b2, c1 + c2), 1),) if c1 == 0 and a2 == 0 else _simple(m1, m2)
    return tuple(
        ((a1 + a2 - k, i, c1 - k + c2), coef)
        for k, poly in _straighten(b1, a2, c1, b2)
        for i, coef in enumerate(poly)
        if coef
    )


def _simple(m1, m2):
    a1, b1, c1 = m1
    a2, b2, c2 = m2
    if c1 == 0:
        # H^b1 (X-)^a2 = (X-)^a2 (H - 2 a2)^b1
        poly = _hpoly_mul(_linear_power(-2 * a2, b1), [0] * b2 + [1])
    else:
        # (X+)^c1 H^b2 = (H - 2 c1)^b2 (X+)^c1
        poly = _hpoly_mul([0] * b1 + [1], _linear_power(-2 * c1, b2))
    return tuple(((a1 + a2, i, c1 + c2), coef) for i, coef in enumerate(poly) if coef)


_mono_cache: dict = {}


def monomial_product(m1: Monomial, m2: Monomial):
    key = (m1, m2)
    r = _mono_cache.get(key)
    if r is None:
        r = _monomial_product(m1, m2)
        _mono_cache[key] = r
    return r


class PBWElement:
    """Finite combination of normal-ordered monomials over any coefficient ring."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    v = self.terms.get(m, 0) + c
                    if v:
                        self.terms[m] = v
                    else:
                        self.terms.pop(m, None)

    @classmethod
    def _raw(cls, terms):
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def monomial(cls, a=0, b=0, c=0, coeff=1):
        return cls({(a, b, c): coeff})

    @classmethod
    def scalar(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def h_poly(cls, coeffs) -> "PBWElement":
        """sum_i coeffs[i] H^i."""
        return cls({(0, i, 0): c for i, c in enumerate(coeffs)})

    def __add__(self, other):
        if not isinstance(other, PBWElement):
            other = PBWElement.scalar(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return PBWElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, PBWElement):
            other = PBWElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PBWElement):
            if not other:
                return PBWElement()
            return PBWElement._raw({m: c * other for m, c in self.terms.items()})
        return pbw_mul(self, other)

    def __rmul__(self, other):
        if not other:
            return PBWElement()
        return PBWElement._raw({m: other * c for m, c in self.terms.items()})

    def __pow__(self, k: int):
        result = PBWElement.scalar(1)
        for _ in range(k):
            result = pbw_mul(result, self)
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            other = PBWElement.scalar(other) if other else PBWElement()
        return self.terms == other.terms

    __hash__ = None

    def map(self, f) -> "PBWElement":
        return PBWElement({m: f(c) for m, c in self.terms.items()})

    def is_balanced(self) -> bool:
        """Only monomials (X-)^a H^b (X+)^a occur."""
        return all(a == c for a, _, c in self.terms)

    def h_part(self) -> dict:
        """Coefficients of the pure-H monomials: b -> coefficient."""
        return {b: c for (a, b, cc), c in self.terms.items() if a == 0 and cc == 0}

    def degree(self) -> int:
        return max((a + b + c for a, b, c in self.terms), default=-1)

    def items(self):
        return sorted(self.terms.items())

    def to_json(self, coeff_json=str):
        return [[a, b, c, coeff_json(v)] for (a, b, c), v in self.items()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), v in self.items():
            mono = "".join(
                s for s, e in (("X-", a), ("H", b), ("X+", c)) for s in ([f"{s}^{e}"] if e > 1 else [s] if e else [])
            )
            parts.append(f"({v})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def pbw_mul(x: PBWElement, y: PBWElement) -> PBWElement:
    out: dict = {}
    for m1, c1 in x.terms.items():
        for m2, c2 in y.terms.items():
            c12 = c1 * c2
            for m, k in monomial_product(m1, m2):
                v = out.get(m)
                add = c12 * k
                v = add if v is None else v + add
                if v:
                    out[m] = v
                else:
                    del out[m]
    return PBWElement._raw(out)


def left_mul_xh(a: int, b: int, x: PBWElement) -> PBWElement:
    """(X-)^a H^b * x, using H^b (X-)^a' = (X-)^a' (H - 2a')^b."""
    out: dict = {}
    for (a2, b2, c2), v in x.terms.items():
        shift = _linear_power(-2 * a2, b)
        for i, k in enumerate(shift):
            if k:
                m = (a + a2, i + b2, c2)
                w = out.get(m)
                w = v * k if w is None else w + v * k
                if w:
                    out[m] = w
                else:
                    del out[m]
    return PBWElement._raw(out)


def commutator(x: PBWElement, y: PBWElement) -> PBWElement:
    return pbw_mul(x, y) - pbw_mul(y, x)


XM = PBWElement.monomial(1, 0, 0)
XP = PBWElement.monomial(0, 0, 1)
HH = PBWElement.monomial(0, 1, 0)
ONE = PBWElement.scalar(1)


@functools.lru_cache(maxsize=None)
def casimir_pbw() -> PBWElement:
    """(H + 1)^2 + 4 X- X+."""
    return (HH + 1) * (HH + 1) + XM * XP * 4


def casimir_alternative() -> PBWElement:
    """(H - 1)^2 + 4 X+ X-, normal ordered."""
    return (HH - 1) * (HH - 1) + XP * XM * 4


@functools.lru_cache(maxsize=None)
def casimir_power(j: int) -> PBWElement:
    if j == 0:
        return ONE
    return pbw_mul(casimir_power(j - 1), casimir_pbw())
