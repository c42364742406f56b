"""Exact scalars: rationals, cyclotomic fields Q(zeta_m) and sparse Laurent polynomials.

Rationals are :class:`fractions.Fraction`.  A :class:`CycloNumber` is a
polynomial in ``zeta_m`` reduced modulo the m-th cyclotomic polynomial, so
two numbers are equal exactly when their coefficient vectors are.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction


# ----------------------------------------------------------------------
# dense polynomials over Q, lists low -> high, no trailing zeros


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def poly_sub(p: Sequence, q: Sequence) -> list:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    return _trim(out)


def poly_divmod(p: Sequence, q: Sequence) -> tuple[list, list]:
    """Exact long division over Q; ``q`` must be nonzero."""
    q = _trim(list(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(c) for c in p]
    _trim(r)
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quot = [Fraction(0)] * max(len(r) - dq, 0)
    while len(r) - 1 >= dq and r:
        shift = len(r) - 1 - dq
        c = r[-1] / lead
        quot[shift] = c
        for i, b in enumerate(q):
            r[shift + i] -= c * b
        _trim(r)
    return _trim(quot), r


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Phi_m as integer coefficients (low -> high), by dividing u^m - 1 by Phi_d, d | m, d < m."""
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    num: list = [-1] + [0] * (m - 1) + [1]
    for d in _divisors(m)[:-1]:
        num, rem = poly_divmod(num, cyclotomic_poly(d))
        if rem:
            raise ArithmeticError(f"Phi_{d} does not divide u^{m}-1")
    out = []
    for c in num:
        if Fraction(c).denominator != 1:
            raise ArithmeticError(f"Phi_{m} is not integral")
        out.append(int(c))
    return tuple(out)


class CyclotomicField:
    """Descriptor for Q(zeta_m): Phi_m plus the reduction table for u^k, deg <= k < 2 deg - 1."""

    def __init__(self, m: int):
        self.order = m
        self.phi = cyclotomic_poly(m)
        self.degree = len(self.phi) - 1
        d = self.degree
        # u^k mod Phi_m for k in [d, 2d-2]
        table = []
        cur = [-Fraction(c) for c in self.phi[:-1]]  # u^d
        for _ in range(max(d - 1, 1)):
            table.append(tuple(cur))
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            if top:
                for i in range(d):
                    nxt[i] -= top * self.phi[i]
            cur = nxt
        self._fold = table
        self._zero = (Fraction(0),) * d
        self._powers = [self.reduce([0] * k + [1]) for k in range(m)]

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def reduce(self, coeffs: Sequence) -> tuple:
        """Reduce an arbitrary-length polynomial in zeta modulo Phi_m."""
        d = self.degree
        if len(coeffs) <= d:
            out = [Fraction(c) for c in coeffs] + [Fraction(0)] * (d - len(coeffs))
            return tuple(out)
        p = [Fraction(c) for c in coeffs]
        _, r = poly_divmod(p, self.phi)
        return tuple(r + [Fraction(0)] * (d - len(r)))

    def mul(self, x: tuple, y: tuple) -> tuple:
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        prod[i + j] += a * b
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                for i, t in enumerate(self._fold[k - d]):
                    if t:
                        out[i] += c * t
        return tuple(out)

    def zeta_power(self, k: int) -> "CycloNumber":
        return CycloNumber(self, self._powers[k % self.order])

    def zeta(self) -> "CycloNumber":
        return self.zeta_power(1)

    def one(self) -> "CycloNumber":
        return CycloNumber.from_rational(self, 1)

    def zero(self) -> "CycloNumber":
        return CycloNumber(self, self._zero)


@functools.lru_cache(maxsize=None)
def cyclotomic_field(m: int) -> CyclotomicField:
    if m < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {m}")
    return CyclotomicField(m)


def _xgcd_inverse(a: list, phi: Sequence) -> list:
    # returns s with s*a = 1 mod phi
    r0, r1 = [Fraction(c) for c in phi], _trim([Fraction(c) for c in a])
    s0, s1 = [], [Fraction(1)]
    while r1 and len(r1) > 1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible modulo Phi_m")
    c = r1[0]
    return [x / c for x in s1]


class CycloNumber:
    """Element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi(m)-1)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: CyclotomicField, coeffs: Sequence):
        self.field = field
        if len(coeffs) != field.degree:
            coeffs = field.reduce(coeffs)
        self.coeffs = tuple(coeffs)
        self._hash = None

    @classmethod
    def from_rational(cls, field: CyclotomicField, q) -> "CycloNumber":
        return cls(field, (Fraction(q),) + (Fraction(0),) * (field.degree - 1))

    def _coerce(self, other):
        if isinstance(other, CycloNumber):
            if other.field.order != self.field.order:
                raise ValueError(
                    f"field mismatch: Q(zeta_{self.field.order}) vs Q(zeta_{other.field.order})"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNumber.from_rational(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNumber(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNumber(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.field.zero()
            return CycloNumber(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycloNumber(self.field, self.field.mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if not self:
            raise ZeroDivisionError(f"inverse of zero in Q(zeta_{self.field.order})")
        s = _xgcd_inverse(list(self.coeffs), self.field.phi)
        return CycloNumber(self.field, self.field.reduce(s))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycloNumber(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, CycloNumber):
            return self.field.order == other.field.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs[0]) if self.is_rational() else hash((self.field.order, self.coeffs))
        return self._hash

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        """Floating-point embedding zeta -> exp(2 pi i / m); debugging only."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.field.order)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"order": self.field.order, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"{c}*z^{k}" if c != 1 else f"z^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} in Q(z_{self.field.order})>"


def q_number_at(field: CyclotomicField, k: int, base_power: int = 1) -> CycloNumber:
    """[k] with base zeta^base_power: (z^(bk) - z^(-bk)) / (z^b - z^(-b)), as a geometric sum."""
    if k == 0:
        return field.zero()
    sign = 1 if k > 0 else -1
    k = abs(k)
    total = field.zero()
    for j in range(k):
        total = total + field.zeta_power(base_power * (k - 1 - 2 * j))
    return total if sign > 0 else -total


def q_factorial_at(field: CyclotomicField, k: int) -> CycloNumber:
    out = field.one()
    for j in range(1, k + 1):
        out = out * q_number_at(field, j)
    return out


# ----------------------------------------------------------------------


class LaurentPoly:
    """Sparse Laurent polynomial: exponent -> coefficient (Fraction or CycloNumber)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        self.terms = {}
        for k, c in items:
            if c:
                self.terms[k] = self.terms.get(k, 0) + c
                if not self.terms[k]:
                    del self.terms[k]

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return _lp(out)

    __radd__ = __add__

    def __neg__(self):
        return _lp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if not other:
                return LaurentPoly()
            return _lp({k: c * other for k, c in self.terms.items() if c * other})
        out: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return _lp({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ZeroDivisionError("only monomials are units in a Laurent ring")
            (e, c), = self.terms.items()
            return LaurentPoly({e * k: 1 / (c ** (-k))})
        result = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute_power(self, a: int) -> "LaurentPoly":
        """u -> u^a."""
        if a == 0:
            return LaurentPoly.constant(sum(self.terms.values(), 0))
        return _lp({k * a: c for k, c in self.terms.items()})

    def invert_variable(self) -> "LaurentPoly":
        return self.substitute_power(-1)

    def evaluate(self, x):
        total = 0
        for k, c in self.terms.items():
            total = total + c * x**k
        return total

    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def valuation(self) -> int:
        return min(self.terms) if self.terms else 0

    def coefficients_rational(self) -> bool:
        for c in self.terms.values():
            if isinstance(c, CycloNumber) and not c.is_rational():
                return False
        return True

    def to_rational(self) -> "LaurentPoly":
        return _lp({k: (c.to_rational() if isinstance(c, CycloNumber) else Fraction(c)) for k, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*u^{k}" for k, c in sorted(self.terms.items()))


def _lp(d: dict) -> LaurentPoly:
    out = LaurentPoly.__new__(LaurentPoly)
    out.terms = d
    return out


def eval_at_eps(p: LaurentPoly, g: int) -> CycloNumber:
    """Substitute Q = eps = zeta_{2g} into a Laurent polynomial with rational coefficients."""
    field = cyclotomic_field(2 * g)
    m = field.order
    by_residue: dict = {}
    for k, c in p.terms.items():
        by_residue[k % m] = by_residue.get(k % m, 0) + c
    out = [Fraction(0)] * field.degree
    for k, c in by_residue.items():
        if c:
            for i, t in enumerate(field._powers[k]):
                if t:
                    out[i] += c * t
    return CycloNumber(field, tuple(out))
