"""Truncated formal power series in (h, h').

``BiSeries`` keeps coefficients of h^n h'^m with n + m <= order.  Coefficients
may come from any ring supporting ``+``, ``*`` and truthiness (Fraction,
CycloNumber, LaurentPoly, PBW elements, ...).  Multiplication keeps the left
factor's coefficient on the left, so noncommutative coefficient rings work.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Mapping

H = (1, 0)
HP = (0, 1)


class TruncationMismatch(ValueError):
    """Raised when series of different truncation orders are combined."""


def _add_into(acc: dict, key, c):
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class BiSeries:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Mapping | Iterable = ()):
        if order < 0:
            raise ValueError(f"truncation order must be >= 0, got {order}")
        self.order = order
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict = {}
        for (n, m), c in items:
            if n + m <= order and c:
                _add_into(acc, (n, m), c)
        self.coeffs = acc

    # -- constructors
    @classmethod
    def constant(cls, order, c):
        return cls(order, {(0, 0): c})

    @classmethod
    def zero(cls, order):
        return cls(order)

    @classmethod
    def monomial(cls, order, n, m, c=1):
        return cls(order, {(n, m): c})

    @classmethod
    def _raw(cls, order, coeffs: dict):
        out = cls.__new__(cls)
        out.order = order
        out.coeffs = coeffs
        return out

    def _check(self, other):
        if other.order != self.order:
            raise TruncationMismatch(f"truncation orders differ: {self.order} vs {other.order}")

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def __add__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(self.order, other)
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _add_into(out, k, c)
        return BiSeries._raw(self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return BiSeries._raw(self.order, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        N = self.order
        if not isinstance(other, BiSeries):
            return BiSeries._raw(N, {k: c * other for k, c in self.coeffs.items() if c * other})
        self._check(other)
        out: dict = {}
        right = list(other.coeffs.items())
        for (n1, m1), a in self.coeffs.items():
            room = N - n1 - m1
            for (n2, m2), b in right:
                if n2 + m2 <= room:
                    _add_into(out, (n1 + n2, m1 + m2), a * b)
        return BiSeries._raw(N, out)

    def __rmul__(self, other):
        # scalar on the left
        return BiSeries._raw(self.order, {k: other * c for k, c in self.coeffs.items() if other * c})

    def __pow__(self, k: int):
        if k < 0:
            return invert_unit(self) ** (-k)
        result = BiSeries.constant(self.order, 1)
        for _ in range(k):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, BiSeries):
            other = BiSeries.constant(self.order, other)
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    # -- structure
    def constant_term(self):
        return self.coeffs.get((0, 0), 0)

    def truncate(self, order: int) -> "BiSeries":
        return BiSeries(order, {k: c for k, c in self.coeffs.items() if sum(k) <= order})

    def map(self, f: Callable) -> "BiSeries":
        return BiSeries(self.order, {k: f(c) for k, c in self.coeffs.items()})

    def at_hp_zero(self) -> "USeries":
        """Substitute h' = 0: a series in h."""
        return USeries(self.order, {n: c for (n, m), c in self.coeffs.items() if m == 0}, var="h")

    def at_h_zero(self) -> "USeries":
        """Substitute h = 0: a series in h'."""
        return USeries(self.order, {m: c for (n, m), c in self.coeffs.items() if n == 0}, var="h'")

    def total_degree_part(self, k: int):
        return {key: c for key, c in self.coeffs.items() if sum(key) == k}

    def first_nonzero(self):
        """Lowest (total degree, n) coefficient, or None for the zero series."""
        if not self.coeffs:
            return None
        key = min(self.coeffs, key=lambda nm: (nm[0] + nm[1], nm))
        return key, self.coeffs[key]

    def to_json(self, coeff_json: Callable = str):
        return [[n, m, coeff_json(c)] for (n, m), c in self.items()]

    def __repr__(self):
        if not self.coeffs:
            return f"BiSeries(0; N={self.order})"
        parts = [f"({c})*h^{n}*h'^{m}" for (n, m), c in self.items()]
        return "BiSeries(" + " + ".join(parts) + f"; N={self.order})"


def h_series(order: int) -> BiSeries:
    return BiSeries.monomial(order, 1, 0)


def hp_series(order: int) -> BiSeries:
    return BiSeries.monomial(order, 0, 1)


class USeries:
    """Truncated series in one variable (``var`` is 'h' or "h'")."""

    __slots__ = ("order", "coeffs", "var")

    def __init__(self, order: int, coeffs: Mapping | Iterable = (), var: str = "h"):
        if order < 0:
            raise ValueError(f"truncation order must be >= 0, got {order}")
        self.order = order
        self.var = var
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        acc: dict = {}
        for k, c in items:
            if k <= order and c:
                _add_into(acc, k, c)
        self.coeffs = acc

    @classmethod
    def constant(cls, order, c, var="h"):
        return cls(order, {0: c}, var)

    @classmethod
    def _raw(cls, order, coeffs, var):
        out = cls.__new__(cls)
        out.order, out.coeffs, out.var = order, coeffs, var
        return out

    def _check(self, other):
        if other.order != self.order:
            raise TruncationMismatch(f"truncation orders differ: {self.order} vs {other.order}")

    def __getitem__(self, k):
        return self.coeffs.get(k, 0)

    def __add__(self, other):
        if not isinstance(other, USeries):
            other = USeries.constant(self.order, other, self.var)
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _add_into(out, k, c)
        return USeries._raw(self.order, out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return USeries._raw(self.order, {k: -c for k, c in self.coeffs.items()}, self.var)

    def __sub__(self, other):
        if not isinstance(other, USeries):
            other = USeries.constant(self.order, other, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        N = self.order
        if not isinstance(other, USeries):
            return USeries._raw(N, {k: c * other for k, c in self.coeffs.items() if c * other}, self.var)
        self._check(other)
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j <= N:
                    _add_into(out, i + j, a * b)
        return USeries._raw(N, out, self.var)

    def __rmul__(self, other):
        return USeries._raw(self.order, {k: other * c for k, c in self.coeffs.items() if other * c}, self.var)

    def __pow__(self, k: int):
        if k < 0:
            return invert_unit(self) ** (-k)
        result = USeries.constant(self.order, 1, self.var)
        for _ in range(k):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, USeries):
            other = USeries.constant(self.order, other, self.var)
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def constant_term(self):
        return self.coeffs.get(0, 0)

    def map(self, f: Callable) -> "USeries":
        return USeries(self.order, {k: f(c) for k, c in self.coeffs.items()}, self.var)

    def truncate(self, order: int) -> "USeries":
        return USeries(order, {k: c for k, c in self.coeffs.items() if k <= order}, self.var)

    def as_bi(self, order: int | None = None) -> BiSeries:
        order = self.order if order is None else order
        if self.var == "h":
            return BiSeries(order, {(k, 0): c for k, c in self.coeffs.items()})
        return BiSeries(order, {(0, k): c for k, c in self.coeffs.items()})

    def to_json(self, coeff_json: Callable = str):
        return [[k, coeff_json(c)] for k, c in sorted(self.coeffs.items())]

    def __repr__(self):
        if not self.coeffs:
            return f"USeries(0; {self.var}, N={self.order})"
        parts = [f"({c})*{self.var}^{k}" for k, c in sorted(self.coeffs.items())]
        return "USeries(" + " + ".join(parts) + f"; N={self.order})"


class LaurentT:
    """Truncated h'-Laurent series  sum_{k=val}^{prec} c_k h'^k.

    ``prec`` is the absolute precision: coefficients of exponents above it
    are unknown.  Products and inverses track precision exactly.
    """

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, coeffs: Mapping[int, object], prec: int):
        self.prec = prec
        self.coeffs = {k: c for k, c in coeffs.items() if c and k <= prec}
        self.val = min(self.coeffs) if self.coeffs else prec + 1

    @classmethod
    def from_series(cls, s: USeries, shift: int = 0) -> "LaurentT":
        """h'^shift * s."""
        return cls({k + shift: c for k, c in s.coeffs.items()}, s.order + shift)

    def __getitem__(self, k):
        return self.coeffs.get(k, 0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentT):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, LaurentT):
            other = LaurentT({0: other}, self.prec)
        prec = min(self.prec, other.prec)
        out = {k: c for k, c in self.coeffs.items() if k <= prec}
        for k, c in other.coeffs.items():
            if k <= prec:
                _add_into(out, k, c)
        return LaurentT(out, prec)

    __radd__ = __add__

    def __neg__(self):
        return LaurentT({k: -c for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentT):
            return LaurentT({k: c * other for k, c in self.coeffs.items()}, self.prec)
        if not self.coeffs or not other.coeffs:
            return LaurentT({}, min(self.prec + other.val, other.prec + self.val))
        prec = min(self.prec + other.val, other.prec + self.val)
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j <= prec:
                    _add_into(out, i + j, a * b)
        return LaurentT(out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentT":
        if not self.coeffs:
            raise ZeroDivisionError("inverse of a Laurent series known to be zero at this precision")
        v = self.val
        rel = self.prec - v
        # unit part u = sum c_{v+k} t^k, invert to relative order rel
        u = USeries(rel, {k - v: c for k, c in self.coeffs.items()}, var="h'")
        try:
            inv = invert_unit(u)
        except ZeroDivisionError:
            raise ZeroDivisionError(f"leading coefficient {self.coeffs[v]!r} is not invertible") from None
        return LaurentT({k - v: c for k, c in inv.coeffs.items()}, rel - v)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentT({0: 1}, 10**9)
        for _ in range(k):
            result = result * self
        return result

    def regular_part(self, order: int) -> USeries:
        """Nonnegative-power part as a USeries in h', checking precision covers ``order``."""
        if self.prec < order:
            raise ValueError(f"precision {self.prec} below requested order {order}")
        return USeries(order, {k: c for k, c in self.coeffs.items() if 0 <= k <= order}, var="h'")

    def has_negative_powers(self) -> bool:
        return any(k < 0 for k in self.coeffs)

    def __repr__(self):
        body = " + ".join(f"({c})*h'^{k}" for k, c in sorted(self.coeffs.items())) or "0"
        return f"LaurentT({body}; O(h'^{self.prec + 1}))"


def invert_unit(s):
    """Inverse of a series whose constant term is a unit (BiSeries/USeries) or of a LaurentT."""
    if isinstance(s, LaurentT):
        return s.inverse()
    c0 = s.constant_term()
    if not c0:
        raise ZeroDivisionError(f"constant term {c0!r} is not invertible")
    try:
        inv0 = 1 / c0
    except ZeroDivisionError:
        raise ZeroDivisionError(f"constant term {c0!r} is not invertible") from None
    one = type(s).constant(s.order, 1) if isinstance(s, BiSeries) else USeries.constant(s.order, 1, s.var)
    t = one - s * inv0  # nilpotent: zero constant term
    result = one
    power = one
    for _ in range(s.order):
        power = power * t
        if not power:
            break
        result = result + power
    return result * inv0


# ----------------------------------------------------------------------
# model series with exact rational coefficients


def exp_coeffs(n: int) -> list:
    return [Fraction(1, math.factorial(k)) for k in range(n + 1)]


def sinh_coeffs(n: int) -> list:
    return [Fraction(1, math.factorial(k)) if k % 2 else Fraction(0) for k in range(n + 1)]


def cosh_coeffs(n: int) -> list:
    return [Fraction(0) if k % 2 else Fraction(1, math.factorial(k)) for k in range(n + 1)]


def sinhc_coeffs(n: int) -> list:
    """sinh(x)/x = sum x^(2k) / (2k+1)!."""
    return [Fraction(0) if k % 2 else Fraction(1, math.factorial(k + 1)) for k in range(n + 1)]


MODEL_SERIES = {
    "exp": exp_coeffs,
    "sinh": sinh_coeffs,
    "cosh": cosh_coeffs,
    "sinhc": sinhc_coeffs,
}


def compose(coeffs: list, x):
    """sum_k coeffs[k] * x^k for a series x with zero constant term."""
    if x.constant_term():
        raise ValueError("composition needs a series with zero constant term")
    N = x.order
    one = BiSeries.constant(N, 1) if isinstance(x, BiSeries) else USeries.constant(N, 1, x.var)
    result = one * coeffs[0] if coeffs[0] else one * 0
    power = one
    for k in range(1, min(len(coeffs) - 1, N) + 1):
        power = power * x
        if not power:
            break
        if coeffs[k]:
            result = result + power * coeffs[k]
    return result


def compose_odd_even(name: str, x):
    """Apply one of exp, sinh, cosh, sinhc to ``x`` (zero constant term required)."""
    try:
        gen = MODEL_SERIES[name]
    except KeyError:
        raise ValueError(f"unknown model series {name!r}; choose from {sorted(MODEL_SERIES)}") from None
    return compose(gen(x.order), x)


def exp_of_laurent_argument(poly_coeffs: Mapping[int, object], order: int, var: str = "h") -> USeries:
    """sum_k c_k exp(k t) as a series in t: coefficient of t^j is sum_k c_k k^j / j!."""
    out = {}
    for j in range(order + 1):
        total = 0
        for k, c in poly_coeffs.items():
            total = total + c * Fraction(k**j, math.factorial(j))
        out[j] = total
    return USeries(order, out, var)
