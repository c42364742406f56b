"""The interpolating algebra U_{h,h'}(sl2, g) through its isomorphism psi onto U(sl2)[[h, h']].

Elements are stored as their psi-images: a :class:`BiSeries` whose coefficients
are :class:`PBWElement`.  Operator-valued expressions in H and sqrt(C) are
assembled as series over :class:`BiPoly` in the commuting variables (H, S),
S standing for sqrt(C); their S-odd part must vanish before S^2 -> C.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .pbw import HH, ONE, XM, XP, PBWElement, casimir_pbw, casimir_power, left_mul_xh
from .qnumbers import ConsistencyError, build_P
from .series import BiSeries, compose, invert_unit, sinhc_coeffs

Uhh = BiSeries  # BiSeries with PBWElement coefficients


class BiPoly:
    """Sparse commutative polynomial in two variables, (i, j) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms):
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def var(cls, which: int, coeff=1):
        return cls({(1, 0) if which == 0 else (0, 1): coeff})

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly({(0, 0): other})
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            if not other:
                return BiPoly()
            return BiPoly._raw({k: c * other for k, c in self.terms.items()})
        out: dict = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + a * b
        return BiPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = BiPoly({(0, 0): 1})
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly({(0, 0): other})
        return self.terms == other.terms

    __hash__ = None

    def odd_part_second(self) -> "BiPoly":
        return BiPoly({k: c for k, c in self.terms.items() if k[1] % 2})

    def halve_second(self) -> "BiPoly":
        """(i, 2j) -> (i, j); the caller guarantees evenness."""
        return BiPoly({(i, j // 2): c for (i, j), c in self.terms.items()})

    def substitute(self, x, y, one):
        """Evaluate at commuting values x, y (with ``one`` the unit of their ring)."""
        xs, ys, total = {0: one}, {0: one}, None
        for (i, j), c in sorted(self.terms.items()):
            if i not in xs:
                xs[i] = _power_from(xs, x, i)
            if j not in ys:
                ys[j] = _power_from(ys, y, j)
            term = xs[i] * ys[j] * c
            total = term if total is None else total + term
        return total if total is not None else one * 0

    def __repr__(self):
        return " + ".join(f"{c}*x^{i}*y^{j}" for (i, j), c in sorted(self.terms.items())) or "0"


def _power_from(cache, x, k):
    top = max(cache)
    p = cache[top]
    for e in range(top + 1, k + 1):
        p = p * x
        cache[e] = p
    return cache[k]


H_AUX = BiPoly.var(0)
S_AUX = BiPoly.var(1)


def half_shift(e: int, sign: int) -> BiPoly:
    """H_e^sign = (S + e H - sign e) / 2, sign = +1 for the '+' case."""
    return (S_AUX + H_AUX * e - sign * e) * Fraction(1, 2)


def brace_of_aux(g: int, y: BiPoly, order: int) -> BiSeries:
    """P(exp(h y)) as a series in h over BiPoly: coefficient of h^n is y^n/n! sum_k c_k k^n."""
    P = build_P(g).P
    coeffs = {}
    yn = BiPoly({(0, 0): 1})
    for n in range(order + 1):
        moment = sum((c * k**n for k, c in P.terms.items()), Fraction(0))
        if moment:
            coeffs[(n, 0)] = yn * (moment / math.factorial(n))
        yn = yn * y
    return BiSeries(order, coeffs)


def _sinhc_ratio(g: int, y: BiPoly, order: int) -> BiSeries:
    """sinhc(x y) / sinhc(x) with x = h + h' P(exp(h y))."""
    x = BiSeries.monomial(order, 1, 0, BiPoly({(0, 0): 1})) + BiSeries.monomial(
        order, 0, 1, BiPoly({(0, 0): 1})
    ) * brace_of_aux(g, y, order)
    sc = sinhc_coeffs(order)
    return compose(sc, x * y) * invert_unit(compose(sc, x))


def aux_qbracket(g: int, y: BiPoly, order: int) -> BiSeries:
    """[y]_{QT^{y}} = y sinhc(x y) / sinhc(x) for an operator-valued argument y."""
    return _sinhc_ratio(g, y, order) * y


def even_to_hc(s: BiSeries, what: str) -> BiSeries:
    """Assert the S-odd part vanishes, then rewrite S^2 as C: result over BiPoly in (H, C)."""
    for key, c in s.coeffs.items():
        odd = c.odd_part_second()
        if odd:
            raise ConsistencyError(f"{what}: S-odd residue at h^{key[0]} h'^{key[1]}: {odd!r}")
    return s.map(BiPoly.halve_second)


def hc_to_pbw(p: BiPoly) -> PBWElement:
    out = PBWElement()
    for (i, j), c in p.terms.items():
        out = out + left_mul_xh(0, i, casimir_power(j)) * c
    return out


def hc_series_to_uhh(s: BiSeries) -> Uhh:
    return BiSeries(s.order, {k: hc_to_pbw(c) for k, c in s.coeffs.items()})


def substitute_hc(s: BiSeries, Hh: PBWElement, Cc: PBWElement) -> Uhh:
    """Evaluate an (H, C)-polynomial series at commuting PBW values."""
    return BiSeries(s.order, {k: c.substitute(Hh, Cc, ONE) for k, c in s.coeffs.items()})


# ----------------------------------------------------------------------


@dataclass
class UhhContext:
    """Precomputed data for one (g, N)."""

    g: int
    order: int
    F_hc: BiSeries = field(repr=False, default=None)
    _xp_powers: dict = field(default_factory=dict, repr=False)
    _mono_images: dict = field(default_factory=dict, repr=False)
    _rhs: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.g < 1:
            raise ValueError(f"g must be >= 1, got {self.g}")
        if self.order < 0:
            raise ValueError(f"truncation order must be >= 0, got {self.order}")
        N = self.order
        F = BiSeries.constant(N, BiPoly({(0, 0): 1}))
        for e in (1, -1):
            F = F * _sinhc_ratio(self.g, half_shift(e, 1), N)
        self.F_hc = even_to_hc(F, "F factor")
        F_pbw = hc_series_to_uhh(self.F_hc)
        self.psi_H = BiSeries.constant(N, HH)
        self.psi_C = BiSeries.constant(N, casimir_pbw())
        self.psi_Xm = BiSeries.constant(N, XM)
        self.psi_Xp = F_pbw * XP
        self.one = BiSeries.constant(N, ONE)

    def element(self, coeffs) -> Uhh:
        return BiSeries(self.order, coeffs)

    def relation_rhs(self, sign: int) -> BiSeries:
        """prod_e [H_e^sign]' as a series over BiPoly in (H, C)."""
        if sign not in self._rhs:
            N = self.order
            prod = BiSeries.constant(N, BiPoly({(0, 0): 1}))
            for e in (1, -1):
                prod = prod * aux_qbracket(self.g, half_shift(e, sign), N)
            self._rhs[sign] = even_to_hc(prod, f"relation {'+' if sign > 0 else '-'}")
        return self._rhs[sign]

    def xp_power(self, c: int) -> Uhh:
        if c not in self._xp_powers:
            self._xp_powers[c] = self.one if c == 0 else self.xp_power(c - 1) * self.psi_Xp
        return self._xp_powers[c]

    def psi_monomial(self, a: int, b: int, c: int) -> Uhh:
        """psi((X-)^a H^b (X+)^c) = (X-)^a H^b psi(X+)^c."""
        key = (a, b, c)
        if key not in self._mono_images:
            s = self.xp_power(c)
            self._mono_images[key] = s.map(lambda p: left_mul_xh(a, b, p))
        return self._mono_images[key]


@functools.lru_cache(maxsize=None)
def get_context(g: int, order: int) -> UhhContext:
    return UhhContext(g, order)


def psi_generators(g: int, order: int) -> dict:
    ctx = get_context(g, order)
    return {"H": ctx.psi_H, "C": ctx.psi_C, "X-": ctx.psi_Xm, "X+": ctx.psi_Xp}


def uhh_mul(x: Uhh, y: Uhh) -> Uhh:
    return x * y


def uhh_commutator(x: Uhh, y: Uhh) -> Uhh:
    return x * y - y * x


# ----------------------------------------------------------------------
# relation reports


@dataclass
class Residual:
    name: str
    value: BiSeries

    @property
    def ok(self) -> bool:
        return not self.value

    def first_nonzero(self):
        return self.value.first_nonzero()

    def summary(self) -> dict:
        out = {"check": self.name, "status": "pass" if self.ok else "fail"}
        if not self.ok:
            (n, m), c = self.first_nonzero()
            out["first_residual"] = {"h": n, "h'": m, "coeff": repr(c)}
        return out


def check_relations(
    ctx: UhhContext, Xp: Uhh, Xm: Uhh, Hh: PBWElement, Cc: PBWElement, opposite: bool = False, label: str = ""
) -> list:
    """Residuals of all defining relations for the images (X+, X-, H, C).

    H and C are given as order-zero PBW values.  With ``opposite`` the products
    are taken in the opposite algebra.
    """
    N = ctx.order
    mul: Callable = (lambda x, y: y * x) if opposite else (lambda x, y: x * y)
    H = BiSeries.constant(N, Hh)
    C = BiSeries.constant(N, Cc)
    com = lambda x, y: mul(x, y) - mul(y, x)
    res = [
        Residual(f"{label}[C,X+]", com(C, Xp)),
        Residual(f"{label}[C,X-]", com(C, Xm)),
        Residual(f"{label}[C,H]", com(C, H)),
        Residual(f"{label}[H,X+]-2X+", com(H, Xp) - Xp * 2),
        Residual(f"{label}[H,X-]+2X-", com(H, Xm) + Xm * 2),
    ]
    for sign, (a, b), tag in ((1, (Xp, Xm), "X+X-"), (-1, (Xm, Xp), "X-X+")):
        rhs = substitute_hc(ctx.relation_rhs(sign), Hh, Cc)
        res.append(Residual(f"{label}{tag}", mul(a, b) - rhs))
    return res


def verify_defining_relations(g: int, order: int) -> list:
    ctx = get_context(g, order)
    return check_relations(ctx, ctx.psi_Xp, ctx.psi_Xm, HH, casimir_pbw())


def check_symmetries(g: int, order: int) -> list:
    """omega: X+- -> X-+, H -> -H; tau: X+- -> X+-, H -> -H in the opposite algebra."""
    ctx = get_context(g, order)
    C = casimir_pbw()
    res = check_relations(ctx, ctx.psi_Xm, ctx.psi_Xp, -HH, C, label="omega:")
    res += check_relations(ctx, ctx.psi_Xp, ctx.psi_Xm, -HH, C, opposite=True, label="tau:")
    return res


# ----------------------------------------------------------------------
# abstract PBW coordinates


def pbw_coordinates(x: Uhh, ctx: UhhContext) -> BiSeries:
    """Coordinates of x in the topological basis (X-)^a H^b (X+)^c of U_{h,h'}.

    Triangular solve: psi(monomial) = monomial + (terms of positive order).
    """
    N = ctx.order
    residual = x
    coords = {}
    for k in range(N + 1):
        for n in range(k, -1, -1):
            key = (n, k - n)
            c = residual[key]
            if not c:
                continue
            coords[key] = c
            correction = {}
            for (a, b, cc), v in c.terms.items():
                for (n2, m2), p in ctx.psi_monomial(a, b, cc).coeffs.items():
                    if n + n2 + k - n + m2 <= N:
                        k2 = (n + n2, k - n + m2)
                        w = correction.get(k2)
                        correction[k2] = p * v if w is None else w + p * v
            residual = residual - BiSeries(N, correction)
        if any(residual[(n, k - n)] for n in range(k + 1)):
            raise ConsistencyError(f"triangular solve failed at order {k}")
    return BiSeries(N, coords)


def reconstruct(coords: BiSeries, ctx: UhhContext) -> Uhh:
    N = ctx.order
    out = {}
    for (n, m), c in coords.coeffs.items():
        for (a, b, cc), v in c.terms.items():
            for (n2, m2), p in ctx.psi_monomial(a, b, cc).coeffs.items():
                if n + m + n2 + m2 <= N:
                    k2 = (n + n2, m + m2)
                    w = out.get(k2)
                    out[k2] = p * v if w is None else w + p * v
    return BiSeries(N, out)


def casimir_coeffs(g: int, order: int) -> BiSeries:
    """The C_{n,m}: abstract coordinates of C."""
    ctx = get_context(g, order)
    return pbw_coordinates(ctx.psi_C, ctx)


def commutator_coeffs(g: int, order: int) -> BiSeries:
    """The alpha_{n,m}: abstract coordinates of [X+, X-]."""
    ctx = get_context(g, order)
    return pbw_coordinates(uhh_commutator(ctx.psi_Xp, ctx.psi_Xm), ctx)


def sinh_ratio_pbw(order: int, scale_h: int, scale_hp: int) -> BiSeries:
    """sinh(t H) / sinh(t) with t = scale_h h + scale_hp h', as a series of H-polynomials."""
    N = order
    t = BiSeries(N, {(1, 0): BiPoly({(0, 0): scale_h}), (0, 1): BiPoly({(0, 0): scale_hp})})
    sc = sinhc_coeffs(N)
    ratio = compose(sc, t * H_AUX) * invert_unit(compose(sc, t)) * H_AUX
    return ratio.map(lambda p: PBWElement.h_poly([p.terms.get((i, 0), 0) for i in range(max(i for i, _ in p.terms) + 1)]))


def harish_chandra_delta(x: Uhh, ctx: UhhContext) -> BiSeries:
    """Keep the pure-H coordinates of x and shift H -> H - 1.

    Returns a series whose coefficients are PBW polynomials in H.
    """
    coords = pbw_coordinates(x, ctx)
    out = {}
    for key, c in coords.coeffs.items():
        hp = c.h_part()
        if hp:
            deg = max(hp)
            poly = [0] * (deg + 1)
            for b, v in hp.items():
                for i in range(b + 1):
                    poly[i] += v * math.comb(b, i) * (-1) ** (b - i)
            out[key] = PBWElement.h_poly(poly)
    return BiSeries(ctx.order, out)
