"""Lattice form, specialization at Q = eps and the Langlands-dual modules.

Specialized entries are h'-series over Q(zeta_2g).  The dual operators live on
the span of the m_i whose weight is divisible by g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import LaurentPoly, cyclotomic_field, eval_at_eps, q_factorial_at
from .modules import (
    Character,
    ModuleError,
    WeightModule,
    build_module,
    character,
    commutator,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
)
from .qnumbers import ConsistencyError, classical_qnum_h, eps_qnum_series, interp_qnum, qnum_lattice_route
from .series import LaurentT, USeries, invert_unit, sinhc_coeffs


class DualityError(AssertionError):
    """A duality statement failed on a concrete module."""


def _lattice_mul(x: tuple, y: tuple, order: int) -> tuple:
    out = [LaurentPoly() for _ in range(order + 1)]
    for i, a in enumerate(x):
        if not a:
            continue
        for j, b in enumerate(y[: order + 1 - i]):
            if b:
                out[i + j] = out[i + j] + a * b
    return tuple(out)


@dataclass
class ALatticeModule:
    """X+ entries in A[[h']], kept as the two bracket factors [j]' and [n-j+1]'.

    Each factor is a tuple of LaurentPoly(Q): factor[r] multiplies h'^r.
    """

    n: int
    g: int
    order: int
    size: int
    verma: bool
    Xp: dict  # (j-1, j) -> (left factor, right factor)

    @property
    def weights(self):
        return [self.n - 2 * j for j in range(self.size)]

    def entry(self, key) -> tuple:
        """The product of the two factors as a single element of A[[h']]."""
        left, right = self.Xp[key]
        return _lattice_mul(left, right, self.order)


def lattice_form(mod: WeightModule, order: int | None = None) -> ALatticeModule:
    """Rewrite the X+ action through the geometric-sum brackets.

    ``order`` is the h'-order kept (default: the module's order).  Each
    factor's expansion under Q = exp(h) is compared with the series bracket
    and the product with the module's entry.
    """
    if mod.kind != "interpolating":
        raise ModuleError(f"lattice form needs an interpolating module, got {mod.kind!r}")
    order = mod.order if order is None else order
    Xp = {}
    for j in range(1, mod.size):
        factors = (qnum_lattice_route(j, mod.g, order), qnum_lattice_route(mod.n - j + 1, mod.g, order))
        for f in factors:
            for L in f:
                if not L.coefficients_rational():
                    raise ConsistencyError(f"lattice entry at j={j} leaves Q[Q^-1, Q]")
        a = interp_qnum(j, mod.g, mod.order)
        b = interp_qnum(mod.n - j + 1, mod.g, mod.order)
        series = mod.Xp.get((j - 1, j))
        expanded = a.series * b.series
        if (series is None and expanded) or (series is not None and expanded != series):
            raise ConsistencyError(f"lattice entry at j={j} does not re-expand to the series entry")
        if any(factors[0]) and any(factors[1]):
            Xp[(j - 1, j)] = factors
    return ALatticeModule(mod.n, mod.g, order, mod.size, mod.verma, Xp)


@dataclass
class SpecializedModule:
    n: int
    g: int
    order: int
    size: int
    verma: bool
    Xp: dict
    Xm: dict
    H: dict
    QH: dict  # diagonal action of Q^H at Q = eps

    @property
    def weights(self):
        return [self.n - 2 * j for j in range(self.size)]

    @property
    def field(self):
        return cyclotomic_field(2 * self.g)

    def one(self) -> USeries:
        return USeries.constant(self.order, self.field.one(), "h'")


def specialize_eps(lat: ALatticeModule) -> SpecializedModule:
    F = cyclotomic_field(2 * lat.g)
    one = USeries.constant(lat.order, F.one(), "h'")
    Xp = {}
    for k, factors in lat.Xp.items():
        left, right = (USeries(lat.order, {r: eval_at_eps(L, lat.g) for r, L in enumerate(f)}, "h'") for f in factors)
        s = left * right
        if s:
            Xp[k] = s
    Xm = {(j + 1, j): one for j in range(lat.size - 1)}
    H = {(j, j): one * (lat.n - 2 * j) for j in range(lat.size) if lat.n != 2 * j}
    QH = {j: F.zeta_power(lat.n - 2 * j) for j in range(lat.size)}
    return SpecializedModule(lat.n, lat.g, lat.order, lat.size, lat.verma, Xp, Xm, H, QH)


def specialized_module(n: int, g: int, order: int, verma: bool = False, window: int | None = None) -> SpecializedModule:
    mod = build_module("interpolating", n, g, order, window=window, verma=verma)
    return specialize_eps(lattice_form(mod))


def expected_specialized_entry(n: int, g: int, j: int, order: int) -> USeries:
    """The X+ m_j entry predicted by the three-case table (g >= 2, n in g Z)."""
    if g < 2:
        raise ValueError("the three-case table distinguishes j mod g and needs g >= 2")
    if n % g:
        raise ValueError(f"n={n} is not a multiple of g={g}")
    left_deformed = j % g == 0
    right_deformed = j % g == 1
    return eps_qnum_series(j, g, order, left_deformed) * eps_qnum_series(n - j + 1, g, order, right_deformed)


def check_specialization_table(n: int, g: int, order: int, verma: bool = False, window: int | None = None) -> dict:
    """Column j -> residual between specialized entries and the case table (empty dict if all match)."""
    spec = specialized_module(n, g, order, verma, window)
    F = spec.field
    bad = {}
    for j in range(1, spec.size):
        got = spec.Xp.get((j - 1, j), USeries(order, {}, "h'"))
        diff = got - expected_specialized_entry(n, g, j, order)
        if diff:
            bad[j] = diff
    sign = (-1) ** (n // g)
    for j, v in spec.QH.items():
        if v != F.zeta_power(-2 * j) * sign:
            bad[("Q^H", j)] = v
    return bad


# ----------------------------------------------------------------------
# dual operators


def dual_step(g: int) -> int:
    return g // 2 if g % 2 == 0 else g


def _t_series(order: int, F, base_power: int, scale: int, sign: int) -> dict:
    """eps^(base_power) exp(scale h') as coefficients, multiplied by ``sign``."""
    z = F.zeta_power(base_power)
    return {r: z * Fraction(sign * scale**r, math.factorial(r)) for r in range(order + 1)}


def raising_prefactor(g: int, order: int) -> LaurentT:
    """([g-1]!_eps)^-2 (eps T - eps^-1 T^-1)^2 (T^g - T^-g)^-2 as a Laurent series in h'."""
    F = cyclotomic_field(2 * g)
    num = _t_series(order, F, 1, 1, 1)
    for r, c in _t_series(order, F, -1, -1, -1).items():
        num[r] = num[r] + c
    num_t = LaurentT(num, order)
    # T^g - T^-g = h' * 2g sinhc(g h')
    sc = sinhc_coeffs(order)
    den = LaurentT({r + 1: F.one() * (2 * g * c * g**r) for r, c in enumerate(sc) if c}, order + 1)
    fact = q_factorial_at(F, g - 1)
    return num_t * num_t * den.inverse() * den.inverse() * fact.inverse() * fact.inverse()


@dataclass
class DualModule:
    n: int
    g: int
    order: int
    verma: bool
    indices: list  # positions in the specialized module
    weights: list  # LH eigenvalues
    LXp: dict
    LXm: dict
    LH: dict
    valid: int  # sub-basis positions < valid are away from the window edge
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def field(self):
        return cyclotomic_field(2 * self.g)

    def one(self) -> USeries:
        return USeries.constant(self.order, self.field.one(), "h'")


def _series_to_laurent(s: USeries) -> LaurentT:
    return LaurentT(dict(s.coeffs), s.order)


def dual_operators(spec: SpecializedModule, order: int | None = None) -> DualModule:
    """LX- = (X-)^g, LH = H/g and the renormalized LX+ on the weights divisible by g.

    ``spec`` should carry two more h'-orders than ``order`` (default spec.order - 2)
    so the h'^-2 in the prefactor still leaves ``order`` exact orders.
    """
    g, n = spec.g, spec.n
    if n % g:
        raise ModuleError(f"dual operators need n in g Z, got n={n}, g={g}")
    order = spec.order - 2 if order is None else order
    if order < 0 or spec.order < order + 2:
        raise ModuleError(f"specialized module has h'-order {spec.order}, need {order + 2}")
    step = dual_step(g)
    idx = [i for i in range(spec.size) if i % step == 0]
    pos = {i: p for p, i in enumerate(idx)}
    weights = []
    for i in idx:
        w = n - 2 * i
        if w % g:
            raise DualityError(f"weight {w} at m_{i} is not divisible by g={g}")
        weights.append(w // g)
    one = USeries.constant(order, spec.field.one(), "h'")
    ident = {(j, j): spec.one() for j in range(spec.size)}
    Xp_g = ident
    Xm_g = ident
    for _ in range(g):
        Xp_g = mat_mul(spec.Xp, Xp_g)
        Xm_g = mat_mul(spec.Xm, Xm_g)
    pref = raising_prefactor(g, spec.order)
    LXp, LXm, LH = {}, {}, {}
    for (i, j), v in Xp_g.items():
        if i in pos and j in pos:
            t = pref * _series_to_laurent(v)
            if t.has_negative_powers():
                raise DualityError(f"LX+ m_{j} has negative h'-powers: {t!r}")
            reg = t.regular_part(order)
            if reg:
                LXp[(pos[i], pos[j])] = reg
    for (i, j), v in Xm_g.items():
        if i in pos and j in pos:
            LXm[(pos[i], pos[j])] = v.truncate(order)
    for p, w in enumerate(weights):
        if w:
            LH[(p, p)] = one * w
    valid = len(idx)
    if spec.verma:
        valid = len([i for i in idx if i <= spec.size - 1 - g])
    return DualModule(n, g, order, spec.verma, idx, weights, LXp, LXm, LH, valid)


def dual_module(n: int, g: int, order: int, verma: bool = False, window: int | None = None) -> DualModule:
    return dual_operators(specialized_module(n, g, order + 2, verma, window), order)


# ----------------------------------------------------------------------


@dataclass
class DualityReport:
    n: int
    g: int
    order: int
    verma: bool
    residuals: dict = field(default_factory=dict)
    signed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.residuals.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.residuals.items() if v}


def commutator_sign(w: int, g: int) -> int:
    """(-1)^(g(w+1)) for dual weight w: the sign actually carried by [LX+, LX-] on weight w."""
    return -1 if (g * (w + 1)) % 2 else 1


def _columns(M: dict, cols) -> dict:
    out = {}
    for (i, j), v in M.items():
        if j in cols and v:
            out.setdefault(j, []).append((i, v))
    return out


def check_duality_identities(n: int, g: int, order: int, verma: bool = False, window: int | None = None) -> DualityReport:
    """The commutator identity for (X+-)^g, [LH, LX+-] = +-2 LX+-, [LX+, LX-] = [LH]_{T^g}."""
    rep = DualityReport(n, g, order, verma)
    spec = specialized_module(n, g, order + 2, verma, window)
    D = dual_operators(spec, order)
    F = spec.field
    cols = set(range(D.valid))

    # (i) on the specialized module restricted to the dual sub-basis, at h'-order order
    spec_n = specialize_eps(lattice_form(build_module("interpolating", n, g, order, window=window, verma=verma)))
    ident = {(j, j): spec_n.one() for j in range(spec_n.size)}
    Xp_g, Xm_g = ident, ident
    for _ in range(g):
        Xp_g = mat_mul(spec_n.Xp, Xp_g)
        Xm_g = mat_mul(spec_n.Xm, Xm_g)
    comm = commutator(Xp_g, Xm_g)
    tt = USeries(order, _t_series(order, F, 1, 1, 1), "h'") + USeries(order, _t_series(order, F, -1, -1, -1), "h'")
    fact = q_factorial_at(F, g - 1)
    tg = USeries(order, {r: F.one() * Fraction(2 * g**r, math.factorial(r)) for r in range(1, order + 1, 2)}, "h'")
    powers, signed_powers = {}, {}
    for p in cols:
        i = D.indices[p]
        w = spec_n.weights[i]
        tw = USeries(order, {r: F.one() * Fraction(2 * w**r, math.factorial(r)) for r in range(1, order + 1, 2)}, "h'")
        lhs = tt * tt * comm.get((i, i), USeries(order, {}, "h'"))
        rhs = tg * tw * (fact * fact)
        if lhs - rhs:
            powers[p] = lhs - rhs
        if lhs - rhs * commutator_sign(w // g, g):
            signed_powers[p] = lhs - rhs * commutator_sign(w // g, g)
        off = [k for k, v in comm.items() if k[1] == i and k[0] != i and v]
        if off:
            powers[(p, "offdiag")] = off
    rep.residuals["[X+^g,X-^g]"] = powers

    # (ii), (iii)
    rep.residuals["[LH,LX+]-2LX+"] = _columns(mat_sub(commutator(D.LH, D.LXp), mat_scale(D.LXp, 2)), cols)
    rep.residuals["[LH,LX-]+2LX-"] = _columns(mat_add(commutator(D.LH, D.LXm), mat_scale(D.LXm, 2)), cols)
    target = {}
    for p in cols:
        q = classical_qnum_h(D.weights[p], order, "h'", scale=g)
        if q:
            target[(p, p)] = q
    rep.residuals["[LX+,LX-]-[LH]"] = _columns(mat_sub(commutator(D.LXp, D.LXm), target), cols)
    # diagnostics: the same two identities with the sign (-1)^(g(w+1))
    rep.signed["[X+^g,X-^g]"] = signed_powers
    signed_target = {k: v * commutator_sign(D.weights[k[0]], g) for k, v in target.items()}
    rep.signed["[LX+,LX-]-s[LH]"] = _columns(mat_sub(commutator(D.LXp, D.LXm), signed_target), cols)

    # hypotheses of the quotient: Q^(2H) = 1, Q^(2 sqrtC) + Q^(-2 sqrtC) = eps^2 + eps^-2
    hyp = {}
    casimir_side = F.zeta_power(2 * (n + 1)) + F.zeta_power(-2 * (n + 1))
    for p in range(D.size):
        i = D.indices[p]
        if spec.QH[i] ** 2 != 1:
            hyp[(p, "Q^2H")] = spec.QH[i] ** 2
        if casimir_side != F.zeta_power(2) + F.zeta_power(-2):
            hyp[(p, "Q^2sqrtC")] = casimir_side
    rep.residuals["hypotheses"] = hyp
    return rep


# ----------------------------------------------------------------------
# decomposition


def _apply(M: dict, v: dict) -> dict:
    out: dict = {}
    for (i, j), a in M.items():
        if j in v:
            w = out.get(i)
            x = a * v[j]
            w = x if w is None else w + x
            if w:
                out[i] = w
            else:
                out.pop(i, None)
    return out


def _is_unit(s) -> bool:
    return bool(s.constant_term())


def _vec_sub(u: dict, v: dict, c=None) -> dict:
    out = dict(u)
    for k, x in v.items():
        y = x * c if c is not None else x
        w = out.get(k)
        w = -y if w is None else w - y
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def row_reduce(vectors: list, coords: list) -> tuple:
    """Echelon form over a truncated series ring with unit pivots.

    Returns (rank, residue) where ``residue`` lists the vectors that reduced to
    a nonzero remainder without a unit pivot (must be empty for a clean rank).
    """
    pivots = []  # (coord, vector)
    residue = []
    for v in vectors:
        v = dict(v)
        for k, pv in pivots:
            if k in v:
                v = _vec_sub(v, pv, v[k] * invert_unit(pv[k]))
        if not v:
            continue
        k = next((k for k in coords if k in v and _is_unit(v[k])), None)
        if k is None:
            residue.append(v)
            continue
        pivots.append((k, v))
    return len(pivots), residue


def kernel_vectors(M: dict, source: list, target: list, one) -> list:
    """Basis of ker M restricted to span(source) -> span(target), by unit-pivot elimination.

    Every column pivot must be a unit; the leftover block must vanish exactly.
    """
    rows = [{s: M[(t, s)] for s in source if (t, s) in M} for t in target]
    rows = [r for r in rows if r]
    pivot_cols = []
    reduced = []
    for r in rows:
        for pc, pr in reduced:
            if pc in r:
                r = _vec_sub(r, pr, r[pc] * invert_unit(pr[pc]))
        if not r:
            continue
        pc = next((c for c in source if c in r and _is_unit(r[c])), None)
        if pc is None:
            raise DualityError(f"no unit pivot while computing a kernel; leftover row {r!r}")
        # clear pc from earlier rows
        new_reduced = []
        for qc, qr in reduced:
            if pc in qr:
                qr = _vec_sub(qr, r, qr[pc] * invert_unit(r[pc]))
            new_reduced.append((qc, qr))
        reduced = new_reduced + [(pc, r)]
        pivot_cols.append(pc)
    free = [c for c in source if c not in pivot_cols]
    basis = []
    for f in free:
        v = {f: one}
        for pc, pr in reduced:
            if f in pr:
                v[pc] = -(pr[f] * invert_unit(pr[pc]))
        basis.append(v)
    for b in basis:
        if _apply_rows(M, b, target):
            raise DualityError("kernel vector does not annihilate")
    return basis


def _apply_rows(M, v, target):
    out = _apply(M, v)
    return {k: x for k, x in out.items() if k in target and x}


@dataclass
class DualComponent:
    highest_weight: int
    vectors: list  # w_k = LX-^k v, as sparse vectors over the dual basis
    target: WeightModule
    intertwiner_failures: list = field(default_factory=list)

    @property
    def intertwines(self) -> bool:
        return not self.intertwiner_failures

    def character(self) -> Character:
        return Character.from_weights(self.highest_weight - 2 * k for k in range(len(self.vectors)))


def decompose_dual(n: int, g: int, order: int, verma: bool = False, window: int | None = None) -> list:
    """Split the dual module into LX- strings of highest-weight vectors.

    Each string is matched against the U_{g h'} module of the same highest
    weight (finite or Verma) through t_k -> LX-^k v; the map is checked to
    commute with LX+, LX- and LH.
    """
    D = dual_module(n, g, order, verma, window)
    return decompose_module(D, g, order)


def decompose_module(D: DualModule, r: int, order: int) -> list:
    by_weight: dict = {}
    for p, w in enumerate(D.weights[: D.valid] if D.verma else D.weights):
        by_weight.setdefault(w, []).append(p)
    all_pos = {p: w for p, w in enumerate(D.weights)}
    generated: dict = {}
    comps = []
    for w in sorted(by_weight, reverse=True):
        space = by_weight[w]
        have = generated.get(w, [])
        rank, residue = row_reduce(have, space)
        if residue:
            raise DualityError(f"generated vectors at weight {w} are not in unit echelon form")
        if rank < len(space):
            up = [p for p, ww in all_pos.items() if ww == w + 2]
            kernel = kernel_vectors(D.LXp, space, up, D.one())
            chosen = []
            for v in kernel:
                k2, res2 = row_reduce(have + chosen + [v], space)
                if not res2 and k2 > len(have) + len(chosen):
                    chosen.append(v)
                if len(have) + len(chosen) == len(space):
                    break
            if len(have) + len(chosen) < len(space):
                raise DualityError(f"highest-weight vectors do not exhaust weight {w}")
            for v in chosen:
                comp = _string(D, v, w, r, order)
                comps.append(comp)
                for k, vec in enumerate(comp.vectors):
                    generated.setdefault(w - 2 * k, []).append(vec)
    # directness and exhaustion
    for w, space in by_weight.items():
        rank, residue = row_reduce(generated.get(w, []), space)
        if residue or rank != len(space) or len(generated.get(w, [])) != len(space):
            raise DualityError(f"strings are not a direct sum exhausting weight {w}")
    return comps


def _string(D: DualModule, v: dict, w: int, r: int, order: int) -> DualComponent:
    vectors = [v]
    limit = D.valid if D.verma else D.size
    while True:
        nxt = _apply(D.LXm, vectors[-1])
        nxt = {k: x for k, x in nxt.items() if x}
        if not nxt:
            break
        if D.verma and any(p >= limit for p in nxt):
            break
        vectors.append(nxt)
    finite = not D.verma
    if finite and len(vectors) != w + 1:
        raise DualityError(f"string from weight {w} has length {len(vectors)}, expected {w + 1}")
    if finite:
        target = build_module("one-param-rh'", w, 1, order, r=r)
    else:
        target = build_module("one-param-rh'", w, 1, order, window=len(vectors) - 1, r=r, verma=True)
    return DualComponent(w, vectors, target, _check_intertwiner(D, vectors, target))


def _check_intertwiner(D: DualModule, vectors: list, target: WeightModule) -> list:
    """Phi(t_k) = vectors[k]; compare Phi(X t_k) with LX Phi(t_k) for X in X+, X-, H.

    Returns the list of (operator, k) where the two sides differ.
    """
    bad = []
    n_check = len(vectors)
    for name, Tm, Dm in (("X+", target.Xp, D.LXp), ("X-", target.Xm, D.LXm), ("H", target.H, D.LH)):
        for k in range(n_check):
            if D.verma and name == "X-" and k == n_check - 1:
                continue
            image = {}
            for (i, j), c in Tm.items():
                if j == k and i < n_check:
                    image = _vec_sub(image, vectors[i], -c)
            direct = {p: x for p, x in _apply(Dm, vectors[k]).items() if x}
            diff = _vec_sub(direct, image)
            if any(diff.values()):
                bad.append((name, k))
    return bad


# ----------------------------------------------------------------------
# characters and limits


def dual_character(D: DualModule) -> Character:
    return Character.from_weights(D.weights)


def char_duality(n: int, g: int, order: int = 2) -> dict:
    """Folded characters against dual characters; all entries must be True."""
    if n < 0 or n % g:
        raise ModuleError(f"character duality needs n in g N, got n={n}, g={g}")
    chi_h = character(build_module("one-param-h", n, g, order))
    D = dual_module(n, g, order)
    chi_dual = dual_character(D)
    comps = decompose_module(D, g, order)
    summed = Character()
    for c in comps:
        summed = summed + c.character()
    limit = dual_limit(D)
    chi_limit = Character.from_weights(limit.weights)
    chi_classical = character(build_module("classical", n))
    return {
        "folded == dual": chi_h.fold(g) == chi_dual,
        "components sum to dual": summed == chi_dual,
        "classical limit": chi_limit == chi_classical.fold(g),
        "folded": chi_h.fold(g),
        "dual": chi_dual,
    }


def dual_limit(D: DualModule) -> DualModule:
    """h' = 0 in every entry; failed sl2 relations are listed in ``meta``."""
    cut = lambda M: {k: v.truncate(0) for k, v in M.items() if v.constant_term()}
    L = DualModule(D.n, D.g, 0, D.verma, D.indices, D.weights, cut(D.LXp), cut(D.LXm), cut(D.LH), D.valid)
    cols = set(range(L.valid))
    checks = {
        "[X+,X-]-H": _columns(mat_sub(commutator(L.LXp, L.LXm), L.LH), cols),
        "[H,X+]-2X+": _columns(mat_sub(commutator(L.LH, L.LXp), mat_scale(L.LXp, 2)), cols),
        "[H,X-]+2X-": _columns(mat_add(commutator(L.LH, L.LXm), mat_scale(L.LXm, 2)), cols),
    }
    L.meta = {k: v for k, v in checks.items() if v}
    return L


def decompose_limit(D: DualModule) -> list:
    """Highest weights of the classical limit's string decomposition."""
    L = dual_limit(D)
    return decompose_module(L, 1, 0)
