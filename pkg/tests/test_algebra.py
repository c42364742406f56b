from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from iqg.algebra import (
    BiPoly,
    H_AUX,
    S_AUX,
    casimir_coeffs,
    check_relations,
    check_symmetries,
    commutator_coeffs,
    even_to_hc,
    get_context,
    harish_chandra_delta,
    pbw_coordinates,
    reconstruct,
    sinh_ratio_pbw,
    substitute_hc,
    uhh_commutator,
    verify_defining_relations,
)
from iqg.pbw import HH, ONE, XM, XP, PBWElement, casimir_pbw, pbw_mul
from iqg.qnumbers import ConsistencyError
from iqg.series import BiSeries


def sympy_h_coeffs(expr, t, order):
    s = sp.series(expr, t, 0, order + 1).removeO()
    return [sp.expand(sp.cancel(s.coeff(t, k))) for k in range(order + 1)]


def pbw_from_h_poly(poly, H):
    p = sp.Poly(poly, H)
    return PBWElement({(0, i, 0): Fraction(int(c.p), int(c.q)) for (i,), c in zip(p.monoms(), p.coeffs())})


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_defining_relations(g):
    res = verify_defining_relations(g, 5)
    assert len(res) == 7
    assert all(r.ok for r in res), [r.summary() for r in res if not r.ok]


@pytest.mark.parametrize("g", [1, 2, 3])
def test_symmetries(g):
    res = check_symmetries(g, 4)
    assert {r.name.split(":")[0] for r in res} == {"omega", "tau"}
    assert all(r.ok for r in res)


def test_wrong_images_are_caught():
    ctx = get_context(2, 4)
    res = check_relations(ctx, ctx.psi_Xp * 2, ctx.psi_Xm, HH, casimir_pbw())
    assert not all(r.ok for r in res)
    # X+ of g = 3 does not satisfy the g = 2 relations
    other = get_context(3, 4)
    res = check_relations(ctx, other.psi_Xp, ctx.psi_Xm, HH, casimir_pbw())
    bad = [r for r in res if not r.ok]
    assert bad and bad[0].summary()["status"] == "fail"


def test_omega_twice_is_identity():
    ctx = get_context(2, 3)
    swap = lambda t: (t[1], t[0], -t[2])
    gens = (ctx.psi_Xp, ctx.psi_Xm, HH)
    assert swap(swap(gens))[0] is gens[0] and swap(swap(gens))[2] == HH


def test_psi_images_mod_h():
    for g in (1, 2, 3):
        ctx = get_context(g, 4)
        assert ctx.psi_Xp[(0, 0)] == XP
        assert ctx.psi_Xm == BiSeries.constant(4, XM)
        assert ctx.F_hc[(0, 0)] == BiPoly({(0, 0): 1})


@pytest.mark.parametrize("g", [1, 2, 3])
def test_F_factor_at_hp_zero(g):
    N = 6
    h, H, s, C = sp.symbols("h H s C")
    expr = 2 * (sp.cosh(h * (H - 1)) - sp.cosh(h * s)) / (((H - 1) ** 2 - s**2) * sp.sinh(h) ** 2)
    coeffs = sympy_h_coeffs(expr, h, N)
    F = get_context(g, N).F_hc
    for n, c in enumerate(coeffs):
        c = sp.expand(c.subs(s, sp.sqrt(C)))
        expected = {}
        if c != 0:
            poly = sp.Poly(c, H, C)
            expected = {(int(i), int(j)): Fraction(int(v.p), int(v.q)) for (i, j), v in zip(poly.monoms(), poly.coeffs())}
        assert getattr(F[(n, 0)], "terms", {}) == expected


def test_odd_part_rejected():
    s = BiSeries.constant(2, S_AUX * H_AUX)
    with pytest.raises(ConsistencyError):
        even_to_hc(s, "test")
    assert even_to_hc(BiSeries.constant(2, S_AUX * S_AUX), "test")[(0, 0)] == BiPoly({(0, 1): 1})


def test_classical_product_at_order_zero():
    ctx = get_context(2, 3)
    rhs = substitute_hc(ctx.relation_rhs(1), HH, casimir_pbw())
    # X+ X- = C/4 - (H - 1)^2 / 4
    assert rhs[(0, 0)] == casimir_pbw() * Fraction(1, 4) - pbw_mul(HH - ONE, HH - ONE) * Fraction(1, 4)
    assert rhs[(0, 0)] == pbw_mul(XP, XM)


def test_basic_commutators():
    ctx = get_context(3, 4)
    assert uhh_commutator(ctx.psi_H, ctx.psi_Xp) == ctx.psi_Xp * 2
    assert not uhh_commutator(ctx.psi_C, ctx.psi_Xm)
    assert ctx.one * ctx.psi_Xp == ctx.psi_Xp


def test_g1_closed_form():
    N = 6
    t, H = sp.symbols("t H")
    series = sympy_h_coeffs(sp.sinh(t * H) / sp.sinh(t), t, N)
    # t = h + h': coefficient of h^n h'^m is binom(n + m, n) times that of t^(n+m)
    import math

    expected = BiSeries(N, {(n, k - n): pbw_from_h_poly(series[k], H) * math.comb(k, n) for k in range(N + 1) for n in range(k + 1) if series[k] != 0})
    assert commutator_coeffs(1, N) == expected


@pytest.mark.parametrize("g", [2, 3])
def test_alpha_slices(g):
    N = 5
    t, H = sp.symbols("t H")
    series = sympy_h_coeffs(sp.sinh(t * H) / sp.sinh(t), t, N)
    alpha = commutator_coeffs(g, N)
    for k in range(N + 1):
        exp_ = pbw_from_h_poly(series[k], H) if series[k] != 0 else PBWElement()
        assert alpha[(k, 0)] == exp_
        assert alpha[(0, k)] == exp_
    assert alpha[(0, 0)] == HH
    assert alpha.at_hp_zero() == sinh_ratio_pbw(N, 1, 0).at_hp_zero()


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_coefficients_balanced(g):
    N = 4
    assert all(c.is_balanced() for c in commutator_coeffs(g, N).coeffs.values())
    cas = casimir_coeffs(g, N)
    assert all(c.is_balanced() for c in cas.coeffs.values())
    assert cas[(0, 0)] == pbw_mul(XP, XM) * 4 + pbw_mul(HH - ONE, HH - ONE)


def test_frozen_alpha_entries():
    # sinh(h' H)/sinh(h') = H + h'^2 (H^3 - H)/6 + ...
    alpha = commutator_coeffs(2, 4)
    assert alpha[(0, 2)] == PBWElement.h_poly([0, Fraction(-1, 6), 0, Fraction(1, 6)])
    assert not alpha[(1, 0)] and not alpha[(0, 1)]


def test_coordinates_of_generators():
    ctx = get_context(2, 4)
    assert pbw_coordinates(ctx.psi_Xm, ctx) == BiSeries.constant(4, XM)
    assert pbw_coordinates(ctx.psi_Xp, ctx) == BiSeries.constant(4, XP)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_harish_chandra(g):
    N = 6
    ctx = get_context(g, N)
    assert harish_chandra_delta(ctx.psi_C, ctx) == BiSeries.constant(N, pbw_mul(HH, HH))
    assert harish_chandra_delta(ctx.one, ctx) == BiSeries.constant(N, ONE)
    assert harish_chandra_delta(ctx.psi_H, ctx) == BiSeries.constant(N, HH - ONE)


small_monos = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
pbw_small = st.dictionaries(small_monos, st.integers(-2, 2).filter(bool), min_size=1, max_size=2).map(PBWElement)
orders = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda k: sum(k) <= 3)
coords = st.dictionaries(orders, pbw_small, min_size=1, max_size=3)


@settings(max_examples=50)
@given(coords, st.sampled_from([1, 2, 3]))
def test_coordinates_round_trip(c, g):
    ctx = get_context(g, 3)
    a = BiSeries(3, c)
    x = reconstruct(a, ctx)
    assert pbw_coordinates(x, ctx) == a
    assert reconstruct(pbw_coordinates(x, ctx), ctx) == x


@settings(max_examples=25)
@given(coords, st.sampled_from([1, 2, 3]))
def test_casimir_central_on_random_elements(c, g):
    ctx = get_context(g, 3)
    x = reconstruct(BiSeries(3, c), ctx)
    assert not uhh_commutator(ctx.psi_C, x)
    assert not uhh_commutator(ctx.psi_C, x * ctx.psi_Xp)
