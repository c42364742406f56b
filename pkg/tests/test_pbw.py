from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from iqg.pbw import HH, ONE, XM, XP, PBWElement, casimir_alternative, casimir_pbw, casimir_power, commutator, pbw_mul

WINDOW = 12


def act(x: PBWElement, n: int, vec: dict) -> dict:
    """Act on the classical Verma module M(n): X- v_j = v_(j+1), X+ v_j = j(n-j+1) v_(j-1)."""
    out: dict = {}
    for (a, b, c), coef in x.terms.items():
        for j, v in vec.items():
            if c > j:
                continue
            w = v * coef
            k = j
            for _ in range(c):
                w *= k * (n - k + 1)
                k -= 1
            w *= (n - 2 * k) ** b
            k += a
            if w:
                out[k] = out.get(k, 0) + w
    return {k: v for k, v in out.items() if v}


monomials = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)).filter(lambda m: sum(m) <= 4)
elements = st.dictionaries(monomials, st.integers(-3, 3).filter(bool), min_size=1, max_size=3).map(PBWElement)


def test_defining_commutators():
    assert pbw_mul(XP, XM) == pbw_mul(XM, XP) + HH
    assert pbw_mul(HH, XP) == pbw_mul(XP, HH) + XP * 2
    assert commutator(HH, XM) == XM * -2
    assert pbw_mul(ONE, XP) == XP


def test_casimir_forms_agree():
    assert casimir_pbw() == casimir_alternative()
    # C = 4 X+ X- + (H - 1)^2
    assert casimir_pbw() == pbw_mul(XP, XM) * 4 + pbw_mul(HH - ONE, HH - ONE)


def test_casimir_central():
    C = casimir_pbw()
    for x in (XP, XM, HH):
        assert not commutator(C, x)
    assert not commutator(casimir_power(2), XP)


def test_casimir_on_l2():
    # L(2) = quotient of M(2) by v_3; C is the scalar 9 on v_0, v_1, v_2
    for j in range(3):
        assert act(casimir_pbw(), 2, {j: 1}) == {j: 9}


def test_power_of_casimir():
    C = casimir_pbw()
    assert casimir_power(3) == pbw_mul(C, pbw_mul(C, C))


@settings(max_examples=200)
@given(elements, elements, st.integers(0, 6), st.integers(0, 4))
def test_product_matches_matrix_action(x, y, n, j):
    lhs = act(pbw_mul(x, y), n, {j: 1})
    rhs = act(x, n, act(y, n, {j: 1}))
    assert all(k <= WINDOW for k in rhs)
    assert lhs == rhs


@given(elements, elements, elements)
def test_associativity(x, y, z):
    assert pbw_mul(pbw_mul(x, y), z) == pbw_mul(x, pbw_mul(y, z))


@given(elements, elements, st.integers(0, 6))
def test_associativity_on_modules(x, y, n):
    z = PBWElement({(1, 1, 1): Fraction(1, 2), (0, 2, 0): 1})
    xyz = pbw_mul(pbw_mul(x, y), z)
    for j in range(4):
        assert act(xyz, n, {j: 1}) == act(x, n, act(y, n, act(z, n, {j: 1})))


def test_balanced_and_h_part():
    C = casimir_pbw()
    assert C.is_balanced()
    assert C.h_part() == {0: 1, 1: 2, 2: 1}
    assert not XP.is_balanced()
