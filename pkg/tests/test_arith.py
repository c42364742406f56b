from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iqg.arith import (
    CycloNumber,
    LaurentPoly,
    cyclotomic_field,
    cyclotomic_poly,
    eval_at_eps,
    poly_divmod,
    q_factorial_at,
    q_number_at,
)

small_fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def cyclo(m):
    F = cyclotomic_field(m)
    return st.lists(small_fracs, min_size=F.degree, max_size=F.degree).map(lambda cs: CycloNumber(F, cs))


def laurent(coeffs=small_fracs):
    return st.dictionaries(st.integers(-6, 6), coeffs, max_size=5).map(LaurentPoly)


@pytest.mark.parametrize(
    "m, phi",
    [(1, (-1, 1)), (2, (1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)), (12, (1, 0, -1, 0, 1))],
)
def test_small_cyclotomic_polynomials(m, phi):
    assert cyclotomic_poly(m) == phi


def test_phi6_by_division():
    # u^6 - 1 divided by (u - 1)(u + 1)(u^2 + u + 1)
    q, r = poly_divmod([-1, 0, 0, 0, 0, 0, 1], [-1, 0, 1])
    q, r2 = poly_divmod(q, [1, 1, 1])
    assert not any(r) and not any(r2)
    assert tuple(q) == cyclotomic_poly(6)


@given(st.integers(1, 16))
def test_phi_divides_u_m_minus_one(m):
    _, r = poly_divmod([-1] + [0] * (m - 1) + [1], list(cyclotomic_poly(m)))
    assert not any(r)


@given(st.integers(1, 16))
def test_zeta_is_primitive(m):
    F = cyclotomic_field(m)
    z = F.zeta()
    assert z**m == 1
    assert all(z**k != 1 for k in range(1, m))


@pytest.mark.parametrize("m", [3, 4, 5, 8, 12, 16])
def test_zeta_times_zeta_inverse_power(m):
    F = cyclotomic_field(m)
    assert F.zeta() * F.zeta_power(m - 1) == 1


@given(cyclo(12), cyclo(12), cyclo(12))
def test_field_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(cyclo(10))
def test_inverse(x):
    if x:
        assert x * x.inverse() == 1
    else:
        with pytest.raises(ZeroDivisionError):
            x.inverse()


def test_zero_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        cyclotomic_field(8).zero().inverse()


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        cyclotomic_field(4).zeta() + cyclotomic_field(6).zeta()


def test_eps_quantum_numbers():
    F = cyclotomic_field(6)
    assert q_number_at(F, 2) == 1  # zeta_6 + zeta_6^-1
    assert q_factorial_at(F, 2) == 1
    assert q_number_at(cyclotomic_field(4), 1) == 1
    assert q_number_at(F, 3) == 0


def test_complex_embedding():
    import cmath

    F = cyclotomic_field(8)
    x = F.zeta() * 3 + F.zeta_power(3) - Fraction(1, 2)
    w = cmath.exp(2j * cmath.pi / 8)
    assert abs(x.to_complex() - (3 * w + w**3 - 0.5)) < 1e-12


def test_eval_at_eps_examples():
    assert eval_at_eps(LaurentPoly({1: 1, -1: 1}), 2) == 0
    assert eval_at_eps(LaurentPoly({0: 1}), 5) == 1
    for g in range(1, 6):
        assert eval_at_eps(LaurentPoly({2 * g: 1}), g) == 1
        assert eval_at_eps(LaurentPoly({g: 1}), g) == -1


@given(laurent(), laurent(), st.integers(1, 6))
def test_eval_at_eps_is_multiplicative(p, q, g):
    assert eval_at_eps(p * q, g) == eval_at_eps(p, g) * eval_at_eps(q, g)
    assert eval_at_eps(p + q, g) == eval_at_eps(p, g) + eval_at_eps(q, g)


@given(laurent(), st.integers(-3, 3))
def test_laurent_substitution(p, a):
    x = Fraction(3, 2)
    assert p.substitute_power(a).evaluate(x) == p.evaluate(x**a)


def test_json_form():
    F = cyclotomic_field(6)
    assert (F.zeta() * Fraction(2, 3)).to_json() == {"order": 6, "coeffs": ["0", "2/3"]}
