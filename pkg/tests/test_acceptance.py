"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s`` or ``python -m pytest -rA``;
the lines are repeated in the terminal summary.
"""
import functools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import sympy as sp

from iqg.algebra import (
    casimir_coeffs,
    check_symmetries,
    commutator_coeffs,
    get_context,
    harish_chandra_delta,
    verify_defining_relations,
)
from iqg.arith import LaurentPoly, eval_at_eps
from iqg.langlands import (
    char_duality,
    check_duality_identities,
    check_specialization_table,
    decompose_dual,
    dual_module,
)
from iqg.modules import build_module, casimir_scalar, check_module_relations
from iqg.pbw import HH, ONE, XM, XP, PBWElement, pbw_mul
from iqg.qnumbers import P_product_formula, P_symmetrized, qnum_lattice_route, qnum_series_route
from iqg.series import BiSeries, exp_of_laurent_argument


class Outcome:
    def __init__(self):
        self.failures = []
        self.cases = 0

    def check(self, ok, label):
        self.cases += 1
        if not ok:
            self.failures.append(label)


@contextmanager
def criterion(report_line, number, title, limit=None):
    out = Outcome()
    t0 = time.perf_counter()
    try:
        yield out
    except Exception as exc:  # an exception is a failure of the criterion, reported like any other
        out.failures.append(f"raised {type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    slow = limit is not None and dt >= limit
    ok = not out.failures and not slow
    detail = f"{out.cases} cases, {dt:.1f}s" + (f" (limit {limit}s)" if limit else "")
    if out.failures:
        shown = "; ".join(map(str, out.failures[:4]))
        more = f" (+{len(out.failures) - 4} more)" if len(out.failures) > 4 else ""
        detail += f"; {len(out.failures)} failing: {shown}{more}"
    if slow:
        detail += "; too slow"
    report_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'} {title}: {detail}")
    assert not out.failures, out.failures
    assert not slow, f"took {dt:.1f}s, limit {limit}s"


def sinh_ratio_h_coeffs(order):
    """PBW H-polynomials c_k with sinh(tH)/sinh(t) = sum c_k t^k, from a CAS."""
    t, H = sp.symbols("t H")
    s = sp.series(sp.sinh(t * H) / sp.sinh(t), t, 0, order + 1).removeO()
    out = []
    for k in range(order + 1):
        c = sp.expand(sp.cancel(s.coeff(t, k)))
        if c == 0:
            out.append(PBWElement())
            continue
        p = sp.Poly(c, H)
        out.append(PBWElement({(0, i, 0): Fraction(int(v.p), int(v.q)) for (i,), v in zip(p.monoms(), p.coeffs())}))
    return out


# ----------------------------------------------------------------------


def test_criterion_01_P_polynomial(report_line):
    with criterion(report_line, 1, "P product formula = closed form, P(eps^l) = [g | l]", limit=1.0) as out:
        for g in range(1, 9):
            closed = LaurentPoly([(e, Fraction(1, 2 * g)) for k in range(g) for e in (2 * k, -2 * k)])
            P = P_product_formula(g)
            out.check(P == closed, f"g={g} product")
            out.check(P_symmetrized(g) == closed, f"g={g} symmetrized")
            for l in range(4 * g):
                out.check(eval_at_eps(P.substitute_power(l), g) == (1 if l % g == 0 else 0), f"g={g} l={l}")


def test_criterion_02_dual_route_quantum_numbers(report_line):
    with criterion(report_line, 2, "sinhc-ratio and geometric-sum brackets agree, |a| <= 20, N = 6", limit=5.0) as out:
        N = 6
        for g in range(1, 5):
            for a in range(-20, 21):
                series = qnum_series_route(a, g, N)
                lattice = qnum_lattice_route(a, g, N)
                coeffs = {}
                for r, L in enumerate(lattice):
                    for n, c in exp_of_laurent_argument(L.terms, N - r).coeffs.items():
                        coeffs[(n, r)] = c
                out.check(BiSeries(N, coeffs) == series, f"g={g} a={a}")


def test_criterion_03_defining_relations(report_line):
    with criterion(report_line, 3, "defining relations, centrality, omega and tau at N = 5", limit=120.0) as out:
        for g in range(1, 5):
            for r in verify_defining_relations(g, 5) + check_symmetries(g, 5):
                out.check(r.ok, f"g={g} {r.name}")


def test_criterion_04_g1_closed_form(report_line):
    with criterion(report_line, 4, "g = 1: [X+, X-] = sinh((h+h')H)/sinh(h+h') at N = 6") as out:
        N = 6
        c = sinh_ratio_h_coeffs(N)
        expected = BiSeries(N, {(n, k - n): c[k] * math.comb(k, n) for k in range(N + 1) for n in range(k + 1)})
        got = commutator_coeffs(1, N)
        for k in range(N + 1):
            for n in range(k + 1):
                out.check(got[(n, k - n)] == expected[(n, k - n)], f"h^{n} h'^{k - n}")


def test_criterion_05_harish_chandra(report_line):
    with criterion(report_line, 5, "delta(C) = H^2 at N = 6") as out:
        N = 6
        for g in (1, 2, 3):
            ctx = get_context(g, N)
            out.check(harish_chandra_delta(ctx.psi_C, ctx) == BiSeries.constant(N, pbw_mul(HH, HH)), f"g={g}")


def test_criterion_06_coefficient_tables(report_line):
    with criterion(report_line, 6, "alpha h'=0 slice, balanced alpha and C, C_00 = 4X+X- + (H-1)^2") as out:
        N = 5
        c = sinh_ratio_h_coeffs(N)
        C00 = pbw_mul(XP, XM) * 4 + pbw_mul(HH - ONE, HH - ONE)
        for g in range(1, 5):
            alpha = commutator_coeffs(g, N)
            cas = casimir_coeffs(g, N)
            for k in range(N + 1):
                out.check(alpha[(k, 0)] == c[k], f"g={g} alpha_({k},0)")
            for key, v in alpha.coeffs.items():
                out.check(v.is_balanced(), f"g={g} alpha_{key} balanced")
            for key, v in cas.coeffs.items():
                out.check(v.is_balanced(), f"g={g} C_{key} balanced")
            out.check(cas[(0, 0)] == C00, f"g={g} C_00")


def test_criterion_07_module_relations(report_line):
    with criterion(report_line, 7, "module relations, n <= 10 and Verma |n| <= 6, N = 6, both sqrt(C) signs", limit=60.0) as out:
        N = 6
        for g in range(1, 5):
            mods = [build_module("interpolating", n, g, N) for n in range(11)]
            mods += [build_module("interpolating", n, g, N, verma=True) for n in range(-6, 7)]
            for m in mods:
                label = f"g={g} n={m.n}{' Verma' if m.verma else ''}"
                for sign in (1, -1):
                    out.check(check_module_relations(m, root_sign=sign).ok, f"{label} sqrtC sign {sign}")
                out.check(casimir_scalar(m) == m.one() * (m.n + 1) ** 2, f"{label} Casimir")


def test_criterion_08_specialization_table(report_line):
    with criterion(report_line, 8, "specialized entries follow the three-case table") as out:
        for g in (2, 3):
            for n in range(0, 4 * g + 1, g):
                out.check(check_specialization_table(n, g, 6) == {}, f"g={g} n={n}")


DUALITY_CASES = [
    (g, n, verma) for g in range(1, 5) for n in (0, g, 2 * g, -g, -2 * g) for verma in (False, True) if verma or n >= 0
]


@functools.lru_cache(maxsize=None)
def duality_report(g, n, verma):
    return check_duality_identities(n, g, 6, verma=verma, window=4 * g + 8 if verma else None)


def case_label(g, n, verma):
    return f"g={g} n={n}{' Verma' if verma else ''}"


def test_criterion_09_commutator_of_powers(report_line):
    with criterion(report_line, 9, "commutator identity for (X+)^g, (X-)^g to h'-order 6") as out:
        for g, n, verma in DUALITY_CASES:
            rep = duality_report(g, n, verma)
            out.check(not rep.residuals["[X+^g,X-^g]"] and not rep.residuals["hypotheses"], case_label(g, n, verma))


def test_criterion_10_dual_action(report_line):
    with criterion(report_line, 10, "[LH, LX+-] = +-2 LX+-, [LX+, LX-] = [LH]_{T^g}, LX+ regular") as out:
        for g, n, verma in DUALITY_CASES:
            rep = duality_report(g, n, verma)
            label = case_label(g, n, verma)
            out.check(not rep.residuals["[LH,LX+]-2LX+"] and not rep.residuals["[LH,LX-]+2LX-"], f"{label} weights")
            out.check(not rep.residuals["[LX+,LX-]-[LH]"], f"{label} [LX+,LX-]")
            D = dual_module(n, g, 6, verma, 4 * g + 8 if verma else None)
            out.check(all(min(v.coeffs, default=0) >= 0 for v in D.LXp.values()), f"{label} regular")


def expected_weights(n, g, verma):
    if g % 2 == 0 and (n > 0 or verma):
        return [n // g, n // g - 1]
    return [n // g]


DECOMP_CASES = [(g, n, verma) for g in range(1, 5) for n in range(0, 4 * g + 1, g) for verma in (False, True)]


def test_criterion_11_decomposition(report_line):
    with criterion(report_line, 11, "dual decomposition and intertwiners, n in gN, n <= 4g", limit=60.0) as out:
        for g, n, verma in DECOMP_CASES:
            label = case_label(g, n, verma)
            comps = decompose_dual(n, g, 4, verma=verma)
            out.check([c.highest_weight for c in comps] == expected_weights(n, g, verma), f"{label} highest weights")
            for c in comps:
                out.check(c.intertwines, f"{label} intertwiner m={c.highest_weight}")


def test_criterion_12_characters(report_line):
    with criterion(report_line, 12, "folded characters equal dual characters, classical limit") as out:
        for g in range(1, 5):
            for n in range(0, 4 * g + 1, g):
                r = char_duality(n, g)
                for key in ("folded == dual", "components sum to dual", "classical limit"):
                    out.check(r[key], f"g={g} n={n} {key}")
