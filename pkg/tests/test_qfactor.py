"""Factorization over QQ against expansion and sympy cross-checks."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treeval.polys import QQ, Poly
from treeval.qfactor import factor_over_Q, is_irreducible_over_Q, roots_in_Q


def P(*cs):
    return Poly(QQ, [Fraction(c) for c in cs])


def rebuild(f):
    acc = Poly.const(QQ, f.leading())
    for g, m in factor_over_Q(f):
        acc = acc * g**m
    return acc


def test_difference_of_squares():
    fac = factor_over_Q(P(-1, 0, 1))
    assert fac == [(P(-1, 1), 1), (P(1, 1), 1)]


def test_x2_plus_1_irreducible():
    assert is_irreducible_over_Q(P(1, 0, 1))


def test_x4_minus_4():
    fac = factor_over_Q(P(-4, 0, 0, 0, 1))
    assert (P(-2, 0, 1), 1) in fac
    assert (P(2, 0, 1), 1) in fac
    assert len(fac) == 2
    assert rebuild(P(-4, 0, 0, 0, 1)) == P(-4, 0, 0, 0, 1)


def test_cyclotomic_5():
    assert is_irreducible_over_Q(P(1, 1, 1, 1, 1))


def test_multiplicities_and_leading():
    f = P(-1, 1) ** 2 * P(1, 0, 1) * Poly.const(QQ, Fraction(3, 2))
    fac = factor_over_Q(f)
    assert (P(-1, 1), 2) in fac and (P(1, 0, 1), 1) in fac
    assert rebuild(f) == f


def test_non_integral_coefficients():
    # (x - 1/2)(x + 1/3)
    f = P(Fraction(-1, 2), 1) * P(Fraction(1, 3), 1)
    fac = factor_over_Q(f)
    assert (P(Fraction(-1, 2), 1), 1) in fac
    assert (P(Fraction(1, 3), 1), 1) in fac


def test_degree6_splitting_poly():
    # minimal polynomial of sqrt2 + sqrt3: x^4 - 10x^2 + 1, times (x^2-2)
    f = P(1, 0, -10, 0, 1) * P(-2, 0, 1)
    fac = factor_over_Q(f)
    assert (P(1, 0, -10, 0, 1), 1) in fac
    assert (P(-2, 0, 1), 1) in fac


def test_rational_roots():
    f = P(-6, 11, -6, 1)  # (x-1)(x-2)(x-3)
    assert roots_in_Q(f) == [1, 2, 3]


@given(
    st.lists(
        st.integers(min_value=-8, max_value=8), min_size=2, max_size=5
    ).filter(lambda cs: any(c != 0 for c in cs))
)
@settings(max_examples=40, deadline=None)
def test_factor_rebuild_random(coeffs):
    f = Poly(QQ, [Fraction(c) for c in coeffs])
    if f.degree < 1:
        return
    assert rebuild(f) == f
    for g, _ in factor_over_Q(f):
        assert g.is_monic()
        assert is_irreducible_over_Q(g)


def test_cross_check_sympy():
    sympy = pytest.importorskip("sympy")
    import sympy as sp

    x = sp.Symbol("x")
    for coeffs in [
        (1, 0, -10, 0, 1),
        (-4, 0, 0, 0, 1),
        (7, -3, 0, 2, 5, 1),
        (12, 4, -3, 1),
        (1, 2, 3, 4, 5, 6, 1),
    ]:
        f = Poly(QQ, [Fraction(c) for c in coeffs])
        expr = sum(int(c) * x**i for i, c in enumerate(coeffs))
        _, sy_factors = sp.factor_list(expr)
        ours = factor_over_Q(f)
        assert len(ours) == len(sy_factors)
        sy_degs = sorted(sp.degree(g, x) for g, _ in sy_factors)
        assert sy_degs == sorted(g.degree for g, _ in ours)
