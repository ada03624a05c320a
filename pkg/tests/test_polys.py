"""Generic polynomial engine over QQ: ring laws, division, resultants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from treeval.polys import (
    INF,
    QQ,
    Poly,
    discriminant,
    lagrange_interpolate,
    resultant,
    vp_fraction,
)

rationals = st.fractions(
    min_value=-20, max_value=20, max_denominator=12
)
qpolys = st.lists(rationals, min_size=0, max_size=6).map(lambda cs: Poly(QQ, cs))
qpolys_nonzero = qpolys.filter(lambda f: not f.is_zero())


def P(*cs):
    return Poly(QQ, [Fraction(c) for c in cs])


def test_normalization_drops_trailing_zeros():
    assert P(1, 2, 0, 0).coeffs == (Fraction(1), Fraction(2))
    assert P(0, 0).is_zero()
    assert P().degree == -1


def test_arith_basics():
    f = P(1, 0, 1)  # x^2 + 1
    g = P(-1, 1)  # x - 1
    assert f + g == P(0, 1, 1)
    assert f * g == P(-1, 1, -1, 1)
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(qpolys, qpolys, qpolys)
@settings(max_examples=60, deadline=None)
def test_ring_laws(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@given(qpolys, qpolys_nonzero)
@settings(max_examples=60, deadline=None)
def test_divmod_identity(f, g):
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


@given(qpolys_nonzero, qpolys_nonzero)
@settings(max_examples=40, deadline=None)
def test_gcd_divides_both(f, g):
    d = f.gcd(g)
    assert (f % d).is_zero()
    assert (g % d).is_zero()
    gg, s, t = f.xgcd(g)
    assert s * f + t * g == gg
    assert gg == d


def test_squarefree_decomposition():
    f = P(-1, 1) ** 2 * P(1, 0, 1)  # (x-1)^2 (x^2+1)
    parts = f.squarefree_decomposition()
    assert (P(1, 0, 1), 1) in parts
    assert (P(-1, 1), 2) in parts
    rebuilt = Poly.one(QQ)
    for g, m in parts:
        rebuilt = rebuilt * g**m
    assert rebuilt == f.monic()


def _sylvester_resultant(f, g):
    """Independent oracle: determinant of the Sylvester matrix over QQ."""
    m, n = f.degree, g.degree
    size = m + n
    rows = []
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - n - 1 - i))
    # fraction-free-ish Gaussian elimination with exact Fractions
    det = Fraction(1)
    mat = [row[:] for row in rows]
    for col in range(size):
        piv = None
        for r in range(col, size):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            mat[col], mat[piv] = mat[piv], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(col + 1, size):
            if mat[r][col] != 0:
                fct = mat[r][col]
                mat[r] = [a - fct * b for a, b in zip(mat[r], mat[col])]
    return det


@given(qpolys_nonzero, qpolys_nonzero)
@settings(max_examples=30, deadline=None)
def test_resultant_matches_sylvester(f, g):
    if f.degree < 1 or g.degree < 1:
        return
    assert resultant(f, g) == _sylvester_resultant(f, g)


def test_resultant_examples():
    # res(x^2+1, x-2) = value of x^2+1 at 2 = 5
    assert resultant(P(1, 0, 1), P(-2, 1)) == 5
    assert discriminant(P(-2, 0, 1)) == 8  # disc(x^2-2)
    assert discriminant(P(1, 1, 1)) == -3  # disc(x^2+x+1)


def test_interpolation_roundtrip():
    f = P(3, -2, 1, 5)
    pts = [(i, f.evaluate(Fraction(i))) for i in range(f.degree + 1)]
    assert lagrange_interpolate(QQ, pts) == f


def test_vp_and_inf():
    assert vp_fraction(Fraction(25, 3), 5) == 2
    assert vp_fraction(Fraction(3, 50), 5) == -2
    assert vp_fraction(Fraction(0), 5) is INF
    assert INF > Fraction(10**9)
    assert INF + Fraction(1, 2) is INF
    assert min(INF, Fraction(1)) == Fraction(1)
