"""Finite fields: canonical moduli, field laws, factorization, embeddings."""

import pytest
from hypothesis import given, settings, strategies as st

from treeval.gf import (
    GF,
    Poly,
    embed,
    embedding_generator_image,
    is_prime,
    poly_factor,
    poly_is_irreducible,
    poly_roots,
    relative_minpoly,
)


def test_canonical_modulus_f4():
    # candidates x^2, x^2+1=(x+1)^2, x^2+x, then x^2+x+1
    f4 = GF(2, 2)
    assert f4.modulus == (1, 1)


def test_canonical_modulus_f25():
    f25 = GF(5, 2)
    # x^2 + c0 must be irreducible: c0 = 2 gives x^2 + 2, and -2 = 3 is not
    # a QR mod 5, so x^2 + 2 is irreducible; check nothing smaller works:
    # x^2, x^2+1 = (x+2)(x+3), so modulus = x^2 + 2
    assert f25.modulus == (2, 0)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (3, 2), (5, 2), (13, 1), (7, 3)])
def test_field_laws(p, m):
    f = GF(p, m)
    elems = list(f.elements()) if f.size <= 130 else [
        f.elem([i % p, (i * 3 + 1) % p] + [0] * (m - 2)) for i in range(10)
    ]
    for a in elems[:12]:
        for b in elems[:12]:
            assert (a + b) - b == a
            assert a * b == b * a
            if not b.is_zero():
                assert (a * b) * f.inv(b) == a
    one = f.one
    for a in elems[:12]:
        assert a * one == a


def test_frobenius_is_additive():
    f = GF(3, 3)
    a = f.elem([1, 2, 0])
    b = f.elem([2, 2, 1])
    assert (a + b) ** 3 == a**3 + b**3


def test_factor_over_f5():
    f5 = GF(5, 1)
    x2p1 = Poly(f5, [1, 0, 1])
    fac = poly_factor(x2p1)
    assert len(fac) == 2
    roots = poly_roots(x2p1)
    assert sorted(r.vec[0] for r in roots) == [2, 3]


def test_factor_over_f7_inert():
    f7 = GF(7, 1)
    assert poly_is_irreducible(Poly(f7, [1, 0, 1]))


def test_factor_multiplicities():
    f3 = GF(3, 1)
    x = Poly.x(f3)
    f = (x + Poly.one(f3)) ** 3 * (x**2 + Poly.one(f3))
    fac = poly_factor(f)
    rebuilt = Poly.one(f3)
    for g, m in fac:
        rebuilt = rebuilt * g**m
    assert rebuilt == f.monic()
    assert sorted(m for _, m in fac) == [1, 3]


def test_factor_pth_power():
    f2 = GF(2, 1)
    x = Poly.x(f2)
    f = (x**2 + x + Poly.one(f2)) ** 2
    fac = poly_factor(f)
    assert fac == [(x**2 + x + Poly.one(f2), 2)]


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (5, 2), (2, 4)])
def test_factor_over_extension_fields(p, m):
    fq = GF(p, m)
    g = fq.gen
    x = Poly.x(fq)
    f = (x - Poly.const(fq, g)) * (x - Poly.const(fq, g * g)) * (
        x**2 + Poly.const(fq, g) * x + Poly.one(fq)
    )
    fac = poly_factor(f)
    rebuilt = Poly.one(fq)
    for h, mult in fac:
        rebuilt = rebuilt * h**mult
    assert rebuilt == f.monic()


def test_t2_minus_2_over_f5_vs_f25():
    f5 = GF(5, 1)
    assert poly_is_irreducible(Poly(f5, [3, 0, 1]))  # t^2 - 2 == t^2 + 3 mod 5
    f25 = GF(5, 2)
    img = Poly(f25, [f25.coerce(3), f25.zero, f25.one])
    fac = poly_factor(img)
    assert len(fac) == 2 and all(g.degree == 1 for g, _ in fac)


def test_embedding_consistency():
    small, big = GF(2, 2), GF(2, 4)
    img = embedding_generator_image(2, 2, 4)
    # image must be a root of the F_4 modulus x^2+x+1
    assert img * img + img + big.one == big.zero
    a, b = small.gen, small.gen + small.one
    assert embed(a * b, big) == embed(a, big) * embed(b, big)
    assert embed(a + b, big) == embed(a, big) + embed(b, big)


def test_relative_minpoly():
    big = GF(2, 4)
    # an element of the F_4 subfield has degree <= 2 over F_4... check over F_2:
    a = big.gen
    mp = relative_minpoly(a, 1)
    assert mp.degree in (1, 2, 4)
    assert mp.evaluate(a).is_zero() or mp.map_coeffs(
        big, lambda c: embed(c, big)
    ).evaluate(a).is_zero()
    # over the F_4 subfield the generator of F_16 has degree 2
    mp4 = relative_minpoly(a, 2)
    assert mp4.degree == 2


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
    ]
