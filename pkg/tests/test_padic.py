"""Valuation handles on number fields: golden cases and Galois behavior."""

from fractions import Fraction

import pytest

from treeval.numfield import (
    FieldEmbedding,
    NumberField,
    QQ_FIELD,
    minimal_polynomial,
    rational_embedding,
    splitting_field,
)
from treeval.padic import (
    Membership,
    ValueVec,
    count_extensions,
    extend_valuation,
    galois_orbit_check,
    padic_handle_on_Q,
    padic_handles,
    pushforward,
    restrict_handle,
    trivial_handle,
)
from treeval.polys import QQ, Poly


def P(*cs):
    return Poly(QQ, [Fraction(c) for c in cs])


GAUSS = NumberField(P(1, 0, 1), label="Q(i)")
BIQUAD = NumberField(P(1, 0, -10, 0, 1), label="Q(sqrt2+sqrt3)")


def test_v5_on_Q():
    v5 = padic_handle_on_Q(5)
    assert v5.value(Fraction(25, 3)) == ValueVec.of(2)
    assert v5.value(0).is_infinite()
    assert v5.membership(Fraction(1, 5)) == Membership.OUTSIDE
    assert v5.membership(5) == Membership.IN_MAXIMAL_IDEAL
    assert v5.membership(Fraction(7, 2)) == Membership.UNIT
    # residue(7/2) = 7 * inv(2) = 21 = 1 mod 5
    assert v5.residue(Fraction(7, 2)).vec[0] == 1


def test_extensions_to_gauss():
    emb = rational_embedding(GAUSS)
    v5 = padic_handle_on_Q(5)
    exts5 = extend_valuation(v5, GAUSS, emb)
    assert len(exts5) == 2
    assert all((w.e, w.f) == (1, 1) for w in exts5)
    fps = sorted(w.fingerprint().vec[0] for w in exts5)
    assert fps == [2, 3]

    v2 = padic_handle_on_Q(2)
    exts2 = extend_valuation(v2, GAUSS, emb)
    assert len(exts2) == 1
    assert (exts2[0].e, exts2[0].f) == (2, 1)
    assert exts2[0].value(GAUSS.elem([1, 1])) == ValueVec.of(Fraction(1, 2))

    v3 = padic_handle_on_Q(3)
    exts3 = extend_valuation(v3, GAUSS, emb)
    assert len(exts3) == 1
    assert (exts3[0].e, exts3[0].f) == (1, 2)


def test_trivial_extension():
    triv = trivial_handle(QQ_FIELD)
    exts = extend_valuation(triv, GAUSS, rational_embedding(GAUSS))
    assert exts == [trivial_handle(GAUSS)]
    assert triv.residue(Fraction(7, 2)) == QQ_FIELD.coerce(Fraction(7, 2))


def test_restriction_roundtrip():
    emb = rational_embedding(GAUSS)
    for p in (2, 3, 5, 13):
        v = padic_handle_on_Q(p)
        for w in extend_valuation(v, GAUSS, emb):
            assert restrict_handle(w, emb) == v
            # restriction preserves values of rational samples
            for x in (Fraction(p), Fraction(3, p), Fraction(7, 11)):
                assert w.value(emb(QQ_FIELD.coerce(x))) == v.value(x)


def test_residue_pinned_galois():
    emb = rational_embedding(GAUSS)
    v5 = padic_handle_on_Q(5)
    w2, w3 = extend_valuation(v5, GAUSS, emb)
    i = GAUSS.gen
    r2, r3 = w2.residue(i), w3.residue(i)
    assert {r2.vec[0], r3.vec[0]} == {2, 3}
    # residue(i - 2) = 0 at the handle pinning res(i) = 2
    wa = w2 if r2.vec[0] == 2 else w3
    assert wa.membership(i - 2) == Membership.IN_MAXIMAL_IDEAL


def test_galois_transitivity():
    emb = rational_embedding(GAUSS)
    for p in (2, 3, 5, 13):
        assert galois_orbit_check(padic_handle_on_Q(p), GAUSS, emb)
    embb = rational_embedding(BIQUAD)
    for p in (2, 3, 5, 7, 11, 23):
        assert galois_orbit_check(padic_handle_on_Q(p), BIQUAD, embb)


def test_pushforward_swaps_split_primes():
    from treeval.numfield import automorphisms

    emb = rational_embedding(GAUSS)
    v5 = padic_handle_on_Q(5)
    w1, w2 = extend_valuation(v5, GAUSS, emb)
    conj = [s for s in automorphisms(GAUSS) if not s.is_identity()][0]
    assert pushforward(w1, conj) == w2
    assert pushforward(w2, conj) == w1


def test_sum_ef_equals_degree():
    for field in (GAUSS, BIQUAD):
        for p in (2, 3, 5, 7, 13, 23):
            hs = padic_handles(field, p)
            assert sum(h.e * h.f for h in hs) == field.degree


def test_uniformizer():
    emb = rational_embedding(GAUSS)
    for p in (2, 5):
        for w in extend_valuation(padic_handle_on_Q(p), GAUSS, emb):
            u = w.uniformizer()
            assert w.value(u) == ValueVec.of(Fraction(1, w.e))


def test_residue_generator_lift():
    embb = rational_embedding(BIQUAD)
    for p in (5, 7):
        for w in extend_valuation(padic_handle_on_Q(p), BIQUAD, embb):
            u = w.residue_generator_lift()
            assert w.value(u) == ValueVec.of(0)
            res = w.residue(u)
            # residue generates: its Frobenius orbit has size f
            orbit = {res.key()}
            cur = res**p
            while cur.key() not in orbit:
                orbit.add(cur.key())
                cur = cur**p
            assert len(orbit) == w.f


def test_ultrametric_exact():
    emb = rational_embedding(BIQUAD)
    w = extend_valuation(padic_handle_on_Q(2), BIQUAD, emb)[0]
    xs = [BIQUAD.elem([1, 1]), BIQUAD.elem([2, 0, 1]), BIQUAD.elem([0, 3, 0, 1])]
    for a in xs:
        for b in xs:
            va, vb, vab = w.value(a), w.value(b), w.value(a + b)
            assert vab >= min(va, vb)
            assert w.value(a * b) == va + vb


def test_pin_serialization_data():
    emb = rational_embedding(GAUSS)
    w1, w2 = extend_valuation(padic_handle_on_Q(5), GAUSS, emb)
    p1, k1 = w1.pin(8)
    p2, _ = w2.pin(8)
    assert p1 != p2
    assert k1 == 8


def test_value_comparisons():
    a = ValueVec.of(Fraction(1, 2))
    b = ValueVec.of(1)
    inf = ValueVec.infinite()
    assert a < b < inf
    assert min(b, a) == a
    assert (a + b) == ValueVec.of(Fraction(3, 2))
