"""Decision procedure: golden verdicts, witnesses, measure agreement."""

from fractions import Fraction

import pytest

from treeval.decide import (
    ConsistencyVerdict,
    PsiSentence,
    base_structure,
    consistency_equals_positive_measure,
    decide_psi,
)
from treeval.errors import PreconditionError
from treeval.formulas import evaluate, parse
from treeval.polys import QQ, Poly
from treeval.trees import CharFunction, FiniteTree


def P(*cs):
    return Poly(QQ, [Fraction(c) for c in cs])


def flat_chi(chars: dict):
    tree = FiniteTree.flat("_", sorted(chars))
    chi = CharFunction(tree, {"_": 0, **chars})
    return tree, chi


def cond(text, node):
    return parse(text, free_vars={"x"}, nodes={node})


def test_golden_consistent_char5():
    tree, chi = flat_chi({"a": 5})
    psi = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent
    assert verdict.per_node["a"].satisfiable
    w = verdict.witness_structure
    assert w is not None
    assert evaluate(psi.as_formula(), w)


def test_golden_inconsistent_char7():
    tree, chi = flat_chi({"a": 7})
    psi = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    verdict = decide_psi(psi, tree, chi)
    assert not verdict.consistent
    assert verdict.witness_structure is None


def test_tautological_conditions():
    tree, chi = flat_chi({"a": 5, "b": 13})
    psi = PsiSentence(
        P(1, 0, 1), {"a": cond("0 = 0", "a"), "b": cond("0 = 0", "b")}
    )
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent


def test_two_aligned_primes():
    tree, chi = flat_chi({"a": 5, "b": 13})
    psi = PsiSentence(
        P(1, 0, 1),
        {"a": cond("x - 2 in m[a]", "a"), "b": cond("x - 5 in m[b]", "b")},
    )
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent
    assert evaluate(psi.as_formula(), verdict.witness_structure)


def test_witness_uses_common_root():
    # conditions witnessed by different roots individually, reconciled by
    # an automorphism transport: res(i)=2 wants root i, res(i)=3 wants -i
    tree, chi = flat_chi({"a": 5, "b": 5})
    psi = PsiSentence(
        P(1, 0, 1),
        {"a": cond("x - 2 in m[a]", "a"), "b": cond("x - 3 in m[b]", "b")},
    )
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent
    assert evaluate(psi.as_formula(), verdict.witness_structure)


def test_measure_agreement_golden_pair():
    tree, chi = flat_chi({"a": 5})
    psi = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    assert consistency_equals_positive_measure(psi, tree, chi)
    tree7, chi7 = flat_chi({"a": 7})
    psi7 = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    assert consistency_equals_positive_measure(psi7, tree7, chi7)


def test_generator_change_invariance():
    # replacing Q by the minimal polynomial of alpha + 1 preserves verdicts
    tree, chi = flat_chi({"a": 5})
    psi1 = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    # alpha + 1 with alpha^2 + 1 = 0 has minpoly x^2 - 2x + 2; shift the
    # condition accordingly: x - 3 = (alpha + 1) - 3 = alpha - 2
    psi2 = PsiSentence(P(2, -2, 1), {"a": cond("x - 3 in m[a]", "a")})
    v1 = decide_psi(psi1, tree, chi)
    v2 = decide_psi(psi2, tree, chi)
    assert v1.consistent == v2.consistent is True
    tree7, chi7 = flat_chi({"a": 7})
    v1 = decide_psi(
        PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")}), tree7, chi7
    )
    v2 = decide_psi(
        PsiSentence(P(2, -2, 1), {"a": cond("x - 3 in m[a]", "a")}), tree7, chi7
    )
    assert v1.consistent == v2.consistent is False


def test_chain_tree_nodes_above():
    tree = FiniteTree.chain(["_", "a", "b"])
    chi = CharFunction(tree, {"_": 0, "a": 5, "b": 5})
    psi = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 in m[a]", "a")})
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent
    w = verdict.witness_structure
    # the node above the anchor inherits the same handle
    assert w.assignment["b"] == w.assignment["a"]


def test_positive_bottom_characteristic():
    tree = FiniteTree.flat("_", ["a"])
    chi = CharFunction(tree, {"_": 5, "a": 5})
    # x^2 + 1 has roots in F_25; membership in O trivializes to true
    psi = PsiSentence(P(1, 0, 1), {"a": cond("x in O[a]", "a")})
    verdict = decide_psi(psi, tree, chi)
    assert verdict.consistent
    assert verdict.witness_structure is None
    # x - 1 = 0 condition with x^2 + 1: no root of x^2+1 equals 1 in char 5
    psi2 = PsiSentence(P(1, 0, 1), {"a": cond("x - 1 = 0", "a")})
    assert not decide_psi(psi2, tree, chi).consistent
    # root exists: x^2 + 1 = (x-2)(x-3) mod 5; x - 2 = 0 is satisfiable
    psi3 = PsiSentence(P(1, 0, 1), {"a": cond("x - 2 = 0", "a")})
    assert decide_psi(psi3, tree, chi).consistent


def test_rejects_mixed_node_condition():
    tree, chi = flat_chi({"a": 5, "b": 13})
    with pytest.raises(PreconditionError):
        PsiSentence(
            P(1, 0, 1),
            {
                "a": parse(
                    "(x in O[a]) & (x in O[b])",
                    free_vars={"x"},
                    nodes={"a", "b"},
                ),
                "b": cond("0 = 0", "b"),
            },
        )


def test_rejects_quantified_condition():
    tree, chi = flat_chi({"a": 5})
    with pytest.raises(PreconditionError):
        PsiSentence(
            P(1, 0, 1),
            {"a": parse("exists y root [1,0,1] : y in O[a]", nodes={"a"})},
        )


def test_base_structure_shape():
    tree = FiniteTree.chain(["_", "a", "b"])
    chi = CharFunction(tree, {"_": 0, "a": 5, "b": 5})
    psi = PsiSentence(P(1, 0, 1), {"a": cond("0 = 0", "a")})
    S = base_structure(psi, tree, chi)
    assert S.assignment["a"] == S.assignment["b"]
    assert S.assignment["_"].is_trivial()
