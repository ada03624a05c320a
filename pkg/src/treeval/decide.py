"""Decision procedure for root-bounded sentences with per-node conditions.

A sentence asserts the existence of a common root x of a monic
irreducible rational polynomial satisfying, for each minimal node of
positive residue characteristic, a quantifier-free one-valuation
condition.  Consistency with the constrained theory reduces to a
number-theoretic check: split the polynomial, enumerate the extensions
of each p_i-adic valuation to the splitting field, and evaluate the
condition at every root under every extension.  Completeness of the
ambient valued-field theory at each characteristic makes this test
exact, and a consistent verdict converts into an explicit witness
structure by transporting each per-node witness to a common root along
a field automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from treeval.errors import InvariantViolation, PreconditionError
from treeval.formulas import (
    FAnd,
    FExistsRoot,
    FIn,
    FEqZero,
    FNot,
    FOr,
    TAdd,
    TDiv,
    TMul,
    TNeg,
    TNum,
    TParam,
    TPow,
    TSub,
    TVar,
    evaluate,
    mentioned_nodes,
)
from treeval.gf import GF, embedding_generator_image, map_poly_along, poly_factor, poly_roots
from treeval.numfield import automorphisms, splitting_field
from treeval.padic import padic_handle_on_Q, padic_handles, pushforward, trivial_handle
from treeval.polys import QQ, Poly
from treeval.qfactor import is_irreducible_over_Q
from treeval.structures import TP0Structure
from treeval.trees import CharFunction, FiniteTree
from treeval.numfield import QQ_FIELD


def _is_quantifier_free(f) -> bool:
    if isinstance(f, (FEqZero, FIn)):
        return True
    if isinstance(f, FNot):
        return _is_quantifier_free(f.arg)
    if isinstance(f, (FAnd, FOr)):
        return _is_quantifier_free(f.left) and _is_quantifier_free(f.right)
    return False


class PsiSentence:
    """exists x: Q(x) = 0 and R_i(x) for each minimal positive node a_i."""

    __slots__ = ("Q", "conditions")

    def __init__(self, Q: Poly, conditions: dict):
        if not Q.is_monic() or Q.degree < 1:
            raise PreconditionError("Q must be monic of degree >= 1")
        if Q.degree > 1 and not is_irreducible_over_Q(Q):
            raise PreconditionError("Q must be irreducible over QQ")
        for node, cond in conditions.items():
            if not _is_quantifier_free(cond):
                raise PreconditionError(f"condition at {node!r} is not quantifier-free")
            extra = mentioned_nodes(cond) - {node}
            if extra:
                raise PreconditionError(
                    f"condition at {node!r} mentions other nodes {sorted(extra)!r}"
                )
        self.Q = Q
        self.conditions = dict(conditions)

    def as_formula(self):
        """The sentence as a root-bounded existential formula."""
        body = None
        for node in sorted(self.conditions):
            cond = self.conditions[node]
            body = cond if body is None else FAnd(body, cond)
        if body is None:
            body = FEqZero(TSub(TVar("x"), TVar("x")))
        return FExistsRoot("x", tuple(self.Q.coeffs), body)


@dataclass
class NodeVerdict:
    satisfiable: bool
    witness: tuple | None  # (handle, root) or None


@dataclass
class ConsistencyVerdict:
    consistent: bool
    per_node: dict
    witness_structure: TP0Structure | None


def decide_psi(
    psi: PsiSentence, tree: FiniteTree, chi: CharFunction
) -> ConsistencyVerdict:
    """Consistency of the sentence with the characteristic-constrained theory.

    The sentence is consistent iff each per-node existential holds in
    the corresponding complete valued-field theory, which is checked by
    enumerating (extension, root) pairs over the splitting field of Q.
    With positive bottom characteristic the theory is complete and the
    sentence reduces to a root-existence check over finite fields.
    """
    if chi.tree != tree:
        raise PreconditionError("characteristic function lives on a different tree")
    minimal = chi.minimal_positive_nodes()
    if chi[tree.bottom] != 0:
        return _decide_positive_characteristic(psi, tree, chi)
    if set(psi.conditions) != set(minimal):
        raise PreconditionError(
            "conditions must be indexed by exactly the minimal positive nodes"
        )
    data = splitting_field(psi.Q)
    L = data.field
    per_node = {}
    for node in minimal:
        p = chi[node]
        sat, witness = False, None
        for w in padic_handles(L, p):
            for root in data.roots:
                frame = TP0Structure(
                    FiniteTree.flat("_", [node]),
                    L,
                    {"_": trivial_handle(L), node: w},
                )
                if evaluate(psi.conditions[node], frame, env={"x": root}):
                    sat, witness = True, (w, root)
                    break
            if sat:
                break
        per_node[node] = NodeVerdict(sat, witness)
    consistent = all(v.satisfiable for v in per_node.values())
    witness_structure = None
    if consistent:
        witness_structure = build_witness(psi, tree, chi, per_node, data)
    return ConsistencyVerdict(consistent, per_node, witness_structure)


def build_witness(
    psi: PsiSentence,
    tree: FiniteTree,
    chi: CharFunction,
    per_node: dict,
    splitting_data=None,
) -> TP0Structure:
    """A structure on the splitting field where one common root satisfies
    every condition: transport each per-node witness root to the first
    root by an automorphism and push the pinned extension along."""
    data = splitting_data or splitting_field(psi.Q)
    L = data.field
    alpha = data.roots[0]
    anchors = {}
    for node, verdict in per_node.items():
        if not verdict.satisfiable:
            raise PreconditionError("cannot build a witness from an inconsistent verdict")
        w, root = verdict.witness
        sigma = next(
            s for s in automorphisms(L) if s(root) == alpha
        )
        anchors[node] = pushforward(w, sigma)
    assignment = {}
    minimal = chi.minimal_positive_nodes()
    for n in tree.nodes_sorted():
        if chi[n] == 0:
            assignment[n] = trivial_handle(L)
        else:
            anchor = next(a for a in minimal if tree.leq(a, n))
            assignment[n] = anchors[anchor]
    witness = TP0Structure(tree, L, assignment)
    # internal soundness: the witness satisfies the sentence
    full = _sentence_over_tree(psi, tree, chi)
    if not evaluate(full, witness):
        raise InvariantViolation("constructed witness fails its own sentence")
    return witness


def _sentence_over_tree(psi: PsiSentence, tree: FiniteTree, chi: CharFunction):
    return psi.as_formula()


def base_structure(psi: PsiSentence, tree: FiniteTree, chi: CharFunction) -> TP0Structure:
    """The rational base structure: p_i-adic handles at minimal positive
    nodes (inherited above them), trivial elsewhere."""
    minimal = chi.minimal_positive_nodes()
    assignment = {}
    for n in tree.nodes_sorted():
        if chi[n] == 0:
            assignment[n] = trivial_handle(QQ_FIELD)
        else:
            anchor = next(a for a in minimal if tree.leq(a, n))
            assignment[n] = padic_handle_on_Q(chi[anchor])
    return TP0Structure(tree, QQ_FIELD, assignment)


def consistency_equals_positive_measure(
    psi: PsiSentence, tree: FiniteTree, chi: CharFunction
) -> bool:
    """Cross-validation: the verdict agrees with positivity of the measure
    of the sentence over the rational base structure."""
    from treeval.measure import measure

    verdict = decide_psi(psi, tree, chi)
    S = base_structure(psi, tree, chi)
    m = measure(psi.as_formula(), {}, S)
    return verdict.consistent == (m.value > 0)


# -- positive bottom characteristic: the complete-theory rule -----------------------


def _decide_positive_characteristic(psi, tree, chi) -> ConsistencyVerdict:
    """With char(K) = p > 0 every valuation on algebraic numbers is trivial:
    membership atoms trivialize and the sentence becomes a root check."""
    p = chi[tree.bottom]
    fp = GF(p, 1)
    qbar_coeffs = []
    for c in psi.Q.coeffs:
        if c.denominator % p == 0:
            raise PreconditionError(
                "sentence polynomial is not p-integral at the bottom characteristic"
            )
        qbar_coeffs.append((c.numerator * pow(c.denominator, -1, p)) % p)
    qbar = Poly(fp, [fp.coerce(c) for c in qbar_coeffs])
    if qbar.degree < 1:
        return ConsistencyVerdict(False, {}, None)
    factors = poly_factor(qbar)
    ext_deg = 1
    for g, _ in factors:
        ext_deg = ext_deg * g.degree // _gcd(ext_deg, g.degree)
    E = GF(p, ext_deg)
    roots = []
    for g, _ in factors:
        gE = map_poly_along(
            g, embedding_generator_image(p, 1, ext_deg), E
        ) if g.field.m == 1 else g
        roots.extend(poly_roots(gE))
    conditions = list(psi.conditions.values())
    sat_root = None
    for r in roots:
        if all(_eval_trivialized(cond, r, E) for cond in conditions):
            sat_root = r
            break
    per_node = {
        node: NodeVerdict(sat_root is not None, None) for node in psi.conditions
    }
    return ConsistencyVerdict(sat_root is not None, per_node, None)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _eval_trivialized(cond, root, E) -> bool:
    """Evaluate a condition over a finite field with trivial valuation
    semantics: everything is a unit except 0, which lies in the ideal."""

    def term(t):
        if isinstance(t, TNum):
            return E.coerce(t.value)
        if isinstance(t, TVar):
            return root
        if isinstance(t, TParam):
            raise PreconditionError("sentence conditions cannot carry parameters")
        if isinstance(t, TAdd):
            return term(t.left) + term(t.right)
        if isinstance(t, TSub):
            return term(t.left) - term(t.right)
        if isinstance(t, TMul):
            return term(t.left) * term(t.right)
        if isinstance(t, TDiv):
            d = term(t.right)
            if d.is_zero():
                raise ZeroDivisionError
            return term(t.left) * E.inv(d)
        if isinstance(t, TNeg):
            return -term(t.arg)
        if isinstance(t, TPow):
            return term(t.base) ** t.exponent
        raise TypeError(f"not a term: {t!r}")

    def go(f):
        if isinstance(f, FEqZero):
            try:
                return term(f.term).is_zero()
            except ZeroDivisionError:
                return False
        if isinstance(f, FIn):
            try:
                val = term(f.term)
            except ZeroDivisionError:
                return False
            if f.sort == "O":
                return True
            return val.is_zero()
        if isinstance(f, FNot):
            return not go(f.arg)
        if isinstance(f, FAnd):
            return go(f.left) and go(f.right)
        if isinstance(f, FOr):
            return go(f.left) or go(f.right)
        raise TypeError(f"not quantifier-free: {f!r}")

    return go(cond)
