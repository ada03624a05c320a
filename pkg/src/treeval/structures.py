"""Tree-indexed valuation structures and their extension combinatorics.

A structure assigns to every tree node a valuation handle on one fixed
field, weakly order-reversing (deeper node, smaller ring) with the
trivial ring at the bottom.  Extensions along a finite normal constant
extension are enumerated by recursing down the tree and choosing, for
each node, an extension of its handle below the parent's chosen
extension; for composed handles the choice passes through the residue
field, where extensions of the fine place are just polynomial factors.
"""

from __future__ import annotations

from fractions import Fraction

from treeval.errors import (
    InvariantViolation,
    PreconditionError,
    UnsupportedHandleError,
)
from treeval.funcfield import (
    ComposedHandle,
    GaussHandle,
    compose_extensions,
    ff_handle_extends,
    gauss_extend,
    handle_contains,
    join,
    restrict_ff_handle,
    trivial_gauss,
)
from treeval.numfield import FieldEmbedding, NumberField
from treeval.padic import (
    ValuationHandle,
    extend_valuation,
    restrict_handle,
    trivial_handle,
)
from treeval.ratfunc import RatFuncField
from treeval.trees import CharFunction, ChoiceSystem, FiniteTree, Poset


def handle_residue_char(h) -> int:
    if isinstance(h, ValuationHandle):
        return 0 if h.is_trivial() else h.prime
    if isinstance(h, (GaussHandle, ComposedHandle)):
        return h.residue_characteristic()
    raise UnsupportedHandleError(f"unknown handle {h!r}")


def handle_is_trivial(h) -> bool:
    if isinstance(h, ValuationHandle):
        return h.is_trivial()
    if isinstance(h, GaussHandle):
        return h.is_trivial()
    return False


def handle_sort_key(h):
    """Canonical order on handles of one field."""
    if isinstance(h, ValuationHandle):
        if h.is_trivial():
            return (0,)
        return (1, h.prime, h.index)
    if isinstance(h, GaussHandle):
        return (2,) + handle_sort_key(h.base)
    if isinstance(h, ComposedHandle):
        place = h.place
        pkey = (
            ("inf",)
            if place.kind == "inf"
            else tuple(str(c) for c in place.poly.coeffs)
        )
        return (3,) + handle_sort_key(h.coarse) + (place.kind, pkey)
    raise UnsupportedHandleError(f"unknown handle {h!r}")


class TP0Structure:
    """A field with a weakly order-preserving tree of valuation handles."""

    __slots__ = ("tree", "field", "assignment")

    def __init__(self, tree: FiniteTree, field, assignment: dict):
        if set(assignment) != set(tree.nodes):
            raise PreconditionError("assignment must cover exactly the tree nodes")
        bottom_handle = assignment[tree.bottom]
        if not handle_is_trivial(bottom_handle):
            raise PreconditionError("the bottom node must carry the trivial ring")
        for n in tree.non_bottom():
            par = tree.parent[n]
            if not handle_contains(assignment[par], assignment[n]):
                raise PreconditionError(
                    f"handle at {n!r} is not inside the handle at {par!r}"
                )
        self.tree = tree
        self.field = field
        self.assignment = dict(assignment)
        self.char_function()  # raises if characteristics are inconsistent

    def char_function(self) -> CharFunction:
        return CharFunction(
            self.tree,
            {n: handle_residue_char(h) for n, h in self.assignment.items()},
        )

    def is_function_field(self) -> bool:
        return isinstance(self.field, RatFuncField)

    def constants(self) -> NumberField:
        """The constant field: the field itself for number fields."""
        return self.field.coeff_field if self.is_function_field() else self.field

    def __eq__(self, other):
        return (
            isinstance(other, TP0Structure)
            and self.tree == other.tree
            and self.field == other.field
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash(
            (
                self.tree.bottom,
                tuple(sorted(self.tree.parent.items())),
                tuple(handle_sort_key(self.assignment[n]) for n in self.tree.nodes_sorted()),
            )
        )

    def __repr__(self):
        items = ", ".join(
            f"{n}:{self.assignment[n]!r}" for n in self.tree.nodes_sorted()
        )
        return f"TP0Structure({items})"


class StructureExtensionSet:
    """All extensions of a base structure along a finite normal extension."""

    __slots__ = ("base", "emb", "members")

    def __init__(self, base, emb, members):
        self.base = base
        self.emb = emb
        self.members = members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)


def _extensions_below(h, parent_handle, parent_choice, emb, target_field):
    """Choices for one node: extensions of h below the parent's choice."""
    if isinstance(h, ValuationHandle):
        L = target_field
        if h.is_trivial():
            return [trivial_handle(L)]
        if parent_handle.is_trivial():
            return extend_valuation(h, L, emb)
        # number-field handles: containment means equality
        return [parent_choice]
    L_const = emb.target
    if isinstance(h, GaussHandle):
        if h.is_trivial():
            return [trivial_gauss(target_field)]
        if handle_is_trivial(parent_handle):
            return gauss_extend(h, L_const, emb)
        return [parent_choice]
    if isinstance(h, ComposedHandle):
        if handle_is_trivial(parent_handle):
            out = []
            for coarse in gauss_extend(h.coarse, L_const, emb):
                out.extend(compose_extensions(h, coarse, emb))
            return out
        if parent_handle == h.coarse:
            return compose_extensions(h, parent_choice, emb)
        # equal composed handles along the edge
        return [parent_choice]
    raise UnsupportedHandleError(f"cannot extend {h!r}")


def enumerate_structure_extensions(
    S: TP0Structure, L: NumberField, emb: FieldEmbedding
) -> StructureExtensionSet:
    """All structure extensions along the (normal) extension of constants.

    For a number-field structure, L/emb extend the field itself; for a
    function-field structure they extend the constants, and the members
    live on L(t).  Members are pairwise distinct, exhaustive, and listed
    in canonical order.
    """
    if emb.source != S.constants():
        raise PreconditionError("embedding source must be the structure constants")
    target_field = (
        RatFuncField(L, S.field.variable) if S.is_function_field() else L
    )
    order = S.tree.nodes_sorted()
    members: list[TP0Structure] = []

    def rec(i, chosen):
        if i == len(order):
            members.append(TP0Structure(S.tree, target_field, dict(chosen)))
            return
        n = order[i]
        if n == S.tree.bottom:
            chosen[n] = (
                trivial_gauss(target_field)
                if S.is_function_field()
                else trivial_handle(L)
            )
            rec(i + 1, chosen)
            del chosen[n]
            return
        par = S.tree.parent[n]
        choices = _extensions_below(
            S.assignment[n], S.assignment[par], chosen[par], emb, target_field
        )
        for c in choices:
            chosen[n] = c
            rec(i + 1, chosen)
            del chosen[n]

    rec(0, {})
    return StructureExtensionSet(S, emb, members)


def restrict_structure(S: TP0Structure, emb: FieldEmbedding) -> TP0Structure:
    """Node-wise restriction along a constant embedding."""
    if S.is_function_field():
        if emb.target != S.field.coeff_field:
            raise PreconditionError("embedding target must be the constants")
        small_field = RatFuncField(emb.source, S.field.variable)
        assignment = {
            n: restrict_ff_handle(h, emb) for n, h in S.assignment.items()
        }
        return TP0Structure(S.tree, small_field, assignment)
    if emb.target != S.field:
        raise PreconditionError("embedding target must be the field")
    assignment = {n: restrict_handle(h, emb) for n, h in S.assignment.items()}
    return TP0Structure(S.tree, emb.source, assignment)


def structure_extends(S_big: TP0Structure, S_small: TP0Structure, emb) -> bool:
    """Whether S_big restricts node-wise to S_small along emb."""
    if S_big.tree != S_small.tree:
        return False
    for n in S_big.tree.nodes_sorted():
        hb, hs = S_big.assignment[n], S_small.assignment[n]
        if isinstance(hb, ValuationHandle):
            if restrict_handle(hb, emb) != hs:
                return False
        else:
            if handle_is_trivial(hb) and handle_is_trivial(hs):
                continue
            if not ff_handle_extends(hb, hs, emb):
                return False
    return True


# -- the tree generated by a family of valuation rings ------------------------------


def tree_from_valuations(handles: list) -> tuple[FiniteTree, TP0Structure]:
    """The join-closure tree of the given handles plus the trivial ring."""
    if not handles:
        raise PreconditionError("need at least one handle")
    field = handles[0].field
    trivial = (
        trivial_gauss(field)
        if isinstance(field, RatFuncField)
        else trivial_handle(field)
    )
    rings = []

    def add(r):
        if not any(r == s for s in rings):
            rings.append(r)

    add(trivial)
    for h in handles:
        add(h)
    n_input = len(handles)
    changed = True
    while changed:
        changed = False
        snapshot = list(rings)
        for a in snapshot:
            for b in snapshot:
                j = join(a, b)
                if not any(j == s for s in rings):
                    add(j)
                    changed = True
    if len(rings) > n_input * n_input + 1:
        raise InvariantViolation("join closure exceeded the n^2 + 1 bound")
    rings.sort(key=handle_sort_key)
    names = {}
    counter = 0
    for r in rings:
        if handle_is_trivial(r):
            names[id(r)] = "_"
        else:
            names[id(r)] = f"v{counter}"
            counter += 1
    parent = {}
    for r in rings:
        if handle_is_trivial(r):
            continue
        overs = [s for s in rings if not (s == r) and handle_contains(s, r)]
        direct = None
        for cand in overs:
            if all(handle_contains(o, cand) for o in overs):
                direct = cand
                break
        if direct is None:
            raise InvariantViolation("over-rings of a handle do not form a chain")
        parent[names[id(r)]] = names[id(direct)]
    tree = FiniteTree("_", parent)
    assignment = {names[id(r)]: r for r in rings}
    return tree, TP0Structure(tree, field, assignment)


# -- relative algebraic closure of residue extensions -------------------------------


def residue_extension_rac(h_K, h_L) -> bool:
    """Whether the residue extension of h_L over h_K is relatively
    algebraically closed, for the shipped field kinds.

    Transcendental steps (constants inside a rational function field)
    qualify; algebraic residue steps qualify only when they are equalities.
    """
    if isinstance(h_K, ValuationHandle) and isinstance(h_L, ValuationHandle):
        # same-field or number-field extension: residue fields must agree
        if h_K.is_trivial() and h_L.is_trivial():
            return h_K.field == h_L.field
        return (h_K.e, h_K.f) == (h_L.e, h_L.f)
    if isinstance(h_L, GaussHandle):
        # res = (res base)(t) over res base: purely transcendental
        return True
    if isinstance(h_L, ComposedHandle):
        # res = (res constants)[y]/(place): algebraic unless degree 1
        return h_L.place.degree() == 1
    return False


class FiberReport:
    __slots__ = ("sizes", "uniform", "ratio", "total_big", "total_small")

    def __init__(self, sizes, uniform, ratio, total_big, total_small):
        self.sizes = sizes
        self.uniform = uniform
        self.ratio = ratio
        self.total_big = total_big
        self.total_small = total_small


def fiber_report(
    S_K: TP0Structure,
    S_L: TP0Structure,
    Kprime: NumberField,
    emb: FieldEmbedding,
) -> FiberReport:
    """Fibers of the restriction map between structure extension sets.

    ``S_L`` lives on K(t) with constants S_K.field, extending S_K
    node-wise with relatively algebraically closed residue extensions;
    ``emb`` embeds K into the finite normal K'.  The report compares all
    structure extensions of S_L to K'(t) with those of S_K to K',
    realized as the partial choices of one choice system on the product
    of the tree with a two-element chain.
    """
    if not S_L.is_function_field() or S_L.field.coeff_field != S_K.field:
        raise PreconditionError(
            "supported shape: S_L on K(t) with constants S_K.field"
        )
    if S_L.tree != S_K.tree:
        raise PreconditionError("structures must share the tree")
    if emb.source != S_K.field or emb.target != Kprime:
        raise PreconditionError("embedding must map K into K'")
    for n in S_K.tree.nodes_sorted():
        hK, hL = S_K.assignment[n], S_L.assignment[n]
        if n == S_K.tree.bottom:
            continue
        base = (
            hL.base if isinstance(hL, GaussHandle) else hL.coarse.base
        )
        if base != hK:
            raise PreconditionError(f"S_L does not extend S_K at node {n!r}")
        if not residue_extension_rac(hK, hL):
            raise PreconditionError(
                f"residue extension at node {n!r} is not relatively "
                "algebraically closed"
            )

    tree = S_K.tree
    nodes = tree.nodes_sorted()
    elements = [(n, lvl) for n in nodes for lvl in (0, 1)]
    pairs = []
    for n in nodes:
        pairs.append(((n, 0), (n, 1)))
        if n != tree.bottom:
            par = tree.parent[n]
            pairs.append(((par, 0), (n, 0)))
            pairs.append(((par, 1), (n, 1)))
    poset = Poset(elements, pairs)

    target_small = Kprime
    target_big = RatFuncField(Kprime, S_L.field.variable)
    sets: dict = {}
    tags: dict = {}

    def tag(handle):
        key = repr(handle_sort_key(handle))
        tags[key] = handle
        return key

    for n in nodes:
        hK, hL = S_K.assignment[n], S_L.assignment[n]
        if handle_is_trivial(hK):
            small_exts = [trivial_handle(Kprime)]
        else:
            small_exts = extend_valuation(hK, Kprime, emb)
        if handle_is_trivial(hL):
            big_exts = [trivial_gauss(target_big)]
        elif isinstance(hL, GaussHandle):
            big_exts = gauss_extend(hL, Kprime, emb)
        else:
            big_exts = [
                ext
                for coarse in gauss_extend(hL.coarse, Kprime, emb)
                for ext in compose_extensions(hL, coarse, emb)
            ]
        sets[(n, 0)] = [tag(h) for h in small_exts]
        sets[(n, 1)] = [tag(h) for h in big_exts]

    def constant_restriction(handle):
        if isinstance(handle, GaussHandle):
            return handle.base
        return handle.coarse.base

    relations: dict = {}
    for n in nodes:
        rel = set()
        for a in sets[(n, 1)]:
            for b in sets[(n, 0)]:
                if constant_restriction(tags[a]) == tags[b]:
                    rel.add((a, b))
        relations[((n, 1), (n, 0))] = rel
        if n != tree.bottom:
            par = tree.parent[n]
            for lvl in (0, 1):
                rel = set()
                for a in sets[(n, lvl)]:
                    for b in sets[(par, lvl)]:
                        if handle_contains(tags[b], tags[a]):
                            rel.add((a, b))
                relations[((n, lvl), (par, lvl))] = rel

    system = ChoiceSystem(
        poset, {e: sets[e] for e in elements}, relations
    )
    small_downset = frozenset((n, 0) for n in nodes)
    big_downset = frozenset(elements)
    sizes = system.fiber_sizes(big_downset, small_downset)
    total_small = len(sizes)
    total_big = sum(sizes)
    uniform = len(set(sizes)) == 1 and (not sizes or sizes[0] > 0)
    ratio = (
        Fraction(total_big, total_small) if total_small else Fraction(0)
    )
    return FiberReport(sizes, uniform, ratio, total_big, total_small)


def collapse_to_minimal_char_nodes(S: TP0Structure) -> TP0Structure:
    """Normal form over algebraic base fields: zero-characteristic nodes
    become trivial, and every node above a minimal positive node inherits
    that node's handle (which determines it)."""
    chi = S.char_function()
    mins = chi.minimal_positive_nodes()
    trivial = (
        trivial_gauss(S.field)
        if S.is_function_field()
        else trivial_handle(S.field)
    )
    assignment = {}
    for n in S.tree.nodes_sorted():
        if chi[n] == 0:
            assignment[n] = trivial
        else:
            anchors = [a for a in mins if S.tree.leq(a, n)]
            assignment[n] = S.assignment[anchors[0]]
    return TP0Structure(S.tree, S.field, assignment)
