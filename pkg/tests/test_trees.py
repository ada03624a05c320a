"""Trees, semilattice laws, choice systems, and the constant-fiber identity."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from treeval.errors import PreconditionError
from treeval.trees import (
    CharFunction,
    ChoiceSystem,
    FiniteTree,
    Poset,
    smoothness_fiber_identity,
)


def test_meet_examples():
    flat = FiniteTree.flat("_", ["a", "b"])
    assert flat.meet("a", "b") == "_"
    chain = FiniteTree.chain(["_", "a", "b"])
    assert chain.meet("a", "b") == "a"
    assert chain.meet("b", "b") == "b"
    assert flat.meet("a", "_") == "_"


def test_bad_trees_rejected():
    with pytest.raises(ValueError):
        FiniteTree("_", {"a": "b", "b": "a"})
    with pytest.raises(ValueError):
        FiniteTree("_", {"_": "a"})


def test_branches():
    assert FiniteTree.single().branches() == []
    flat = FiniteTree.flat("_", ["a", "b"])
    bs = flat.branches()
    assert sorted(b.bottom for b in bs) == ["a", "b"]
    mixed = FiniteTree("_", {"a": "_", "b": "a", "c": "_"})
    bs = mixed.branches()
    roots = {b.bottom: b for b in bs}
    assert set(roots) == {"a", "c"}
    assert roots["a"].nodes == frozenset({"a", "b"})
    assert roots["c"].nodes == frozenset({"c"})
    # node sets partition the non-bottom nodes
    union = set()
    for b in bs:
        assert not (union & set(b.nodes))
        union |= set(b.nodes)
    assert union == set(mixed.nodes) - {"_"}


@st.composite
def random_tree(draw):
    n = draw(st.integers(min_value=0, max_value=6))
    names = [f"n{i}" for i in range(n)]
    parent = {}
    for i, name in enumerate(names):
        pool = ["_"] + names[:i]
        parent[name] = draw(st.sampled_from(pool))
    return FiniteTree("_", parent)


@given(random_tree())
@settings(max_examples=50, deadline=None)
def test_meet_semilattice_laws(tree):
    nodes = tree.nodes_sorted()
    for a in nodes:
        assert tree.meet(a, a) == a
        assert tree.meet(a, tree.bottom) == tree.bottom
        for b in nodes:
            assert tree.meet(a, b) == tree.meet(b, a)
            for c in nodes:
                assert tree.meet(tree.meet(a, b), c) == tree.meet(a, tree.meet(b, c))


@given(random_tree())
@settings(max_examples=30, deadline=None)
def test_intervals_are_chains(tree):
    for n in tree.nodes_sorted():
        path = tree.ancestors(n)
        for a, b in itertools.combinations(path, 2):
            assert tree.leq(a, b) or tree.leq(b, a)


def test_tree_serialization_roundtrip():
    tree = FiniteTree("_", {"a": "_", "b": "a", "c": "_"})
    assert FiniteTree.from_text(tree.to_text()) == tree
    assert FiniteTree.from_text("_") == FiniteTree.single()


def test_char_function():
    tree = FiniteTree("_", {"a": "_", "b": "a"})
    chi = CharFunction(tree, {"_": 0, "a": 5, "b": 5})
    assert chi.minimal_positive_nodes() == ["a"]
    with pytest.raises(ValueError):
        CharFunction(tree, {"_": 0, "a": 5, "b": 7})
    chi2 = CharFunction.from_text(tree, chi.to_text())
    assert chi2.assignment == chi.assignment


def test_poset_covers():
    # product of chain _ < a with {0,1}
    pairs = [(("_", 0), ("a", 0)), (("_", 1), ("a", 1)),
             (("_", 0), ("_", 1)), (("a", 0), ("a", 1))]
    elems = [("_", 0), ("_", 1), ("a", 0), ("a", 1)]
    q = Poset(elems, pairs)
    assert set(q.covers()) == {
        (("a", 0), ("_", 0)),
        (("a", 1), ("_", 1)),
        (("_", 1), ("_", 0)),
        (("a", 1), ("a", 0)),
    }
    assert q.lt(("_", 0), ("a", 1))


def simple_system(nx=2, ny=3, total=True):
    p = Poset(["x", "y"], [("x", "y")])  # x < y
    sets = {"x": [f"a{i}" for i in range(nx)], "y": [f"b{j}" for j in range(ny)]}
    rel = set(itertools.product(sets["y"], sets["x"]))
    if not total:
        rel.discard(("b0", "a0"))
    return ChoiceSystem(p, sets, {("y", "x"): rel})


def test_partial_choices_product():
    cs = simple_system()
    assert len(cs.partial_choices(frozenset())) == 1
    assert len(cs.partial_choices({"x"})) == 2
    assert len(cs.partial_choices({"x", "y"})) == 6
    with pytest.raises(PreconditionError):
        cs.partial_choices({"y"})


def test_partial_choice_restriction_consistency():
    cs = simple_system(total=False)
    full = cs.partial_choices({"x", "y"})
    small = {tuple(sorted(f.items())) for f in cs.partial_choices({"x"})}
    for f in full:
        assert tuple(sorted({"x": f["x"]}.items())) in small


def test_smoothness():
    cs = simple_system()
    assert cs.check_smooth_at("y") == 3
    # isolated element: fibers are the whole set
    p = Poset(["x"], [])
    lone = ChoiceSystem(p, {"x": ["a", "b", "c"]}, {})
    assert lone.check_smooth_at("x") == 3
    # singleton choice set with total relations
    one = simple_system(nx=1, ny=1)
    assert one.check_smooth_at("y") == 1


def test_non_smooth_detection():
    cs = simple_system(total=False)
    assert cs.check_smooth_at("y") is None
    sizes = cs.fiber_sizes({"x", "y"}, {"x"})
    assert sorted(sizes) == [2, 3]
    holds, _, product = smoothness_fiber_identity(cs, {"x", "y"}, {"x"})
    assert holds is None and product is None


def test_constant_fiber_identity():
    cs = simple_system()
    holds, sizes, product = smoothness_fiber_identity(cs, {"x", "y"}, set())
    assert holds and product == 6 and sizes == [6]
    holds, sizes, product = smoothness_fiber_identity(cs, {"x", "y"}, {"x"})
    assert holds and product == 3 and sizes == [3, 3]


def test_fiber_sizes_equal_sets():
    cs = simple_system()
    assert cs.fiber_sizes({"x"}, {"x"}) == [1, 1]
