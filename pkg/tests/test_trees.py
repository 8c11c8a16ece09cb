from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dendroid.trees import (
    Tree,
    TreeError,
    TreeSyntaxError,
    automorphisms,
    canonicalize,
    corolla,
    enumerate_trees,
    eta,
    isomorphisms,
    linear,
    parse_tree,
    relabel,
    split_edge,
    tree_from_key,
)

from oracles import edge_bijection_automorphisms, planar_shapes


def test_parse_counts_edges_and_vertices():
    t = parse_tree("r(a(x,y),b())")
    assert t.n_vertices == 3
    assert len(t.edges) == 5
    assert set(t.leaves) == {"x", "y"}
    assert set(t.inner_edges) == {"a", "b"}
    assert t.arity("b") == 0


def test_nullary_vertex_differs_from_leaf():
    assert canonicalize(parse_tree("r(a())")).key != canonicalize(parse_tree("r(a)")).key
    assert parse_tree("a()").n_vertices == 1
    assert parse_tree("a").n_vertices == 0


@pytest.mark.parametrize(
    "bad",
    ["", "r(", "r(a,,b)", "r(a)(b)", "r(a,a)", "r(r)", "(a)", "r(a b)"],
)
def test_malformed_literals_raise(bad):
    with pytest.raises(TreeError):
        parse_tree(bad)


def test_syntax_error_reports_position():
    with pytest.raises(TreeSyntaxError) as err:
        parse_tree("r(a(b)")
    assert err.value.position == 6


def test_constructors():
    assert eta().n_vertices == 0
    c = corolla(3)
    assert c.n_vertices == 1 and len(c.leaves) == 3
    lin = linear(3)
    assert lin.root == "3" and lin.inputs("2") == ("1",) and lin.leaves == ("0",)


def test_literal_round_trip():
    for k in enumerate_trees(3, 3):
        assert parse_tree(k.tree.literal()) == k.tree


def test_split_edge_inserts_unary_vertex():
    t = parse_tree("r(a,b)")
    s = split_edge(t, "r", "n")
    assert s.inputs("r") == ("n",)
    assert s.inputs("n") == ("a", "b")
    leafy = split_edge(t, "a", "n")
    assert leafy.inputs("a") == ("n",) and leafy.is_leaf("n")


def test_automorphism_counts():
    assert len(automorphisms(parse_tree("r(a(x,y),b(u,v))"))) == 8
    assert len(automorphisms(corolla(3))) == 6
    assert automorphisms(corolla(3))[0] == {e: e for e in corolla(3).edges}


@pytest.mark.parametrize("key", [k.key for k in enumerate_trees(3, 3)])
def test_automorphisms_match_brute_force(key):
    t = tree_from_key(key)
    fast = sorted(tuple(sorted(m.items())) for m in automorphisms(t))
    slow = sorted(tuple(sorted(m.items())) for m in edge_bijection_automorphisms(t))
    assert fast == slow


@pytest.mark.parametrize("nv,na", [(0, 3), (1, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)])
def test_enumeration_matches_planar_oracle(nv, na):
    keys = [k.key for k in enumerate_trees(nv, na)]
    assert len(keys) == len(set(keys))
    assert set(keys) == planar_shapes(nv, na)


def test_enumeration_counts():
    assert [len(enumerate_trees(n, 2)) for n in range(5)] == [1, 4, 10, 28, 82]
    assert [len(enumerate_trees(n, 3)) for n in range(5)] == [1, 5, 17, 73, 357]
    assert [k.key for k in enumerate_trees(1, 2)] == ["I", "()", "(I)", "(II)"]


def test_enumeration_is_ordered_by_size():
    sizes = [k.tree.n_vertices for k in enumerate_trees(4, 3)]
    assert sizes == sorted(sizes)


def test_tree_from_key_is_canonical():
    for k in enumerate_trees(4, 3):
        assert tree_from_key(k.key) == k.tree
        assert canonicalize(k.tree).key == k.key


@st.composite
def labelled_trees(draw, max_vertices=5, max_arity=3):
    keys = enumerate_trees(min(max_vertices, 4), max_arity)
    t = draw(st.sampled_from(keys)).tree
    names = draw(
        st.lists(
            st.text("abcdefgxyz", min_size=1, max_size=3),
            min_size=len(t.edges),
            max_size=len(t.edges),
            unique=True,
        )
    )
    t = relabel(t, dict(zip(t.edges, names)))
    seed = draw(st.integers(0, 2**16))
    rng = random.Random(seed)
    # shuffle the stored order of inputs, which must not matter
    shuffled = {v: rng.sample(list(t.inputs(v)), t.arity(v)) for v in t.vertices}
    return Tree.from_inputs(t.root, shuffled)


@settings(max_examples=150, deadline=None)
@given(labelled_trees())
def test_canonical_key_ignores_names_and_order(t):
    ck = canonicalize(t)
    assert relabel(t, ck.relabel).edge_set == ck.tree.edge_set
    assert canonicalize(ck.tree).key == ck.key
    assert isomorphisms(t, ck.tree)


@settings(max_examples=100, deadline=None)
@given(labelled_trees(), labelled_trees())
def test_isomorphic_iff_same_key(s, t):
    same = canonicalize(s).key == canonicalize(t).key
    assert bool(isomorphisms(s, t)) == same
