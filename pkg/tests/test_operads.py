from __future__ import annotations

import json
from itertools import permutations
from math import factorial, prod

import pytest

from dendroid.faces import Degeneracy, Face, TreeIso, classify_codim1, compose_faces, face_domain, faces
from dendroid.fixtures import FIXTURES, ass, com, signature_operad, two_colour_operad, two_object_category
from dendroid.operads import (
    ArityError,
    ColouredOperad,
    Labeling,
    OperadError,
    load_operad,
    nerve_act,
    nerve_degenerate,
    nerve_evaluate,
    nerve_pull,
    nerve_restrict,
    validate_operad,
)
from dendroid.trees import automorphisms, corolla, enumerate_trees, eta, isomorphisms, linear, parse_tree, relabel, split_edge

from oracles import composable_strings


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixtures_validate(name):
    assert validate_operad(FIXTURES[name]()) == []


def test_fixture_sizes():
    assert len(com(3).operations) == 4
    assert len(ass(3).operations) == 10
    assert len(two_object_category().operations) == 5
    assert len(two_colour_operad(3).operations) == 7


def test_corrupt_com_composite_names_the_entry():
    p = com(3)
    p.composition[("x,x->x", 0, "x->x")] = "x,x,x->x"
    bad = validate_operad(p)
    assert len(bad) == 1
    assert "x,x->x o_0 x->x" in bad[0].detail


def test_corrupt_ass_composite_breaks_associativity():
    p = ass(3)
    p.composition[("w[0,1]", 0, "w[0,1]")] = "w[1,0,2]"
    axioms = {v.axiom for v in validate_operad(p)}
    assert "associativity" in axioms


def test_corrupt_ass_symmetric_table():
    p = ass(3)
    p.symmetric[("w[0,1]", (1, 0))] = "w[0,1]"
    axioms = {v.axiom for v in validate_operad(p)}
    assert {"symmetric action", "equivariance"} <= axioms


def test_missing_identity_and_unknown_colour():
    p = com(2)
    del p.identities["x"]
    assert any(v.axiom == "unit" for v in validate_operad(p))
    q = signature_operad(["a"], lambda ins, out: True, 1)
    q.operations["bad"] = q.operations["a->a"].__class__("bad", ("z",), "a")
    assert any(v.axiom == "colour discipline" for v in validate_operad(q))


def test_json_round_trip(tmp_path):
    for name, make in FIXTURES.items():
        p = make()
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(p.to_json()))
        q = load_operad(path)
        assert q.to_json() == p.to_json()


def test_load_rejects_invalid(tmp_path):
    data = com(2).to_json()
    for entry in data["composition"]:
        if entry["outer"] == "x,x->x" and entry["inner"] == "x->x":
            entry["result"] = "x,x->x" if entry["result"] != "x,x->x" else "x->x"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(OperadError):
        load_operad(path)
    with pytest.raises(OperadError):
        ColouredOperad.from_json({"colours": ["x"]})


# nerves ----------------------------------------------------------------------


def test_nerve_counts():
    assert len(nerve_evaluate(ass(3), corolla(2))) == 2
    assert len(nerve_evaluate(com(3), corolla(2))) == 1
    assert len(nerve_evaluate(two_colour_operad(), eta())) == 2


@pytest.mark.parametrize("t", [k.tree for k in enumerate_trees(3, 3)], ids=str)
def test_nerve_count_oracles(t):
    assert len(nerve_evaluate(com(3), t)) == 1
    assert len(nerve_evaluate(ass(3), t)) == prod(factorial(t.arity(v)) for v in t.vertices)


@pytest.mark.parametrize("n", range(5))
def test_category_nerve_counts_strings(n):
    cat = two_object_category()
    arrows = {name: (o.inputs[0], o.output) for name, o in cat.operations.items()}
    assert len(nerve_evaluate(cat, linear(n))) == composable_strings(cat.colours, arrows, n)


def test_arity_truncation_refuses():
    with pytest.raises(ArityError):
        nerve_evaluate(com(2), corolla(3))


def test_inner_face_is_partial_composite():
    p = ass(3)
    t = parse_tree("r(a(x,y),b)")
    for x in nerve_evaluate(p, t):
        ops = x.op_map()
        y = nerve_restrict(p, t, Face.of({"r", "a"}, {"a"}), x)
        assert y.op_map()["r"] == p.compose(ops["r"], 0, ops["a"])


def _elementary(t):
    internal, external = classify_codim1(t)
    return internal + external


FUNCTORIAL_TREES = [k.tree for k in enumerate_trees(4, 2)] + [k.tree for k in enumerate_trees(3, 3)][17::4]


FUNCTORIAL_CASES = [
    (name, t)
    for name in ["ass", "two-colour", "category"]
    for t in FUNCTORIAL_TREES
    if t.max_arity <= FIXTURES[name]().max_arity
]


@pytest.mark.parametrize("name,t", FUNCTORIAL_CASES, ids=lambda v: str(v))
def test_restriction_is_functorial(name, t):
    p = FIXTURES[name]()
    for x in nerve_evaluate(p, t)[:12]:
        for f in _elementary(t):
            d = face_domain(t, f)
            if d.max_arity > p.max_arity:
                continue
            y = nerve_restrict(p, t, f, x)
            assert y in nerve_evaluate(p, d)
            for g in _elementary(d):
                if face_domain(d, g).max_arity > p.max_arity:
                    continue
                assert nerve_restrict(p, d, g, y) == nerve_restrict(p, t, compose_faces(t, f, g), x)


@pytest.mark.parametrize("t", [parse_tree("r(a(x,y),b(u,v))"), parse_tree("r(a,b,c)"), parse_tree("r(a(x,y,z))")], ids=str)
def test_isomorphism_action_is_functorial(t):
    p = ass(3)
    auts = automorphisms(t)
    for x in nerve_evaluate(p, t):
        for a in auts:
            for b in auts:
                ab = {e: a[b[e]] for e in t.edges}
                once = nerve_pull(p, TreeIso.of(t, t, ab), x)
                twice = nerve_pull(p, TreeIso.of(t, t, b), nerve_pull(p, TreeIso.of(t, t, a), x))
                assert once == twice


def test_evaluation_commutes_with_relabelling():
    p = ass(3)
    t = parse_tree("r(a(x,y),b)")
    names = {"r": "R", "a": "A", "x": "X", "y": "Y", "b": "B"}
    s = relabel(t, names)
    assert len(isomorphisms(s, t)) == 2
    phi = {new: old for old, new in names.items()}
    pulled = sorted(nerve_pull(p, TreeIso.of(s, t, phi), x) for x in nerve_evaluate(p, t))
    assert pulled == nerve_evaluate(p, s)


def test_faces_are_natural_for_isomorphisms():
    p = ass(3)
    t = parse_tree("r(a(x,y),b(u,v))")
    for a in automorphisms(t):
        for f in faces(t):
            fa = Face(f.subtree.__class__(
                a[f.subtree.edge] if f.subtree.edge else None,
                frozenset(a[v] for v in f.subtree.vertices),
            ), frozenset(a[e] for e in f.contract))
            dom, dom_a = face_domain(t, f), face_domain(t, fa)
            if dom.max_arity > p.max_arity:
                continue
            iso = TreeIso.of(dom, dom_a, {e: a[e] for e in dom.edges})
            for x in nerve_evaluate(p, t):
                lhs = nerve_restrict(p, t, f, nerve_pull(p, TreeIso.of(t, t, a), x))
                rhs = nerve_pull(p, iso, nerve_restrict(p, t, fa, x))
                assert lhs == rhs


@pytest.mark.parametrize("name", ["com", "ass", "category"])
def test_degeneracy_then_section_is_identity(name):
    p = FIXTURES[name]()
    for k in enumerate_trees(2, p.max_arity):
        t = k.tree
        for x in nerve_evaluate(p, t):
            for e in t.edges:
                s = split_edge(t, e, "new")
                y = nerve_degenerate(p, t, Degeneracy(e, "new"), x)
                assert y in nerve_evaluate(p, s)
                if "new" in s.inner_edges:
                    section = Face.of(s.vertex_set, {"new"})
                elif s.n_vertices == 1:
                    section = Face.edge(e)
                else:
                    section = Face.of(s.vertex_set - {e})
                assert nerve_restrict(p, s, section, y) == x


def test_nerve_act_dispatch():
    p = ass(3)
    t = parse_tree("r(a,b)")
    x = nerve_evaluate(p, t)[0]
    swap = {"r": "r", "a": "b", "b": "a"}
    assert nerve_act(p, t, TreeIso.of(t, t, swap), x) != x
    assert nerve_act(p, t, Face.edge("a"), x) == Labeling.of({"a": "x"}, {})
    assert nerve_act(p, t, Degeneracy("r", "n"), x).op_map()["r"] == "w[0]"


def test_permutation_conventions():
    p = ass(3)
    for s in permutations(range(3)):
        for t in permutations(range(3)):
            st = tuple(s[t[j]] for j in range(3))
            assert p.act(p.act("w[0,1,2]", s), t) == p.act("w[0,1,2]", st)


def _split_oracle(p, t, x, splits):
    """Labelling of a tree with unary vertices inserted, built directly from ``x``.

    Each inserted vertex carries the identity of its edge colour and every
    other vertex keeps the operation it had in ``x``.
    """
    colours = x.colour_map()
    ops = {v: ("op", op) for v, op in x.op_map().items()}
    origin = {e: e for e in t.edges}
    tree = t
    for e, n in splits:
        if tree.is_vertex(e):
            ops[n] = ops[e]
        ops[e] = ("id", None)
        origin[n] = origin[e]
        tree = split_edge(tree, e, n)
    col = {e: colours[origin[e]] for e in tree.edges}
    lab = {v: (p.identity(col[v]) if kind == "id" else op) for v, (kind, op) in ops.items()}
    return tree, Labeling.of(col, lab)


def _apply_splits(p, t, x, splits):
    for e, n in splits:
        x = nerve_degenerate(p, t, Degeneracy(e, n), x)
        t = split_edge(t, e, n)
    return t, x


@pytest.mark.parametrize("name", ["ass", "two-colour", "category"])
def test_forced_extension_on_degenerate_dendrices(name):
    # the value at a degenerate dendrex is forced by the value at its
    # nondegenerate image, whatever order the degeneracies are applied in
    p = FIXTURES[name]()
    for k in enumerate_trees(2, min(2, p.max_arity)):
        t = k.tree
        for x in nerve_evaluate(p, t):
            for e1 in t.edges:
                for e2 in t.edges:
                    forward = [(e1, "n1"), (e2, "n2")]
                    s, y = _apply_splits(p, t, x, forward)
                    s_oracle, y_oracle = _split_oracle(p, t, x, forward)
                    assert s == s_oracle and y == y_oracle
                    assert y in nerve_evaluate(p, s)
                    if e1 != e2:
                        s_back, y_back = _apply_splits(p, t, x, forward[::-1])
                        assert s_back == s and y_back == y
