from __future__ import annotations

import pytest

from dendroid.faces import Face, classify_codim1, compose_faces, face_domain, faces, identity_face
from dendroid.subobjects import (
    Subobject,
    SubobjectError,
    boundary,
    empty,
    external_boundary,
    filtration_stage,
    full,
    generated,
    image,
    in_boundary,
    in_external_boundary,
    in_filtration_stage,
    in_inner_horn,
    in_segal_core,
    inner_horn,
    segal_core,
)
from dendroid.trees import canonicalize, corolla, enumerate_trees, eta, linear, parse_tree

TREES = [k.tree for k in enumerate_trees(3, 3)] + [k.tree for k in enumerate_trees(4, 2)][28::5]


def _below(t, f):
    """Faces reachable from ``f`` by composing with faces of its domain, found without ``image``."""
    return {compose_faces(t, f, g) for g in faces(face_domain(t, f))}


@pytest.mark.parametrize("t", TREES, ids=str)
def test_constructors_agree_with_closed_forms(t):
    every = faces(t)
    assert boundary(t).members == {f for f in every if in_boundary(t, f)}
    assert external_boundary(t).members == {f for f in every if in_external_boundary(t, f)}
    assert segal_core(t).members == {f for f in every if in_segal_core(t, f)}
    for e in t.inner_edges:
        assert inner_horn(t, e).members == {f for f in every if in_inner_horn(t, e, f)}
    for n in range(1, t.n_vertices + 1):
        assert filtration_stage(t, n).members == {f for f in every if in_filtration_stage(t, n, f)}


@pytest.mark.parametrize("t", TREES, ids=str)
def test_constructed_subobjects_are_sieves(t):
    for a in [boundary(t), external_boundary(t), segal_core(t), full(t), empty(t)]:
        assert a.is_downward_closed()
        for f in a.members:
            assert _below(t, f) <= a.members


@pytest.mark.parametrize("t", [x for x in TREES if x.n_vertices >= 2], ids=str)
def test_inclusion_chain(t):
    core, ext = segal_core(t), external_boundary(t)
    assert core <= ext
    for e in t.inner_edges:
        horn = inner_horn(t, e)
        assert ext <= horn < full(t)
        assert len(full(t)) - len(horn) == 2


def test_small_sizes():
    assert len(boundary(linear(2))) == 6
    assert len(external_boundary(linear(2))) == 5
    assert len(segal_core(linear(2))) == 5
    assert len(boundary(corolla(2))) == 3
    assert len(segal_core(corolla(2))) == 4
    assert segal_core(eta()).is_full


@pytest.mark.parametrize("n", range(5))
def test_corolla_boundary_is_its_leaves_and_root(n):
    b = boundary(corolla(n))
    assert len(b) == n + 1
    assert all(f.subtree.edge is not None for f in b.members)


def test_image_is_downward_closed_and_contains_face():
    t = parse_tree("r(a(x,y),b())")
    for f in faces(t):
        im = image(t, f)
        assert f in im
        for g in im:
            assert image(t, g) <= im


def test_lattice_operations():
    t = linear(3)
    a, b = inner_horn(t, "1"), inner_horn(t, "2")
    assert (a & b) <= a <= (a | b)
    assert (a | b) == boundary(t)
    with pytest.raises(SubobjectError):
        _ = a | segal_core(linear(2))


def test_maximal_members_generate():
    t = parse_tree("r(a(x,y),b)")
    for a in [segal_core(t), boundary(t), inner_horn(t, "a")]:
        assert generated(t, a.maximal_members()) == a


def test_json_round_trip_and_validation():
    t = parse_tree("r(a(x,y),b)")
    a = inner_horn(t, "a")
    assert Subobject.from_json(a.to_json()) == a
    broken = a.to_json()
    broken["members"] = broken["members"][-1:]
    with pytest.raises(SubobjectError, match="not downward closed"):
        Subobject.from_json(broken)
    assert Subobject.from_json(broken, check=False).closure_violation() is not None


def test_transport_matches_constructor():
    t = parse_tree("r(a(x,y),b)")
    ck = canonicalize(t)
    assert segal_core(t).transport(ck.relabel, ck.tree) == segal_core(ck.tree)


def test_inner_horn_rejects_outer_edge():
    with pytest.raises(SubobjectError):
        inner_horn(linear(2), "0")


def test_filtration_ends_in_full():
    t = parse_tree("r(a(x),b(y))")
    stages = [filtration_stage(t, n) for n in range(1, t.n_vertices + 1)]
    assert all(stages[i] <= stages[i + 1] for i in range(len(stages) - 1))
    assert stages[-1] == full(t)
    assert stages[0] == segal_core(t) | generated(t, [Face.edge(e) for e in t.edges])


def test_boundary_generators_are_codim_one():
    t = linear(3)
    internal, external = classify_codim1(t)
    assert boundary(t).maximal_members() == sorted(internal + external, key=Face.sort_key)
    assert identity_face(t) not in boundary(t)
