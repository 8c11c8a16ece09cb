from __future__ import annotations

import json

import pytest

from dendroid.anodyne import (
    Certificate,
    CertificationNotFound,
    ExpansionStep,
    StepError,
    apply_step,
    certify_inner_anodyne,
    check_step,
    verify_certificate,
)
from dendroid.faces import Face
from dendroid.subobjects import (
    SubobjectError,
    boundary,
    empty,
    full,
    inner_horn,
    segal_core,
)
from dendroid.trees import enumerate_trees, linear, parse_tree


def test_two_vertex_core_needs_one_step():
    t = parse_tree("r(a(b),c)")
    cert = certify_inner_anodyne(segal_core(t), full(t))
    assert len(cert) == 1
    assert cert.steps[0] == ExpansionStep(Face.of({"r", "a"}), "a")
    assert verify_certificate(cert)


def test_linear_three_needs_four_steps():
    cert = certify_inner_anodyne(segal_core(linear(3)), full(linear(3)))
    assert len(cert) == 4
    assert verify_certificate(cert)


@pytest.mark.parametrize("t", [k.tree for k in enumerate_trees(3, 3) if k.tree.n_vertices >= 2], ids=str)
def test_horns_certify_in_one_step(t):
    for e in t.inner_edges:
        cert = certify_inner_anodyne(inner_horn(t, e), full(t))
        assert len(cert) == 1 and verify_certificate(cert)


def test_steps_add_exactly_two_faces():
    t = linear(3)
    cert = certify_inner_anodyne(segal_core(t), full(t))
    current = cert.start
    for step in cert.steps:
        nxt = apply_step(current, step)
        assert len(nxt) - len(current) == 2
        current = nxt
    assert current == full(t)


def test_illegal_step_explains_itself():
    t = linear(2)
    step = ExpansionStep(Face.of({"1", "2"}), "1")
    assert check_step(full(t), step) is not None
    assert "missing" in check_step(empty(t), step)
    with pytest.raises(StepError):
        apply_step(full(t), step)
    bad_edge = ExpansionStep(Face.of({"1", "2"}), "0")
    assert "not an inner edge" in check_step(segal_core(t), bad_edge)


def _tamper(cert: Certificate, **changes) -> Certificate:
    data = cert.to_json()
    data.update(changes)
    return Certificate.from_json(data)


def test_tampered_certificates_fail():
    t = linear(3)
    cert = certify_inner_anodyne(segal_core(t), full(t))
    data = cert.to_json()

    swapped = _tamper(cert, steps=data["steps"][::-1])
    v = verify_certificate(swapped)
    assert not v and v.failed_step == 0

    dropped = _tamper(cert, steps=data["steps"][1:])
    assert not verify_certificate(dropped)

    truncated = _tamper(cert, steps=data["steps"][:-1])
    v = verify_certificate(truncated)
    assert not v and "short" in v.reason

    wrong_end = _tamper(cert, end=boundary(t).to_json())
    assert not verify_certificate(wrong_end)

    not_closed = dict(data)
    not_closed["start"] = {"tree": data["tree"], "members": data["start"]["members"][-1:]}
    assert not verify_certificate(Certificate.from_json(not_closed))


def test_certificate_json_round_trip():
    t = parse_tree("r(a(x,y),b(z))")
    cert = certify_inner_anodyne(segal_core(t), full(t))
    again = Certificate.from_json(json.loads(cert.dumps()))
    assert again == cert
    assert verify_certificate(again)


def test_malformed_certificate():
    with pytest.raises(SubobjectError):
        Certificate.from_json({"tree": "r(a)"})


def test_not_found_cases():
    t = linear(2)
    # the boundary misses a single face, and steps add two
    with pytest.raises(CertificationNotFound, match="odd"):
        certify_inner_anodyne(boundary(t), full(t))
    c2 = parse_tree("r(a,b)")
    with pytest.raises(CertificationNotFound, match="retracts"):
        certify_inner_anodyne(empty(c2), full(c2))
    with pytest.raises(SubobjectError):
        certify_inner_anodyne(full(t), segal_core(t))
