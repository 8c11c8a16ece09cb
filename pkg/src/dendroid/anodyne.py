"""Certificates that an inclusion of sieves on Omega[T] is inner anodyne.

A certificate is a finite sequence of expansion steps. A step names a face
``(F, D)`` of ``T`` and an inner edge ``e`` of its domain ``S = F/D``; it is
the pushout of the inner horn ``Lambda^e[S] -> Omega[S]`` along ``S -> T`` and
adds exactly the two faces ``(F, D)`` and ``(F, D + e)``. It is legal when
neither face is present yet and every other face of ``S`` already is, which
makes the square a pushout.

Retracts are never searched for, so a failed search does not show that an
inclusion is not inner anodyne.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass

from .faces import Face, face_from_json, face_to_json
from .subobjects import Subobject, SubobjectError, image
from .trees import Tree, parse_tree

__all__ = [
    "ExpansionStep",
    "Certificate",
    "StepError",
    "CertificationNotFound",
    "Verification",
    "apply_step",
    "step_faces",
    "check_step",
    "certify_inner_anodyne",
    "verify_certificate",
]


class StepError(ValueError):
    pass


class CertificationNotFound(Exception):
    """No pushout-composition certificate exists within the search.

    Retract closure is not searched, so this does not prove the inclusion is
    not inner anodyne.
    """


@dataclass(frozen=True)
class ExpansionStep:
    face: Face
    inner_edge: str

    def to_json(self) -> dict:
        return {"face": face_to_json(self.face), "inner_edge": self.inner_edge}

    @classmethod
    def from_json(cls, data: Mapping) -> ExpansionStep:
        return cls(face_from_json(data["face"]), data["inner_edge"])


def step_faces(t: Tree, step: ExpansionStep) -> tuple[Face, Face]:
    """The two faces a step adds: the face itself and its contraction by ``e``."""
    f = step.face
    if f.subtree.edge is not None:
        raise StepError("an edge face has no inner edges")
    if step.inner_edge in f.contract or step.inner_edge not in f.subtree.inner_edges(t):
        raise StepError(f"{step.inner_edge!r} is not an inner edge of the domain of {f}")
    return f, Face(f.subtree, f.contract | {step.inner_edge})


def check_step(a: Subobject, step: ExpansionStep) -> str | None:
    """Why ``step`` cannot be applied to ``a``, or None if it can."""
    t = a.ambient
    try:
        top, contracted = step_faces(t, step)
    except StepError as exc:
        return str(exc)
    for g in (top, contracted):
        if g in a.members:
            return f"face {g} is already present"
    missing = image(t, top) - {top, contracted} - a.members
    if missing:
        worst = min(missing, key=Face.sort_key)
        return f"horn face {worst} is missing"
    return None


def apply_step(a: Subobject, step: ExpansionStep) -> Subobject:
    reason = check_step(a, step)
    if reason is not None:
        raise StepError(reason)
    top, contracted = step_faces(a.ambient, step)
    return Subobject(a.ambient, a.members | {top, contracted})


@dataclass(frozen=True)
class Certificate:
    ambient: Tree
    start: Subobject
    steps: tuple[ExpansionStep, ...]
    end: Subobject

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> dict:
        return {
            "tree": self.ambient.literal(),
            "start": self.start.to_json(),
            "steps": [s.to_json() for s in self.steps],
            "end": self.end.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: Mapping) -> Certificate:
        try:
            t = parse_tree(data["tree"])
            start = Subobject.from_json(data["start"], check=False)
            end = Subobject.from_json(data["end"], check=False)
            steps = tuple(ExpansionStep.from_json(s) for s in data["steps"])
        except (KeyError, TypeError) as exc:
            raise SubobjectError(f"malformed certificate: {exc}") from exc
        if start.ambient != t or end.ambient != t:
            raise SubobjectError("certificate subobjects live on a different tree")
        return cls(t, start, steps, end)


@dataclass(frozen=True)
class Verification:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "failed_step": self.failed_step, "reason": self.reason}


def verify_certificate(c: Certificate) -> Verification:
    """Replay ``c`` from its start and compare with its end."""
    if bad := c.start.closure_violation():
        return Verification(False, None, f"start is not downward closed: {bad[1]} missing")
    current = c.start
    for i, step in enumerate(c.steps):
        reason = check_step(current, step)
        if reason is not None:
            return Verification(False, i, reason)
        current = apply_step(current, step)
    if current.members != c.end.members:
        extra = len(current.members - c.end.members)
        short = len(c.end.members - current.members)
        return Verification(
            False, None, f"replay ends {short} face(s) short and {extra} face(s) over"
        )
    return Verification(True)


def _candidates(current: frozenset[Face], target: frozenset[Face], t: Tree):
    """Legal-looking steps in search order.

    Subtree vertex count ascending (the filtration by subtree size), then
    contraction set size descending, then face and edge names.
    """
    todo = target - current
    out = []
    for f in todo:
        s = f.subtree
        if s.edge is not None:
            continue
        for e in s.inner_edges(t) - f.contract:
            if Face(s, f.contract | {e}) in todo:
                out.append(((s.n_vertices, -len(f.contract), f.sort_key(), e), f, e))
    out.sort(key=lambda item: item[0])
    return [(f, e) for _, f, e in out]


def certify_inner_anodyne(a: Subobject, b: Subobject, max_states: int = 100_000) -> Certificate:
    """Find expansion steps turning ``a`` into ``b``.

    Greedy in the search order above, with depth-first backtracking over
    visited states when the greedy choice stalls.
    """
    if not a <= b:
        raise SubobjectError("the source is not contained in the target")
    for name, s in (("source", a), ("target", b)):
        if bad := s.closure_violation():
            raise SubobjectError(f"{name} is not downward closed: {bad[1]} missing")
    t = a.ambient
    target = b.members
    if (len(target) - len(a.members)) % 2:
        raise CertificationNotFound("an odd number of faces cannot be added two at a time")

    visited: set[frozenset[Face]] = set()
    path: list[ExpansionStep] = []

    def legal(current, f, e):
        contracted = Face(f.subtree, f.contract | {e})
        return not (image(t, f) - {f, contracted}) - current

    def search(current: frozenset[Face]) -> bool:
        if current == target:
            return True
        if current in visited or len(visited) >= max_states:
            return False
        visited.add(current)
        for f, e in _candidates(current, target, t):
            if legal(current, f, e):
                path.append(ExpansionStep(f, e))
                if search(current | {f, Face(f.subtree, f.contract | {e})}):
                    return True
                path.pop()
        return False

    if not search(a.members):
        raise CertificationNotFound(
            f"no pushout certificate from {len(a)} to {len(b)} faces "
            f"after {len(visited)} states; retracts were not searched"
        )
    return Certificate(t, a, tuple(path), b)
