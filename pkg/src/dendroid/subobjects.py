"""Sieves on a representable: downward-closed sets of faces of a fixed tree.

Constructors build each subobject as a union of images of generating faces.
The ``in_*`` predicates give the same subobjects in closed form; the test
suite checks that both agree.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache

from .faces import (
    Face,
    FaceError,
    check_face,
    classify_codim1,
    compose_faces,
    face_domain,
    face_from_json,
    face_to_json,
    faces,
    identity_face,
    subtrees,
    transport_face,
)
from .trees import Tree, parse_tree

__all__ = [
    "Subobject",
    "SubobjectError",
    "image",
    "generated",
    "full",
    "empty",
    "boundary",
    "external_boundary",
    "inner_horn",
    "segal_core",
    "filtration_stage",
    "in_boundary",
    "in_external_boundary",
    "in_inner_horn",
    "in_segal_core",
    "in_filtration_stage",
]


class SubobjectError(ValueError):
    pass


@lru_cache(maxsize=None)
def image(t: Tree, f: Face) -> frozenset[Face]:
    """All faces of ``t`` that factor through ``f`` (the image of Omega[F/D])."""
    dom = face_domain(t, f)
    return frozenset(compose_faces(t, f, g) for g in faces(dom))


@dataclass(frozen=True)
class Subobject:
    ambient: Tree
    members: frozenset[Face]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, f: Face) -> bool:
        return f in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())

    def _same_ambient(self, other: Subobject) -> None:
        if self.ambient != other.ambient:
            raise SubobjectError(
                f"ambient mismatch: {self.ambient} vs {other.ambient}"
            )

    def __or__(self, other: Subobject) -> Subobject:
        self._same_ambient(other)
        return Subobject(self.ambient, self.members | other.members)

    def __and__(self, other: Subobject) -> Subobject:
        self._same_ambient(other)
        return Subobject(self.ambient, self.members & other.members)

    def __le__(self, other: Subobject) -> bool:
        self._same_ambient(other)
        return self.members <= other.members

    def __lt__(self, other: Subobject) -> bool:
        self._same_ambient(other)
        return self.members < other.members

    union = __or__
    intersect = __and__

    def contains(self, other: Subobject) -> bool:
        return other <= self

    def member(self, f: Face) -> bool:
        return f in self.members

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_full(self) -> bool:
        return identity_face(self.ambient) in self.members

    def sorted_members(self) -> list[Face]:
        return sorted(self.members, key=Face.sort_key)

    def closure_violation(self) -> tuple[Face, Face] | None:
        """A pair (member, missing face of it), or None if downward closed."""
        for f in self.sorted_members():
            for g in sorted(image(self.ambient, f), key=Face.sort_key):
                if g not in self.members:
                    return f, g
        return None

    def is_downward_closed(self) -> bool:
        return self.closure_violation() is None

    def maximal_members(self) -> list[Face]:
        """Members not properly contained in the image of another member."""
        covered = set()
        for f in self.members:
            covered |= image(self.ambient, f) - {f}
        return [f for f in self.sorted_members() if f not in covered]

    def transport(self, mapping: Mapping[str, str], target: Tree) -> Subobject:
        """Move the subobject along a tree isomorphism ``ambient -> target``."""
        return Subobject(target, frozenset(transport_face(f, mapping) for f in self.members))

    def to_json(self) -> dict:
        return {
            "tree": self.ambient.literal(),
            "members": [face_to_json(f) for f in self.sorted_members()],
        }

    @classmethod
    def from_json(cls, data: Mapping, check: bool = True) -> Subobject:
        try:
            t = parse_tree(data["tree"])
            members = frozenset(face_from_json(m) for m in data["members"])
        except (KeyError, TypeError) as exc:
            raise SubobjectError(f"malformed subobject record: {exc}") from exc
        for f in members:
            try:
                check_face(t, f)
            except FaceError as exc:
                raise SubobjectError(str(exc)) from None
        sub = cls(t, members)
        if check and (bad := sub.closure_violation()):
            raise SubobjectError(f"not downward closed: {bad[1]} missing below {bad[0]}")
        return sub


def generated(t: Tree, generators: Iterable[Face]) -> Subobject:
    """The union of the images of ``generators``."""
    members: set[Face] = set()
    for f in generators:
        members |= image(t, f)
    return Subobject(t, frozenset(members))


def full(t: Tree) -> Subobject:
    return Subobject(t, frozenset(faces(t)))


def empty(t: Tree) -> Subobject:
    return Subobject(t, frozenset())


def boundary(t: Tree) -> Subobject:
    """Union of the images of all elementary faces."""
    internal, external = classify_codim1(t)
    return generated(t, internal + external)


def external_boundary(t: Tree) -> Subobject:
    """Union of the images of the external elementary faces."""
    return generated(t, classify_codim1(t).external)


def _check_inner_edge(t: Tree, e: str) -> None:
    if e not in t.inner_edges:
        raise SubobjectError(f"{e!r} is not an inner edge of {t}")


def inner_horn(t: Tree, e: str) -> Subobject:
    """Union of the images of all elementary faces except the contraction of ``e``."""
    _check_inner_edge(t, e)
    internal, external = classify_codim1(t)
    skip = Face(identity_face(t).subtree, frozenset((e,)))
    return generated(t, [f for f in internal if f != skip] + external)


def segal_core(t: Tree) -> Subobject:
    """Union of the corollas around each vertex; all of Omega[eta] for eta."""
    if t.n_vertices == 0:
        return full(t)
    return generated(t, [Face.of((v,)) for v in t.vertices])


def filtration_stage(t: Tree, n: int) -> Subobject:
    """Union of Omega[F] over the subtrees F with at most ``n`` vertices."""
    if t.n_vertices < 1 or not 1 <= n <= t.n_vertices:
        raise SubobjectError(f"stage {n} out of range for a tree with {t.n_vertices} vertices")
    return generated(t, [Face(s) for s in subtrees(t) if s.n_vertices <= n])


# closed-form membership ------------------------------------------------------


def in_boundary(t: Tree, f: Face) -> bool:
    return f != identity_face(t)


def in_external_boundary(t: Tree, f: Face) -> bool:
    s = f.subtree
    if s.edge is not None:
        return t.n_vertices > 0
    return s.vertices != t.vertex_set


def in_inner_horn(t: Tree, e: str, f: Face) -> bool:
    s = f.subtree
    if s.edge is None and s.vertices == t.vertex_set:
        return not f.contract <= {e}
    return True


def in_segal_core(t: Tree, f: Face) -> bool:
    if t.n_vertices == 0:
        return True
    return not f.contract and f.subtree.n_vertices <= 1


def in_filtration_stage(t: Tree, n: int, f: Face) -> bool:
    return f.subtree.n_vertices <= n
