"""Monomorphisms into a tree: subtrees, faces and their composition.

A face of ``T`` is a pair (subtree ``F``, set ``D`` of inner edges of ``F``)
standing for the mono ``F/D -> T``. Its domain keeps the edge names of ``T``;
a vertex of ``F/D`` is named by the output edge of the lowest vertex in its
contraction class. That naming makes face composition a computation on names.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

from .trees import Tree

__all__ = [
    "Subtree",
    "Face",
    "FaceError",
    "Codim1Faces",
    "subtrees",
    "faces",
    "identity_face",
    "face_domain",
    "check_face",
    "codimension",
    "classify_codim1",
    "compose_faces",
    "decompose_face",
    "pruning_sequence",
    "transport_face",
    "face_edges",
    "face_to_json",
    "face_from_json",
    "TreeIso",
    "Degeneracy",
]


class FaceError(ValueError):
    pass


@dataclass(frozen=True)
class Subtree:
    """Either a single edge or a nonempty connected set of vertices."""

    edge: str | None = None
    vertices: frozenset[str] = frozenset()

    @classmethod
    def of_edge(cls, edge: str) -> Subtree:
        return cls(edge=edge)

    @classmethod
    def of_vertices(cls, vertices: Iterable[str]) -> Subtree:
        vs = frozenset(vertices)
        if not vs:
            raise FaceError("a vertex subtree needs at least one vertex")
        return cls(vertices=vs)

    @property
    def is_edge(self) -> bool:
        return self.edge is not None

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def edges(self, t: Tree) -> frozenset[str]:
        if self.edge is not None:
            return frozenset((self.edge,))
        out = set(self.vertices)
        for v in self.vertices:
            out.update(t.inputs(v))
        return frozenset(out)

    def root(self, t: Tree) -> str:
        if self.edge is not None:
            return self.edge
        (r,) = [v for v in self.vertices if t.below(v) not in self.vertices]
        return r

    def inner_edges(self, t: Tree) -> frozenset[str]:
        return frozenset(c for v in self.vertices for c in t.inputs(v) if c in self.vertices)

    def leaves(self, t: Tree) -> frozenset[str]:
        return frozenset(c for v in self.vertices for c in t.inputs(v) if c not in self.vertices)

    def sort_key(self):
        if self.edge is not None:
            return (0, (self.edge,))
        return (len(self.vertices), tuple(sorted(self.vertices)))


@dataclass(frozen=True)
class Face:
    subtree: Subtree
    contract: frozenset[str] = frozenset()

    @classmethod
    def edge(cls, edge: str) -> Face:
        return cls(Subtree.of_edge(edge))

    @classmethod
    def of(cls, vertices: Iterable[str], contract: Iterable[str] = ()) -> Face:
        return cls(Subtree.of_vertices(vertices), frozenset(contract))

    def sort_key(self):
        return self.subtree.sort_key() + (tuple(sorted(self.contract)),)

    def __str__(self) -> str:
        if self.subtree.edge is not None:
            return f"edge {self.subtree.edge}"
        vs = ",".join(sorted(self.subtree.vertices))
        d = ",".join(sorted(self.contract))
        return f"{{{vs}}}/{{{d}}}"


class Codim1Faces(NamedTuple):
    internal: list[Face]
    external: list[Face]


def _connected(t: Tree, vs: frozenset[str]) -> bool:
    # a vertex set of a tree is connected iff exactly one member has its
    # output edge outside the set
    return sum(1 for v in vs if t.below(v) not in vs) == 1


@lru_cache(maxsize=None)
def subtrees(t: Tree) -> tuple[Subtree, ...]:
    """All subtrees: every single edge and every connected vertex set."""
    out = [Subtree.of_edge(e) for e in t.edges]
    verts = t.vertices
    for k in range(1, len(verts) + 1):
        for combo in combinations(verts, k):
            vs = frozenset(combo)
            if _connected(t, vs):
                out.append(Subtree(vertices=vs))
    return tuple(sorted(out, key=Subtree.sort_key))


@lru_cache(maxsize=None)
def faces(t: Tree) -> tuple[Face, ...]:
    out = []
    for s in subtrees(t):
        inner = sorted(s.inner_edges(t))
        for k in range(len(inner) + 1):
            for d in combinations(inner, k):
                out.append(Face(s, frozenset(d)))
    return tuple(sorted(out, key=Face.sort_key))


def identity_face(t: Tree) -> Face:
    if t.n_vertices == 0:
        return Face.edge(t.root)
    return Face(Subtree(vertices=t.vertex_set))


def check_face(t: Tree, f: Face) -> None:
    s = f.subtree
    if s.edge is not None:
        if s.vertices or s.edge not in t.edge_set:
            raise FaceError(f"{f} is not a face of {t}")
        if f.contract:
            raise FaceError("an edge face cannot contract anything")
        return
    if not s.vertices <= t.vertex_set or not _connected(t, s.vertices):
        raise FaceError(f"{f} is not a connected vertex set of {t}")
    if not f.contract <= s.inner_edges(t):
        raise FaceError(f"contracted edges of {f} are not inner edges of its subtree")


def codimension(t: Tree, f: Face) -> int:
    return t.n_vertices - f.subtree.n_vertices + len(f.contract)


def face_edges(t: Tree, f: Face) -> frozenset[str]:
    """Edge names of the domain of ``f``."""
    return f.subtree.edges(t) - f.contract


@lru_cache(maxsize=None)
def face_domain(t: Tree, f: Face) -> Tree:
    """The tree ``F/D``, named by surviving edges of ``t``."""
    s = f.subtree
    if s.edge is not None:
        return Tree(s.edge)
    d = f.contract

    def expand(v):
        for c in t.inputs(v):
            if c in d:
                yield from expand(c)
            else:
                yield c

    return Tree.from_inputs(
        s.root(t),
        {v: list(expand(v)) for v in sorted(s.vertices - d)},
    )


def classify_codim1(t: Tree) -> Codim1Faces:
    """Elementary faces, split into internal (contractions) and external."""
    if t.n_vertices == 0:
        return Codim1Faces([], [])
    internal = [Face(Subtree(vertices=t.vertex_set), frozenset((e,))) for e in t.inner_edges]
    if t.n_vertices == 1:
        external = [Face.edge(e) for e in t.edges]
    else:
        external = []
        for v in t.vertices:
            rest = t.vertex_set - {v}
            if _connected(t, rest):
                external.append(Face(Subtree(vertices=rest)))
    return Codim1Faces(
        sorted(internal, key=Face.sort_key), sorted(external, key=Face.sort_key)
    )


def compose_faces(t: Tree, outer: Face, inner: Face) -> Face:
    """The composite of ``inner`` (a face of ``face_domain(t, outer)``) with ``outer``."""
    dom = face_domain(t, outer)
    try:
        check_face(dom, inner)
    except FaceError as exc:
        raise FaceError(f"domain mismatch: {exc}") from None
    if inner.subtree.edge is not None:
        return inner
    d = outer.contract

    def lift(v):
        yield v
        for c in t.inputs(v):
            if c in d:
                yield from lift(c)

    lifted = frozenset(u for w in inner.subtree.vertices for u in lift(w))
    return Face(Subtree(vertices=lifted), inner.contract | (d & lifted))


def transport_face(f: Face, mapping: Mapping[str, str]) -> Face:
    """Rename a face along an edge bijection (e.g. a tree isomorphism)."""
    s = f.subtree
    if s.edge is not None:
        return Face.edge(mapping[s.edge])
    return Face(
        Subtree(vertices=frozenset(mapping[v] for v in s.vertices)),
        frozenset(mapping[e] for e in f.contract),
    )


def _prunable_vertex(t: Tree, keep: frozenset[str]) -> str:
    for v in t.vertices:
        if v not in keep and _connected(t, t.vertex_set - {v}):
            return v
    raise FaceError("no prunable vertex outside the subtree")  # pragma: no cover


def pruning_sequence(t: Tree, s: Subtree) -> list[str]:
    """Vertices to prune, in order, to cut ``t`` down to the subtree ``s``.

    Each pruned vertex is a top vertex or a root vertex with one inner edge
    at the moment it is removed. For an edge subtree the sequence ends with the
    last vertex, leaving a corolla whose edge face is then taken.
    """
    keep: frozenset[str]
    if s.edge is not None:
        if t.n_vertices == 0:
            return []
        e = s.edge
        anchor = e if t.is_vertex(e) else t.below(e)
        keep = frozenset((anchor,))
    else:
        keep = s.vertices
    seq = []
    current = t
    while current.vertex_set != keep:
        v = _prunable_vertex(current, keep)
        seq.append(v)
        current = face_domain(current, Face(Subtree(vertices=current.vertex_set - {v})))
    return seq


def decompose_face(
    t: Tree, f: Face, admissible: Callable[[Tree], bool] | None = None
) -> list[tuple[Tree, Face]]:
    """Write ``f`` as a chain of codimension-one faces.

    Returns ``[(T0, f1), (T1, f2), ...]`` with ``T0 = t``, each ``f_i`` an
    elementary face of ``T_{i-1}`` and ``T_i`` its domain. The composite of
    the chain is ``f``. Contractions go in sorted order; with ``admissible``
    they are reordered so every intermediate domain satisfies it.
    """
    check_face(t, f)
    chain: list[tuple[Tree, Face]] = []
    current = t
    for v in pruning_sequence(t, f.subtree):
        step = Face(Subtree(vertices=current.vertex_set - {v}))
        chain.append((current, step))
        current = face_domain(current, step)
    if f.subtree.edge is not None:
        if current.n_vertices:
            step = Face.edge(f.subtree.edge)
            chain.append((current, step))
        return chain
    order = _contraction_order(current, sorted(f.contract), admissible)
    if order is None:
        raise FaceError(f"no admissible chain of contractions for {f}")
    for e in order:
        step = Face(Subtree(vertices=current.vertex_set), frozenset((e,)))
        chain.append((current, step))
        current = face_domain(current, step)
    return chain


def _contraction_order(t: Tree, edges: list[str], admissible) -> list[str] | None:
    """Sorted order if allowed, else the first order whose intermediate domains are admissible."""
    if not edges:
        return []
    for i, e in enumerate(edges):
        dom = face_domain(t, Face(Subtree(vertices=t.vertex_set), frozenset((e,))))
        if admissible is None or len(edges) == 1 or admissible(dom):
            rest = _contraction_order(dom, edges[:i] + edges[i + 1 :], admissible)
            if rest is not None:
                return [e] + rest
    return None


def face_to_json(f: Face) -> dict:
    if f.subtree.edge is not None:
        sub = {"edge": f.subtree.edge}
    else:
        sub = {"vertices": sorted(f.subtree.vertices)}
    return {"subtree": sub, "contract": sorted(f.contract)}


def face_from_json(data: Mapping) -> Face:
    try:
        sub = data["subtree"]
        contract = frozenset(data.get("contract", ()))
        if "edge" in sub:
            return Face(Subtree.of_edge(sub["edge"]), contract)
        return Face(Subtree.of_vertices(sub["vertices"]), contract)
    except (KeyError, TypeError) as exc:
        raise FaceError(f"malformed face record: {data!r}") from exc



@dataclass(frozen=True)
class TreeIso:
    """An isomorphism ``source -> target`` given as an edge map."""

    source: Tree
    target: Tree
    mapping: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, source: Tree, target: Tree, mapping: Mapping[str, str]) -> TreeIso:
        return cls(source, target, tuple(sorted(mapping.items())))

    def as_dict(self) -> dict[str, str]:
        return dict(self.mapping)


@dataclass(frozen=True)
class Degeneracy:
    """Collapse of the unary vertex that ``split_edge(t, edge, new_edge)`` inserts."""

    edge: str
    new_edge: str
