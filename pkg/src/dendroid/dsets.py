"""Finite dendroidal sets seen through evaluation, and checks on them.

A view evaluates on concrete (edge-named) trees and acts by faces,
isomorphisms and degeneracies. Three kinds exist: nerves of operads,
representables and their sieves, and tabulated presheaves read from a file.
Maps out of a sieve on Omega[T] are computed on faces only; their values on
degenerate arrows are forced.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from pathlib import Path
from typing import Any, Hashable

from .faces import (
    Degeneracy,
    Face,
    TreeIso,
    classify_codim1,
    compose_faces,
    decompose_face,
    face_domain,
    face_from_json,
    face_to_json,
    faces,
    transport_face,
)
from .operads import (
    ColouredOperad,
    Labeling,
    nerve_degenerate,
    nerve_evaluate,
    nerve_pull,
    nerve_restrict,
)
from .subobjects import Subobject, image, inner_horn, segal_core
from .trees import (
    Tree,
    automorphisms,
    canonicalize,
    enumerate_trees,
    linear,
    split_edge,
    tree_from_key,
)

__all__ = [
    "EvaluationError",
    "DendroidalSetView",
    "NerveView",
    "RepresentableView",
    "TabulatedView",
    "SieveMap",
    "hom_from_subobject",
    "restriction_map",
    "tautological_map",
    "horn_fillers",
    "segal_map",
    "segal_char_check",
    "inner_kan_check",
    "normality_check",
    "simplicial_restriction",
    "tabulate",
    "delete_dendrex",
    "duplicate_dendrex",
    "omega_maps",
    "fresh_edge",
    "canonical_trees",
]

Dendrex = Hashable


class EvaluationError(ValueError):
    pass


def fresh_edge(t: Tree) -> str:
    """A deterministic edge name not used in ``t``."""
    k = len(t.edges)
    while str(k) in t.edge_set:
        k += 1
    return str(k)


def _inverse(m: Mapping[str, str]) -> dict[str, str]:
    return {v: k for k, v in m.items()}


def canonical_iso(t: Tree) -> TreeIso:
    """The isomorphism from the canonical representative onto ``t``."""
    ck = canonicalize(t)
    return TreeIso.of(ck.tree, t, _inverse(ck.relabel))


class DendroidalSetView(ABC):
    """Evaluation contract for a finite (truncated) dendroidal set.

    ``max_vertices`` (None for no bound) and ``max_arity`` delimit the trees
    the view can evaluate; beyond them ``evaluate`` raises.
    """

    max_vertices: int | None = None
    max_arity: int = 0

    def supports(self, t: Tree) -> bool:
        if self.max_vertices is not None and t.n_vertices > self.max_vertices:
            return False
        return t.max_arity <= self.max_arity

    def _check(self, t: Tree) -> None:
        if not self.supports(t):
            raise EvaluationError(f"{self.describe()} cannot be evaluated at {t}")

    @abstractmethod
    def evaluate(self, t: Tree) -> list[Dendrex]:
        """Dendrices at ``t``, sorted."""

    @abstractmethod
    def restrict(self, t: Tree, f: Face, x: Dendrex) -> Dendrex:
        """Act by the face ``f`` of ``t``: a dendrex at ``face_domain(t, f)``."""

    @abstractmethod
    def pull(self, iso: TreeIso, x: Dendrex) -> Dendrex:
        """Act by an isomorphism ``iso.source -> iso.target``."""

    @abstractmethod
    def degenerate(self, t: Tree, deg: Degeneracy, x: Dendrex) -> Dendrex:
        """Act by the degeneracy ``split_edge(t, deg.edge, deg.new_edge) -> t``."""

    def dendrex_to_json(self, x: Dendrex) -> Any:
        return x

    def describe(self) -> str:
        return type(self).__name__


# nerves -------------------------------------------------------------------


class NerveView(DendroidalSetView):
    def __init__(self, operad: ColouredOperad, name: str = "operad"):
        self.operad = operad
        self.name = name
        self.max_arity = operad.max_arity

    def evaluate(self, t):
        self._check(t)
        return nerve_evaluate(self.operad, t)

    def restrict(self, t, f, x):
        return nerve_restrict(self.operad, t, f, x)

    def pull(self, iso, x):
        return nerve_pull(self.operad, iso, x)

    def degenerate(self, t, deg, x):
        return nerve_degenerate(self.operad, t, deg, x)

    def dendrex_to_json(self, x: Labeling):
        return x.to_json()

    def describe(self):
        return f"nerve of {self.name}"


# representables -------------------------------------------------------------


@lru_cache(maxsize=None)
def _operations_by_root(s: Tree) -> dict[str, list[tuple[tuple[str, ...], frozenset[str]]]]:
    """For each edge b of ``s``: (leaves, vertex set) of every subtree rooted at b."""
    from .faces import subtrees

    out: dict[str, list] = {e: [] for e in s.edges}
    for sub in subtrees(s):
        if sub.edge is None:
            out[sub.root(s)].append((tuple(sorted(sub.leaves(s))), sub.vertices))
    return out


def omega_maps(t: Tree, s: Tree) -> list[dict[str, str]]:
    """All arrows ``t -> s`` in Omega, as edge maps.

    The operad freely generated by a tree has at most one operation per
    signature, so an arrow is an edge map sending each vertex to the identity
    (unary vertices only) or to the unique subtree with matching root and
    leaves.
    """
    ops = _operations_by_root(s)
    out: list[dict[str, str]] = []

    def extend(pending: list[str], f: dict[str, str]):
        if not pending:
            out.append(dict(f))
            return
        v, rest = pending[0], pending[1:]
        if not t.is_vertex(v):
            extend(rest, f)
            return
        b = f[v]
        kids = t.inputs(v)
        if len(kids) == 1:
            extend(rest, {**f, kids[0]: b})
        for leaves, _ in ops[b]:
            if len(leaves) != len(kids):
                continue
            for perm in permutations(leaves):
                extend(rest, {**f, **dict(zip(kids, perm))})

    for b in s.edges:
        extend(list(t.edges), {t.root: b})
    return out


def map_image(t: Tree, s: Tree, f: Mapping[str, str]) -> Face:
    """The face of ``s`` through which ``f`` factors (its mono part)."""
    ops = _operations_by_root(s)
    w: set[str] = set()
    for v in t.vertices:
        kids = t.inputs(v)
        if len(kids) == 1 and f[kids[0]] == f[v]:
            continue
        leaves = tuple(sorted(f[c] for c in kids))
        (verts,) = [vs for lv, vs in ops[f[v]] if lv == leaves]
        w |= verts
    if not w:
        return Face.edge(f[t.root])
    inner = {c for v in w for c in s.inputs(v) if c in w}
    return Face.of(w, inner - set(f.values()))


class RepresentableView(DendroidalSetView):
    """Omega[S], or a sieve on it.

    Dendrices at ``t`` are arrows ``t -> S`` (stored as sorted edge-map
    tuples) whose image face lies in the sieve.
    """

    def __init__(self, ambient: Tree, sieve: Subobject | None = None):
        if sieve is not None and sieve.ambient != ambient:
            raise EvaluationError("sieve lives on a different tree")
        self.ambient = ambient
        self.sieve = sieve
        # arity of the largest operation of the free operad on the ambient tree
        self.max_arity = max(
            (len(lv) for ops in _operations_by_root(ambient).values() for lv, _ in ops),
            default=1,
        )

    def evaluate(self, t):
        self._check(t)
        out = []
        for f in omega_maps(t, self.ambient):
            if self.sieve is None or map_image(t, self.ambient, f) in self.sieve:
                out.append(tuple(sorted(f.items())))
        return sorted(out)

    def restrict(self, t, f, x):
        m = dict(x)
        return tuple(sorted((e, m[e]) for e in face_domain(t, f).edges))

    def pull(self, iso, x):
        m = dict(x)
        return tuple(sorted((e, m[w]) for e, w in iso.mapping))

    def degenerate(self, t, deg, x):
        m = dict(x)
        m[deg.new_edge] = m[deg.edge]
        return tuple(sorted(m.items()))

    def is_degenerate(self, x) -> bool:
        values = [w for _, w in x]
        return len(set(values)) != len(values)

    def dendrex_to_json(self, x):
        return dict(x)

    def describe(self):
        kind = "sieve on" if self.sieve is not None else "representable"
        return f"{kind} Omega[{self.ambient}]"


# tabulated presheaves -------------------------------------------------------


TABULATED_FORMAT = "dendroid-tabulated-v1"


class TabulatedView(DendroidalSetView):
    """A dendroidal set given by explicit tables over canonical trees.

    For each canonical tree ``K`` the file lists the dendrex names and a table
    for every elementary face, every non-identity automorphism and, when
    ``degeneracies`` is set, every degeneracy that stays within the bound. A
    dendrex at a concrete tree ``t`` is stored as a dendrex of
    ``canonicalize(t).tree`` via the canonical isomorphism. Tables are
    audited for functoriality on load.
    """

    def __init__(self, data: Mapping, audit: bool = True):
        if data.get("format") != TABULATED_FORMAT:
            raise EvaluationError(f"expected format {TABULATED_FORMAT!r}")
        try:
            self.max_vertices = int(data["max_vertices"])
            self.max_arity = int(data["max_arity"])
            self.has_degeneracies = bool(data.get("degeneracies", False))
            self.name = data.get("name", "tabulated")
            self.dendrices: dict[str, list[str]] = {}
            self.face_tables: dict[str, dict[Face, dict[str, str]]] = {}
            self.aut_tables: dict[str, dict[tuple, dict[str, str]]] = {}
            self.deg_tables: dict[str, dict[str, dict[str, str]]] = {}
            for rec in data["trees"]:
                key = rec["key"]
                if key in self.dendrices:
                    raise EvaluationError(f"tree {key} listed twice")
                self.dendrices[key] = sorted(rec["dendrices"])
                self.face_tables[key] = {
                    face_from_json(r["face"]): dict(r["table"]) for r in rec.get("faces", [])
                }
                order = self._order(key)
                self.aut_tables[key] = {
                    tuple(r["map"][e] for e in order): dict(r["table"])
                    for r in rec.get("automorphisms", [])
                }
                self.deg_tables[key] = {
                    r["edge"]: dict(r["table"]) for r in rec.get("degeneracies", [])
                }
        except (KeyError, TypeError) as exc:
            raise EvaluationError(f"malformed tabulated dendroidal set: {exc!r}") from exc
        self._sets = {k: set(v) for k, v in self.dendrices.items()}
        if audit:
            problems = self.audit()
            if problems:
                raise EvaluationError(
                    f"tables fail the functoriality audit ({len(problems)} problem(s)); "
                    f"first: {problems[0]}"
                )

    @classmethod
    def load(cls, path: str | Path, audit: bool = True) -> TabulatedView:
        return cls(json.loads(Path(path).read_text()), audit=audit)

    def describe(self):
        return f"tabulated set {self.name}"

    def _key(self, t: Tree) -> str:
        self._check(t)
        key = canonicalize(t).key
        if key not in self.dendrices:
            raise EvaluationError(f"no table for tree shape {key}")
        return key

    def _lookup(self, table: Mapping[str, str], x: str, what: str) -> str:
        try:
            return table[x]
        except KeyError:
            raise EvaluationError(f"{what} has no entry for dendrex {x!r}") from None

    @staticmethod
    @lru_cache(maxsize=None)
    def _order(key: str) -> tuple[str, ...]:
        return tuple(sorted(tree_from_key(key).edges))

    def _act_aut(self, key: str, alpha: Mapping[str, str], y: str) -> str:
        order = self._order(key)
        images = tuple(alpha[e] for e in order)
        if images == order:
            return y
        table = self.aut_tables[key].get(images)
        if table is None:
            raise EvaluationError(f"no automorphism table for {dict(alpha)} on {key}")
        return self._lookup(table, y, "automorphism table")

    def evaluate(self, t):
        return list(self.dendrices[self._key(t)])

    def pull(self, iso, x):
        key = self._key(iso.target)
        rs = canonicalize(iso.source).relabel
        rt = canonicalize(iso.target).relabel
        phi = iso.as_dict()
        alpha = {k: rt[phi[e]] for e, k in rs.items()}
        return self._act_aut(key, alpha, x)

    def _restrict_elementary(self, t: Tree, f: Face, y: str) -> str:
        ck = canonicalize(t)
        key = self._key(t)
        f_canon = transport_face(f, ck.relabel)
        table = self.face_tables[key].get(f_canon)
        if table is None:
            raise EvaluationError(f"no face table for {f_canon} on {key}")
        z = self._lookup(table, y, f"face table {f_canon} on {key}")
        dom = face_domain(t, f)
        dom_canon = face_domain(ck.tree, f_canon)
        r_dom = canonicalize(dom).relabel
        r_dom_canon = canonicalize(dom_canon).relabel
        alpha = {k: r_dom_canon[ck.relabel[e]] for e, k in r_dom.items()}
        return self._act_aut(canonicalize(dom).key, alpha, z)

    def restrict(self, t, f, x):
        for tree, step in decompose_face(t, f, self.supports):
            x = self._restrict_elementary(tree, step, x)
        return x

    def degenerate(self, t, deg, x):
        if not self.has_degeneracies:
            raise EvaluationError(f"{self.describe()} carries no degeneracy tables")
        ck = canonicalize(t)
        key = self._key(t)
        e_canon = ck.relabel[deg.edge]
        table = self.deg_tables[key].get(e_canon)
        if table is None:
            raise EvaluationError(f"no degeneracy table for edge {e_canon} on {key}")
        z = self._lookup(table, x, "degeneracy table")
        fresh = fresh_edge(ck.tree)
        split_t = split_edge(t, deg.edge, deg.new_edge)
        split_k = split_edge(ck.tree, e_canon, fresh)
        phi = {**ck.relabel, deg.new_edge: fresh}
        r_st = canonicalize(split_t).relabel
        r_sk = canonicalize(split_k).relabel
        alpha = {k: r_sk[phi[e]] for e, k in r_st.items()}
        return self._act_aut(canonicalize(split_t).key, alpha, z)

    # audit ----------------------------------------------------------------

    def _elementary(self, t: Tree) -> list[Face]:
        """Elementary faces of ``t`` whose domains lie within the bounds."""
        internal, external = classify_codim1(t)
        return [f for f in internal + external if self.supports(face_domain(t, f))]

    def audit(self) -> list[str]:
        """Problems with the tables; empty when they define a presheaf."""
        problems: list[str] = []
        for key in sorted(self.dendrices):
            k = tree_from_key(key)
            names = self.dendrices[key]
            if len(set(names)) != len(names):
                problems.append(f"{key}: duplicate dendrex names")
            elementary = self._elementary(k)
            for f in elementary:
                table = self.face_tables[key].get(f)
                dom_key = canonicalize(face_domain(k, f)).key
                if table is None:
                    problems.append(f"{key}: missing face table for {f}")
                elif dom_key not in self._sets:
                    problems.append(f"{key}: face {f} lands on missing tree {dom_key}")
                elif set(table) != self._sets[key] or not set(table.values()) <= self._sets[dom_key]:
                    problems.append(f"{key}: face table for {f} is not a map of dendrex sets")
            for f in self.face_tables[key]:
                if f not in elementary:
                    problems.append(f"{key}: {f} is not an elementary face within the bounds")
            auts = automorphisms(k)[1:]
            for alpha in auts:
                table = self.aut_tables[key].get(tuple(alpha[e] for e in self._order(key)))
                if table is None:
                    problems.append(f"{key}: missing automorphism table for {alpha}")
                elif set(table) != self._sets[key] or not set(table.values()) <= self._sets[key]:
                    problems.append(f"{key}: automorphism table for {alpha} is not a map")
            if self.has_degeneracies and k.n_vertices < self.max_vertices:
                for e in k.edges:
                    table = self.deg_tables[key].get(e)
                    sk = canonicalize(split_edge(k, e, fresh_edge(k))).key
                    if table is None or sk not in self._sets:
                        problems.append(f"{key}: missing degeneracy data at edge {e}")
                    elif set(table) != self._sets[key] or not set(table.values()) <= self._sets[sk]:
                        problems.append(f"{key}: degeneracy table at {e} is not a map")
        if problems:
            return problems
        for key in sorted(self.dendrices):
            problems.extend(self._audit_tree(key))
        return problems

    def _audit_tree(self, key: str) -> list[str]:
        problems = []
        k = tree_from_key(key)
        names = self.dendrices[key]
        elementary = self._elementary(k)
        # all factorizations of a codimension-2 face agree
        by_composite: dict[Face, list] = {}
        for f1 in elementary:
            d1 = face_domain(k, f1)
            for f2 in self._elementary(d1):
                by_composite.setdefault(compose_faces(k, f1, f2), []).append((f1, d1, f2))
        for g, routes in by_composite.items():
            for y in names:
                values = {
                    self._restrict_elementary(d1, f2, self._restrict_elementary(k, f1, y))
                    for f1, d1, f2 in routes
                }
                if len(values) > 1:
                    problems.append(f"{key}: factorizations of {g} disagree on {y}")
        auts = automorphisms(k)
        # the right-action law for generators on the left implies it for all
        for a in _aut_generators(k):
            for b in auts:
                ab = {e: a[b[e]] for e in k.edges}
                for y in names:
                    lhs = self._act_aut(key, ab, y)
                    rhs = self._act_aut(key, b, self._act_aut(key, a, y))
                    if lhs != rhs:
                        problems.append(f"{key}: automorphism action is not a right action at {y}")
        for a in _aut_generators(k):
            for f in elementary:
                fa = transport_face(f, a)
                dom, dom_a = face_domain(k, f), face_domain(k, fa)
                iso = TreeIso.of(dom, dom_a, {e: a[e] for e in dom.edges})
                for y in names:
                    lhs = self._restrict_elementary(k, f, self._act_aut(key, a, y))
                    rhs = self.pull(iso, self._restrict_elementary(k, fa, y))
                    if lhs != rhs:
                        problems.append(f"{key}: face {f} is not natural for {a} at {y}")
        if self.has_degeneracies and k.n_vertices < self.max_vertices:
            for e in k.edges:
                fresh = fresh_edge(k)
                split = split_edge(k, e, fresh)
                section = _degeneracy_section(split, e, fresh)
                for y in names:
                    back = self.restrict(split, section, self.degenerate(k, Degeneracy(e, fresh), y))
                    if back != y:
                        problems.append(f"{key}: degeneracy at {e} is not split by its section on {y}")
        return problems


@lru_cache(maxsize=None)
def _aut_generators(t: Tree) -> tuple[dict[str, str], ...]:
    return tuple(_generators(automorphisms(t)))


def _generators(auts: list[dict[str, str]]) -> list[dict[str, str]]:
    """A generating set for a group of edge permutations (identity first in ``auts``)."""
    if not auts:
        return []
    edges = sorted(auts[0])

    def key(m):
        return tuple(m[e] for e in edges)

    group = {key(auts[0]): auts[0]}
    gens = []
    for a in auts[1:]:
        if key(a) in group:
            continue
        gens.append(a)
        frontier = list(group.values())
        while frontier:
            new = []
            for g in frontier:
                for h in gens:
                    gh = {e: g[h[e]] for e in edges}
                    if key(gh) not in group:
                        group[key(gh)] = gh
                        new.append(gh)
            frontier = new
    return gens


def _degeneracy_section(split: Tree, edge: str, new_edge: str) -> Face:
    """The face of the split tree that removes the inserted unary vertex."""
    if new_edge in split.inner_edges:
        return Face.of(split.vertex_set, (new_edge,))
    if split.n_vertices == 1:
        return Face.edge(edge)
    return Face.of(split.vertex_set - {edge})


# sieve maps -------------------------------------------------------------------


@dataclass(frozen=True)
class SieveMap:
    """A map from a sieve on Omega[T] into a view: a dendrex per member face."""

    source: Subobject = field(compare=False, hash=False)
    assignment: tuple[tuple[Face, Dendrex], ...]

    def value(self, f: Face) -> Dendrex:
        return dict(self.assignment)[f]

    def to_json(self, view: DendroidalSetView) -> list:
        return [
            {"face": face_to_json(f), "dendrex": view.dendrex_to_json(x)}
            for f, x in self.assignment
        ]


def supported_members(a: Subobject, x: DendroidalSetView) -> list[Face]:
    """Members of ``a`` whose domains lie within the bounds of ``x``.

    A truncated view knows nothing about larger trees, so maps out of ``a``
    are taken on the part of ``a`` inside the truncation. This is all of
    ``a`` unless contracting edges pushes an arity past the bound.
    """
    t = a.ambient
    return [h for h in a.sorted_members() if x.supports(face_domain(t, h))]


def within_truncation(x: DendroidalSetView, t: Tree) -> bool:
    """Do all faces of ``t`` have domains that ``x`` can evaluate?"""
    return all(x.supports(face_domain(t, h)) for h in faces(t))


@lru_cache(maxsize=None)
def _factorizations(t: Tree, m: Face) -> dict[Face, Face]:
    """For each face ``h`` below ``m``: the face ``g`` of the domain with ``m o g = h``."""
    dom = face_domain(t, m)
    return {compose_faces(t, m, g): g for g in faces(dom)}


def _maximal(t: Tree, members: Iterable[Face]) -> list[Face]:
    members = set(members)
    covered = set()
    for f in members:
        covered |= image(t, f) - {f}
    return sorted(members - covered, key=Face.sort_key)


class _HomPlan:
    """Maps ``a -> x`` enumerated by their values on the maximal faces of ``a``.

    A map is determined by those values, so comparisons work on the tuple
    of them; full assignments are built only when asked for.
    """

    def __init__(self, a: Subobject, x: DendroidalSetView):
        self.a, self.x = a, x
        t = self.t = a.ambient
        self.members = supported_members(a, x)
        supported = set(self.members)
        self.maxes = _maximal(t, self.members)
        self.fact = [_factorizations(t, m) for m in self.maxes]
        self.doms = [face_domain(t, m) for m in self.maxes]
        self.overlaps = []
        for k in range(len(self.maxes)):
            row = []
            for j in range(k):
                common = _maximal(t, self.fact[j].keys() & self.fact[k].keys() & supported)
                if common:
                    row.append((j, common))
            self.overlaps.append(row)
        self._cache: dict[tuple[int, Face, Dendrex], Dendrex] = {}

    def restricted(self, k: int, h: Face, y: Dendrex) -> Dendrex:
        key = (k, h, y)
        if key not in self._cache:
            self._cache[key] = self.x.restrict(self.doms[k], self.fact[k][h], y)
        return self._cache[key]

    def choices(self) -> list[tuple[Dendrex, ...]]:
        candidates = [self.x.evaluate(d) for d in self.doms]
        out: list[tuple[Dendrex, ...]] = []
        chosen: list[Dendrex] = []

        def extend(k: int):
            if k == len(self.maxes):
                out.append(tuple(chosen))
                return
            for y in candidates[k]:
                if all(
                    self.restricted(j, h, chosen[j]) == self.restricted(k, h, y)
                    for j, common in self.overlaps[k]
                    for h in common
                ):
                    chosen.append(y)
                    extend(k + 1)
                    chosen.pop()

        extend(0)
        return out

    def key_of(self, y: Dendrex) -> tuple[Dendrex, ...]:
        """Values on the maximal faces of the restriction of a dendrex at ``t``."""
        return tuple(self.x.restrict(self.t, m, y) for m in self.maxes)

    def materialize(self, choice: tuple[Dendrex, ...]) -> SieveMap:
        values = {}
        for h in self.members:
            for i in range(len(self.maxes)):
                if h in self.fact[i]:
                    values[h] = self.restricted(i, h, choice[i])
                    break
        return SieveMap(self.a, tuple((f, values[f]) for f in self.members))


def restriction_map(x: DendroidalSetView, a: Subobject, value: Dendrex) -> SieveMap:
    """The sieve map obtained by restricting a dendrex at the ambient tree."""
    t = a.ambient
    members = supported_members(a, x)
    return SieveMap(a, tuple((h, x.restrict(t, h, value)) for h in members))


def hom_from_subobject(a: Subobject, x: DendroidalSetView) -> list[SieveMap]:
    """All maps ``a -> x``.

    Values are chosen on the maximal faces of ``a``, pruned by agreement on
    the maximal faces of each pairwise intersection, and then extended
    downward by restriction.
    """
    plan = _HomPlan(a, x)
    return [plan.materialize(c) for c in plan.choices()]


def tautological_map(a: Subobject) -> SieveMap:
    """The inclusion of ``a`` as a map into the view ``RepresentableView(ambient, a)``."""
    t = a.ambient
    return SieveMap(
        a,
        tuple(
            (h, tuple(sorted((e, e) for e in face_domain(t, h).edges)))
            for h in a.sorted_members()
        ),
    )


def horn_fillers(x: DendroidalSetView, t: Tree, e: str, horn_map: SieveMap) -> list[Dendrex]:
    """Dendrices at ``t`` whose restriction to the inner horn at ``e`` is ``horn_map``."""
    maxes = _maximal(t, supported_members(inner_horn(t, e), x))
    want = {m: horn_map.value(m) for m in maxes}
    return [y for y in x.evaluate(t) if all(x.restrict(t, m, y) == want[m] for m in maxes)]


@dataclass
class LiftingCount:
    """How the dendrices at ``t`` sit over the maps out of a subobject."""

    maps: int
    missed: list[SieveMap]
    n_missed: int
    collisions: list[tuple[Dendrex, Dendrex]]
    n_collisions: int


def _lifting_count(a: Subobject, x: DendroidalSetView, values: list[Dendrex], max_witnesses: int) -> LiftingCount:
    plan = _HomPlan(a, x)
    choices = plan.choices()
    seen: dict[tuple, Dendrex] = {}
    collisions = []
    for y in values:
        k = plan.key_of(y)
        if k in seen:
            collisions.append((seen[k], y))
        else:
            seen[k] = y
    missed = [c for c in choices if c not in seen]
    return LiftingCount(
        maps=len(choices),
        missed=[plan.materialize(c) for c in missed[:max_witnesses]],
        n_missed=len(missed),
        collisions=collisions[:max_witnesses],
        n_collisions=len(collisions),
    )


# checks -------------------------------------------------------------------------


def canonical_trees(max_vertices: int, max_arity: int, min_vertices: int = 0) -> list[Tree]:
    return [
        k.tree for k in enumerate_trees(max_vertices, max_arity) if k.tree.n_vertices >= min_vertices
    ]


def _bounds(x: DendroidalSetView, max_vertices: int, max_arity: int | None) -> tuple[int, int]:
    if x.max_vertices is not None and max_vertices > x.max_vertices:
        raise EvaluationError(
            f"{x.describe()} is tabulated up to {x.max_vertices} vertices, not {max_vertices}"
        )
    return max_vertices, x.max_arity if max_arity is None else min(max_arity, x.max_arity)


@dataclass
class SegalVerdict:
    tree: Tree
    n_dendrices: int
    n_core_maps: int
    collisions: list[tuple[Dendrex, Dendrex]] = field(default_factory=list)
    missed: list[SieveMap] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return not self.collisions

    @property
    def surjective(self) -> bool:
        return not self.missed

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective

    def to_json(self, view: DendroidalSetView) -> dict:
        return {
            "tree": self.tree.literal(),
            "key": canonicalize(self.tree).key,
            "dendrices": self.n_dendrices,
            "core_maps": self.n_core_maps,
            "injective": self.injective,
            "surjective": self.surjective,
            "collisions": [
                [view.dendrex_to_json(a), view.dendrex_to_json(b)] for a, b in self.collisions
            ],
            "missed": [m.to_json(view) for m in self.missed],
        }


def segal_map(x: DendroidalSetView, t: Tree, max_witnesses: int = 3) -> SegalVerdict:
    """Restriction ``X(t) -> Hom(Sc[t], X)`` and its bijectivity verdict."""
    if t.n_vertices < 1:
        raise EvaluationError("the Segal map is taken at trees with at least one vertex")
    values = x.evaluate(t)
    count = _lifting_count(segal_core(t), x, values, max_witnesses)
    return SegalVerdict(t, len(values), count.maps, count.collisions, count.missed)


@dataclass
class Report:
    """Outcome of a check over a range of trees."""

    check: str
    subject: str
    entries: list[dict]
    ok: bool
    summary: str
    skipped: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "subject": self.subject,
            "ok": self.ok,
            "summary": self.summary,
            "entries": self.entries,
        }
        if self.skipped:
            out["skipped_trees"] = self.skipped
        return out


def segal_char_check(x: DendroidalSetView, max_vertices: int, max_arity: int | None = None) -> Report:
    """Is ``X(T) -> Hom(Sc[T], X)`` bijective for every tree in range with a vertex?"""
    nv, na = _bounds(x, max_vertices, max_arity)
    verdicts = [segal_map(x, t) for t in canonical_trees(nv, na, min_vertices=1)]
    bad = [v for v in verdicts if not v.bijective]
    summary = (
        f"bijective at every tree ({len(verdicts)} trees)"
        if not bad
        else f"not bijective at {len(bad)} of {len(verdicts)} trees"
    )
    return Report("segal", x.describe(), [v.to_json(x) for v in verdicts], not bad, summary)


def inner_kan_check(
    x: DendroidalSetView, max_vertices: int, max_arity: int | None = None, max_witnesses: int = 3
) -> Report:
    """Do all inner horns ``Lambda^e[T] -> X`` extend to ``Omega[T]``, and uniquely?

    Trees some of whose faces leave the arity bound of ``x`` are skipped: a
    truncated view cannot see the horn faces there, so the lifting problem is
    not decided by it. They are listed in the report.
    """
    nv, na = _bounds(x, max_vertices, max_arity)
    entries = []
    skipped = []
    horns = failed = non_unique = 0
    for t in canonical_trees(nv, na, min_vertices=2):
        if not t.inner_edges:
            continue
        if not within_truncation(x, t):
            skipped.append(t.literal())
            continue
        values = x.evaluate(t)
        for e in t.inner_edges:
            count = _lifting_count(inner_horn(t, e), x, values, max_witnesses)
            horns += 1
            failed += bool(count.n_missed)
            non_unique += bool(count.n_collisions)
            entries.append(
                {
                    "tree": t.literal(),
                    "edge": e,
                    "horn_maps": count.maps,
                    "fillable": count.maps - count.n_missed,
                    "unique_fillers": not count.n_collisions,
                    "unfillable": [m.to_json(x) for m in count.missed],
                }
            )
    if failed:
        summary = f"{failed} of {horns} horn(s) with unfillable maps"
    else:
        summary = f"every inner horn fills{'' if non_unique else ' uniquely'} ({horns} horns)"
    if skipped:
        summary += f"; {len(skipped)} tree(s) leave the arity bound and were skipped"
    return Report("inner-kan", x.describe(), entries, not failed, summary, skipped)


def normality_check(
    x: DendroidalSetView, max_vertices: int, max_arity: int | None = None, max_witnesses: int = 3
) -> Report:
    """Does Aut(T) act freely on X(T) for every tree in range?

    Freeness is tested on all dendrices, degenerate ones included. With the
    empty subobject this is the criterion for the map from the empty set to
    X to be a normal monomorphism. Orbits are grown from a generating set;
    an orbit shorter than the group holds a fixed point, and only those
    orbits are searched element by element.
    """
    nv, na = _bounds(x, max_vertices, max_arity)
    entries = []
    fixed_total = 0
    for t in canonical_trees(nv, na):
        auts = automorphisms(t)
        if len(auts) == 1:
            continue
        gens = [TreeIso.of(t, t, a) for a in _aut_generators(t)]
        isos = [TreeIso.of(t, t, a) for a in auts[1:]]
        values = x.evaluate(t)
        seen: set = set()
        fixed = []
        for y in values:
            if y in seen:
                continue
            orbit = {y}
            frontier = [y]
            while frontier:
                new = {x.pull(g, w) for w in frontier for g in gens} - orbit
                orbit |= new
                frontier = list(new)
            seen |= orbit
            if len(orbit) < len(auts):
                fixed += [(z, g) for z in sorted(orbit) for g in isos if x.pull(g, z) == z]
        fixed_total += len(fixed)
        entries.append(
            {
                "tree": t.literal(),
                "automorphisms": len(auts),
                "dendrices": len(values),
                "fixed_points": len(fixed),
                "witnesses": [
                    {"dendrex": x.dendrex_to_json(z), "automorphism": dict(sorted(g.as_dict().items()))}
                    for z, g in fixed[:max_witnesses]
                ],
            }
        )
    summary = "automorphisms act freely" if not fixed_total else f"{fixed_total} fixed point(s)"
    return Report("normal", x.describe(), entries, not fixed_total, summary)


# simplicial restriction --------------------------------------------------------


def _linear_face(n: int, i: int) -> Face:
    t = linear(n)
    if n == 1:
        return Face.edge("1" if i == 0 else "0")
    if i == 0:
        return Face.of(t.vertex_set - {"1"})
    if i == n:
        return Face.of(t.vertex_set - {str(n)})
    return Face.of(t.vertex_set, (str(i),))


@dataclass
class SimplicialTable:
    levels: list[list[Dendrex]]
    face_maps: dict[tuple[int, int], list[int]]
    degeneracy_maps: dict[tuple[int, int], list[int]]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, view: DendroidalSetView) -> dict:
        return {
            "levels": [[view.dendrex_to_json(y) for y in lv] for lv in self.levels],
            "faces": [
                {"level": n, "index": i, "map": m} for (n, i), m in sorted(self.face_maps.items())
            ],
            "degeneracies": [
                {"level": n, "index": i, "map": m}
                for (n, i), m in sorted(self.degeneracy_maps.items())
            ],
            "identities_hold": self.ok,
            "failures": self.failures,
        }


def simplicial_restriction(x: DendroidalSetView, max_n: int) -> SimplicialTable:
    """The simplicial set ``i^* X`` up to level ``max_n``, with identities checked."""
    levels = [x.evaluate(linear(n)) for n in range(max_n + 1)]
    index = [{y: k for k, y in enumerate(lv)} for lv in levels]
    d: dict[tuple[int, int], list[int]] = {}
    s: dict[tuple[int, int], list[int]] = {}
    for n in range(1, max_n + 1):
        t = linear(n)
        for i in range(n + 1):
            f = _linear_face(n, i)
            dom = face_domain(t, f)
            iso = TreeIso.of(linear(n - 1), dom, {str(j): str(j if j < i else j + 1) for j in range(n)})
            d[(n, i)] = [index[n - 1][x.pull(iso, x.restrict(t, f, y))] for y in levels[n]]
    for n in range(max_n):
        t = linear(n)
        for i in range(n + 1):
            split = split_edge(t, str(i), "new")
            rename = {str(j): str(j) for j in range(i)}
            rename[str(i)] = "new"
            rename.update({str(j): str(j - 1) for j in range(i + 1, n + 2)})
            iso = TreeIso.of(linear(n + 1), split, rename)
            s[(n, i)] = [
                index[n + 1][x.pull(iso, x.degenerate(t, Degeneracy(str(i), "new"), y))]
                for y in levels[n]
            ]
    failures = _simplicial_identity_failures(levels, d, s, max_n)
    return SimplicialTable(levels, d, s, failures)


def _simplicial_identity_failures(levels, d, s, max_n) -> list[str]:
    out = []

    def comp(g, f):
        return [g[k] for k in f]

    for n in range(2, max_n + 1):
        for j in range(n + 1):
            for i in range(j):
                if comp(d[(n - 1, i)], d[(n, j)]) != comp(d[(n - 1, j - 1)], d[(n, i)]):
                    out.append(f"d{i} d{j} != d{j - 1} d{i} on level {n}")
    for n in range(max_n - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if comp(s[(n + 1, i)], s[(n, j)]) != comp(s[(n + 1, j + 1)], s[(n, i)]):
                    out.append(f"s{i} s{j} != s{j + 1} s{i} on level {n}")
    for n in range(max_n):
        ident = list(range(len(levels[n])))
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = comp(d[(n + 1, i)], s[(n, j)])
                if i < j:
                    rhs = comp(s[(n - 1, j - 1)], d[(n, i)])
                elif i in (j, j + 1):
                    rhs = ident
                else:
                    rhs = comp(s[(n - 1, j)], d[(n, i - 1)])
                if lhs != rhs:
                    out.append(f"d{i} s{j} identity fails on level {n}")
    return out


# tabulation and mutation -------------------------------------------------------


def tabulate(
    x: DendroidalSetView,
    max_vertices: int,
    max_arity: int,
    degeneracies: bool = True,
    name: str | None = None,
) -> dict:
    """Tables of ``x`` over all canonical trees in range, in the file format."""
    max_arity = min(max_arity, x.max_arity)
    trees = canonical_trees(max_vertices, max_arity)
    names: dict[str, dict[Dendrex, str]] = {}
    for k in trees:
        key = canonicalize(k).key
        names[key] = {y: f"d{n}" for n, y in enumerate(x.evaluate(k))}

    def name_at(t: Tree, y: Dendrex) -> str:
        ci = canonical_iso(t)
        return names[canonicalize(t).key][x.pull(ci, y)]

    records = []
    for k in trees:
        key = canonicalize(k).key
        values = list(names[key])
        internal, external = classify_codim1(k)
        face_recs = []
        for f in internal + external:
            dom = face_domain(k, f)
            if dom.max_arity > max_arity:
                continue
            face_recs.append(
                {
                    "face": face_to_json(f),
                    "table": {names[key][y]: name_at(dom, x.restrict(k, f, y)) for y in values},
                }
            )
        aut_recs = []
        for a in automorphisms(k)[1:]:
            iso = TreeIso.of(k, k, a)
            aut_recs.append(
                {
                    "map": dict(sorted(a.items())),
                    "table": {names[key][y]: names[key][x.pull(iso, y)] for y in values},
                }
            )
        rec = {
            "key": key,
            "tree": k.literal(),
            "dendrices": sorted(names[key].values(), key=lambda s: int(s[1:])),
            "faces": face_recs,
            "automorphisms": aut_recs,
        }
        if degeneracies and k.n_vertices < max_vertices:
            fresh = fresh_edge(k)
            deg_recs = []
            for e in k.edges:
                split = split_edge(k, e, fresh)
                deg_recs.append(
                    {
                        "edge": e,
                        "table": {
                            names[key][y]: name_at(split, x.degenerate(k, Degeneracy(e, fresh), y))
                            for y in values
                        },
                    }
                )
            rec["degeneracies"] = deg_recs
        records.append(rec)
    return {
        "format": TABULATED_FORMAT,
        "name": name or x.describe(),
        "max_vertices": max_vertices,
        "max_arity": max_arity,
        "degeneracies": degeneracies,
        "trees": records,
    }


def _all_tables(rec: Mapping) -> Iterable[tuple[str, dict]]:
    for kind in ("faces", "automorphisms", "degeneracies"):
        for r in rec.get(kind, []):
            yield kind, r["table"]


def delete_dendrex(data: Mapping, key: str, name: str) -> dict:
    """Remove a dendrex and everything that restricts to it.

    The result is again a presheaf: a dendrex is dropped whenever some
    table sends it to a dropped dendrex.
    """
    data = json.loads(json.dumps(data))
    recs = {r["key"]: r for r in data["trees"]}
    if name not in recs[key]["dendrices"]:
        raise EvaluationError(f"no dendrex {name!r} at {key}")
    dead = {(key, name)}
    changed = True
    while changed:
        changed = False
        for k, rec in recs.items():
            t = tree_from_key(k)
            for kind, r in [(kd, r) for kd in ("faces", "automorphisms", "degeneracies") for r in rec.get(kd, [])]:
                target = _table_target(t, kind, r, k)
                for src, dst in r["table"].items():
                    if (target, dst) in dead and (k, src) not in dead:
                        dead.add((k, src))
                        changed = True
    for k, rec in recs.items():
        rec["dendrices"] = [n for n in rec["dendrices"] if (k, n) not in dead]
        for _, table in _all_tables(rec):
            for src in [s for s in table if (k, s) in dead]:
                del table[src]
    return data


def _table_target(t: Tree, kind: str, r: Mapping, key: str) -> str:
    if kind == "faces":
        return canonicalize(face_domain(t, face_from_json(r["face"]))).key
    if kind == "automorphisms":
        return key
    return canonicalize(split_edge(t, r["edge"], fresh_edge(t))).key


def duplicate_dendrex(data: Mapping, key: str, name: str) -> dict:
    """Add a copy of a dendrex (and of its automorphism orbit) with equal faces.

    Degeneracy tables are dropped, since copies would need degenerate copies
    higher up.
    """
    data = json.loads(json.dumps(data))
    recs = {r["key"]: r for r in data["trees"]}
    rec = recs[key]
    if name not in rec["dendrices"]:
        raise EvaluationError(f"no dendrex {name!r} at {key}")
    orbit = {name}
    for r in rec.get("automorphisms", []):
        orbit.add(r["table"][name])
    copy = {n: n + "'" for n in orbit}
    rec["dendrices"] = rec["dendrices"] + sorted(copy.values())
    for r in rec.get("faces", []):
        for n, c in copy.items():
            r["table"][c] = r["table"][n]
    for r in rec.get("automorphisms", []):
        for n, c in copy.items():
            r["table"][c] = copy[r["table"][n]]
    for other in recs.values():
        other.pop("degeneracies", None)
    data["degeneracies"] = False
    return data
