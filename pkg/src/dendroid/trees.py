"""Finite rooted non-planar trees: the objects of the dendroidal category.

A tree is stored by its root edge and, for every vertex, the tuple of its input
edges. A vertex is named after its output edge, so vertex and edge names share
one namespace. An edge with no vertex on top is a leaf; a vertex with an empty
input tuple is a nullary vertex, which is never the same thing as a leaf.

Literal grammar::

    tree := edge [ "(" [ tree ("," tree)* ] ")" ]

so ``"r"`` is the one-edge tree, ``"r()"`` the nullary corolla and
``"r(a,b)"`` the binary corolla.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

__all__ = [
    "Tree",
    "TreeError",
    "TreeSyntaxError",
    "CanonicalKey",
    "parse_tree",
    "eta",
    "corolla",
    "linear",
    "canonicalize",
    "isomorphisms",
    "automorphisms",
    "enumerate_trees",
    "tree_from_key",
    "split_edge",
    "relabel",
]

_NAME = re.compile(r"[^\s(),]+")


class TreeError(ValueError):
    """Raised for structurally invalid trees."""


class TreeSyntaxError(TreeError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Tree:
    """An edge-named rooted tree.

    ``vertex_inputs`` maps each vertex (by output edge) to its ordered input
    edges. The order is kept for printing and for matching operation inputs in
    nerve labelings; it carries no meaning for isomorphism.
    """

    root: str
    vertex_inputs: tuple[tuple[str, tuple[str, ...]], ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        items = tuple(sorted((v, tuple(ins)) for v, ins in self.vertex_inputs))
        object.__setattr__(self, "vertex_inputs", items)
        inputs = dict(items)
        if len(inputs) != len(items):
            raise TreeError("a vertex is listed twice")
        below: dict[str, str] = {}
        for v, ins in items:
            for c in ins:
                if c in below or c == self.root:
                    raise TreeError(f"duplicate edge name {c!r}")
                below[c] = v
        for v in inputs:
            if v != self.root and v not in below:
                raise TreeError(f"vertex {v!r} is not attached to the tree")
        # reachability from the root rules out cycles and stray components
        seen = {self.root}
        stack = [self.root]
        while stack:
            e = stack.pop()
            for c in inputs.get(e, ()):
                seen.add(c)
                stack.append(c)
        if len(seen) != 1 + len(below):
            raise TreeError("edges not reachable from the root")
        object.__setattr__(self, "_index", {"inputs": inputs, "below": below})

    @classmethod
    def from_inputs(cls, root: str, inputs: Mapping[str, Iterable[str]]) -> Tree:
        return cls(root, tuple((v, tuple(ins)) for v, ins in inputs.items()))

    # structure -----------------------------------------------------------

    def inputs(self, vertex: str) -> tuple[str, ...]:
        return self._index["inputs"][vertex]

    def is_vertex(self, edge: str) -> bool:
        """True when a vertex sits on top of ``edge``."""
        return edge in self._index["inputs"]

    def is_leaf(self, edge: str) -> bool:
        return edge in self.edge_set and edge not in self._index["inputs"]

    def below(self, edge: str) -> str | None:
        """The vertex that ``edge`` is an input of, or None for the root."""
        return self._index["below"].get(edge)

    def arity(self, vertex: str) -> int:
        return len(self._index["inputs"][vertex])

    @cached_property
    def edges(self) -> tuple[str, ...]:
        """Edges in pre-order (root first, children in stored order)."""
        out = []

        def walk(e):
            out.append(e)
            for c in self._index["inputs"].get(e, ()):
                walk(c)

        walk(self.root)
        return tuple(out)

    @cached_property
    def edge_set(self) -> frozenset[str]:
        return frozenset(self.edges)

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if e in self._index["inputs"])

    @cached_property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        return tuple(e for e in self.edges if e not in self._index["inputs"])

    @cached_property
    def inner_edges(self) -> tuple[str, ...]:
        """Edges joining two vertices."""
        return tuple(e for e in self.edges if e != self.root and e in self._index["inputs"])

    @property
    def n_vertices(self) -> int:
        return len(self._index["inputs"])

    @cached_property
    def max_arity(self) -> int:
        return max((len(ins) for ins in self._index["inputs"].values()), default=0)

    def above(self, edge: str) -> Iterator[str]:
        """All edges strictly above ``edge``."""
        for c in self._index["inputs"].get(edge, ()):
            yield c
            yield from self.above(c)

    # printing ------------------------------------------------------------

    def literal(self, edge: str | None = None) -> str:
        e = self.root if edge is None else edge
        if e not in self._index["inputs"]:
            return e
        return e + "(" + ",".join(self.literal(c) for c in self._index["inputs"][e]) + ")"

    def __str__(self) -> str:
        return self.literal()

    @cached_property
    def shape(self) -> dict[str, str]:
        """Isomorphism-invariant encoding of the subtree above each edge."""
        enc: dict[str, str] = {}
        for e in reversed(self.edges):
            if e in self._index["inputs"]:
                enc[e] = "(" + "".join(sorted(enc[c] for c in self._index["inputs"][e])) + ")"
            else:
                enc[e] = "I"
        return enc


# parsing ------------------------------------------------------------------


def parse_tree(literal: str) -> Tree:
    """Parse a tree literal such as ``"r(a(x,y),b())"``."""
    pos = 0
    n = len(literal)
    inputs: dict[str, tuple[str, ...]] = {}
    names: set[str] = set()

    def skip():
        nonlocal pos
        while pos < n and literal[pos].isspace():
            pos += 1

    def edge() -> str:
        nonlocal pos
        skip()
        m = _NAME.match(literal, pos)
        if not m:
            raise TreeSyntaxError("expected an edge name", pos)
        name = m.group(0)
        if name in names:
            raise TreeSyntaxError(f"duplicate edge name {name!r}", pos)
        names.add(name)
        pos = m.end()
        skip()
        if pos < n and literal[pos] == "(":
            pos += 1
            skip()
            children: list[str] = []
            if pos < n and literal[pos] == ")":
                pos += 1
            else:
                while True:
                    children.append(edge())
                    skip()
                    if pos < n and literal[pos] == ",":
                        pos += 1
                        continue
                    if pos < n and literal[pos] == ")":
                        pos += 1
                        break
                    raise TreeSyntaxError("expected ',' or ')'", pos)
            inputs[name] = tuple(children)
            skip()
        return name

    root = edge()
    if pos != n:
        raise TreeSyntaxError("trailing characters", pos)
    return Tree.from_inputs(root, inputs)


# standard trees -------------------------------------------------------------


def eta(name: str = "0") -> Tree:
    return Tree(name)


def corolla(n: int) -> Tree:
    """C_n with root ``"r"`` and leaves ``"l1"``..``"ln"``."""
    return Tree.from_inputs("r", {"r": [f"l{i}" for i in range(1, n + 1)]})


def linear(n: int) -> Tree:
    """The linear tree with edges ``"0"`` (input) up to ``"n"`` (root)."""
    return Tree.from_inputs(str(n), {str(i): [str(i - 1)] for i in range(1, n + 1)})


def relabel(t: Tree, mapping: Mapping[str, str]) -> Tree:
    """Rename edges of ``t`` by ``mapping`` (which must be injective on edges)."""
    return Tree.from_inputs(
        mapping[t.root],
        {mapping[v]: [mapping[c] for c in t.inputs(v)] for v in t.vertices},
    )


def split_edge(t: Tree, edge: str, new_edge: str) -> Tree:
    """Insert a unary vertex on ``edge``.

    The new vertex keeps the name ``edge`` as its output and takes ``new_edge``
    as input; whatever sat on top of ``edge`` now sits on ``new_edge``.
    """
    if edge not in t.edge_set:
        raise TreeError(f"{edge!r} is not an edge")
    if new_edge in t.edge_set:
        raise TreeError(f"{new_edge!r} already names an edge")
    inputs = {v: list(t.inputs(v)) for v in t.vertices}
    if edge in inputs:
        inputs[new_edge] = inputs.pop(edge)
    inputs[edge] = [new_edge]
    return Tree.from_inputs(t.root, inputs)


# canonical forms ------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalKey:
    """Canonical encoding of a tree up to isomorphism.

    ``key`` is the shape string (leaf ``I``, vertex ``(...)`` with sorted
    children), ``tree`` the canonical representative with edges named
    ``"0"``, ``"1"``, ... breadth-first from the root, and ``relabel`` the
    edge map from the input tree onto ``tree``.
    """

    key: str
    tree: Tree = field(compare=False)
    relabel: Mapping[str, str] = field(compare=False, hash=False)

    def __str__(self) -> str:
        return self.key


def canonicalize(t: Tree) -> CanonicalKey:
    return _canonicalize(t)


@lru_cache(maxsize=None)
def _canonicalize(t: Tree) -> CanonicalKey:
    shape = t.shape
    order = [t.root]
    i = 0
    while i < len(order):
        e = order[i]
        if t.is_vertex(e):
            # stable sort: isomorphic siblings keep their stored order
            order.extend(sorted(t.inputs(e), key=lambda c: shape[c]))
        i += 1
    mapping = {e: str(k) for k, e in enumerate(order)}
    rep = relabel(t, mapping)
    # rebuild so children are stored in sorted-shape order
    rep = Tree.from_inputs(
        rep.root,
        {v: sorted(rep.inputs(v), key=int) for v in rep.vertices},
    )
    return CanonicalKey(shape[t.root], rep, mapping)


def tree_from_key(key: str) -> Tree:
    """Build the canonical representative of a shape string."""
    pos = 0

    def parse():
        # None for a leaf, list of children for a vertex
        nonlocal pos
        if key[pos] == "I":
            pos += 1
            return None
        if key[pos] != "(":
            raise TreeSyntaxError("bad canonical key", pos)
        pos += 1
        kids = []
        while key[pos] != ")":
            kids.append(parse())
        pos += 1
        return kids

    try:
        spec = parse()
    except IndexError:
        raise TreeSyntaxError("truncated canonical key", len(key)) from None
    if pos != len(key):
        raise TreeSyntaxError("trailing characters in key", pos)
    inputs: dict[str, list[str]] = {}
    counter = itertools.count()
    queue = [(spec, str(next(counter)))]
    root = queue[0][1]
    while queue:
        node, name = queue.pop(0)
        if node is None:
            continue
        inputs[name] = []
        for kid in node:
            child = str(next(counter))
            inputs[name].append(child)
            queue.append((kid, child))
    return canonicalize(Tree.from_inputs(root, inputs)).tree


def isomorphisms(s: Tree, t: Tree) -> list[dict[str, str]]:
    """All isomorphisms ``s -> t`` as edge maps, in a deterministic order."""
    return [dict(m) for m in _isos(s, s.root, t, t.root)]


def _isos(s: Tree, a: str, t: Tree, b: str) -> list[tuple[tuple[str, str], ...]]:
    if s.shape[a] != t.shape[b]:
        return []
    if not s.is_vertex(a):
        return [((a, b),)]
    kids_a, kids_b = s.inputs(a), t.inputs(b)
    out = []
    for perm in itertools.permutations(range(len(kids_b))):
        if any(s.shape[kids_a[i]] != t.shape[kids_b[j]] for i, j in enumerate(perm)):
            continue
        parts = [_isos(s, kids_a[i], t, kids_b[j]) for i, j in enumerate(perm)]
        for combo in itertools.product(*parts):
            out.append(((a, b),) + tuple(itertools.chain.from_iterable(combo)))
    return out


def automorphisms(t: Tree) -> list[dict[str, str]]:
    """The automorphism group of ``t``; the identity comes first."""
    return isomorphisms(t, t)


def enumerate_trees(max_vertices: int, max_arity: int) -> list[CanonicalKey]:
    """One canonical key per isomorphism class within the given bounds.

    Ordered by vertex count, then by key string.
    """
    if max_vertices < 0 or max_arity < 0:
        raise ValueError("bounds must be non-negative")
    by_count: list[list[str]] = [["I"]]
    for n in range(1, max_vertices + 1):
        found = set()
        for k in range(max_arity + 1):
            for kids in _child_multisets(by_count, n - 1, k):
                found.add("(" + "".join(sorted(kids)) + ")")
        by_count.append(sorted(found))
    return [
        canonicalize(tree_from_key(key))
        for keys in by_count
        for key in keys
    ]


def _child_multisets(by_count, total, k):
    """Sorted k-tuples of shapes whose vertex counts sum to ``total``."""
    pool = [(n, key) for n, keys in enumerate(by_count) for key in keys if n <= total]

    def rec(start, remaining, slots):
        if slots == 0:
            if remaining == 0:
                yield ()
            return
        for i in range(start, len(pool)):
            n, key = pool[i]
            if n <= remaining:
                for rest in rec(i, remaining - n, slots - 1):
                    yield (key,) + rest

    yield from rec(0, total, k)
