"""Finite coloured symmetric operads with extensional tables, and their nerves.

Conventions. A permutation ``sigma`` is a tuple with ``sigma[j]`` the input
slot of ``p`` that becomes input ``j`` of ``p . sigma``; so
``(p . sigma).inputs[j] == p.inputs[sigma[j]]`` and the action is a right
action: ``(p . sigma) . tau == p . (sigma o tau)`` with
``(sigma o tau)[j] = sigma[tau[j]]``. The partial composite ``p o_i q`` lists
the inputs of ``p`` before slot ``i``, then those of ``q``, then the rest.

Operads are truncated at ``max_arity``: composites whose arity would exceed
it are absent from the table and every axiom instance involving them is
skipped.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import permutations, product
from pathlib import Path

from .faces import Degeneracy, Face, TreeIso, face_domain
from .trees import Tree, split_edge

__all__ = [
    "Operation",
    "ColouredOperad",
    "OperadError",
    "ArityError",
    "Violation",
    "Labeling",
    "validate_operad",
    "nerve_evaluate",
    "nerve_restrict",
    "nerve_pull",
    "nerve_degenerate",
    "nerve_act",
    "load_operad",
]


class OperadError(ValueError):
    pass


class ArityError(OperadError):
    pass


@dataclass(frozen=True)
class Operation:
    name: str
    inputs: tuple[str, ...]
    output: str

    @property
    def arity(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True, eq=False)
class ColouredOperad:
    colours: tuple[str, ...]
    operations: Mapping[str, Operation]
    identities: Mapping[str, str]
    symmetric: Mapping[tuple[str, tuple[int, ...]], str]
    composition: Mapping[tuple[str, int, str], str]
    max_arity: int
    _by_output: dict = field(init=False, repr=False)

    def __post_init__(self):
        index: dict[tuple[str, int], list[str]] = {}
        for op in sorted(self.operations.values(), key=lambda o: o.name):
            index.setdefault((op.output, op.arity), []).append(op.name)
        object.__setattr__(self, "_by_output", index)

    def op(self, name: str) -> Operation:
        try:
            return self.operations[name]
        except KeyError:
            raise OperadError(f"unknown operation {name!r}") from None

    def with_output(self, colour: str, arity: int) -> list[str]:
        return self._by_output.get((colour, arity), [])

    def identity(self, colour: str) -> str:
        return self.identities[colour]

    def act(self, p: str, perm: Iterable[int]) -> str:
        perm = tuple(perm)
        if perm == tuple(range(len(perm))):
            return p
        try:
            return self.symmetric[(p, perm)]
        except KeyError:
            raise OperadError(f"no symmetric action for {p!r} by {perm}") from None

    def compose(self, p: str, i: int, q: str) -> str:
        try:
            return self.composition[(p, i, q)]
        except KeyError:
            raise OperadError(f"composite {p!r} o_{i} {q!r} is not tabulated") from None

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "colours": list(self.colours),
            "max_arity": self.max_arity,
            "operations": [
                {"name": o.name, "inputs": list(o.inputs), "output": o.output}
                for o in sorted(self.operations.values(), key=lambda o: o.name)
            ],
            "identities": dict(sorted(self.identities.items())),
            "symmetric": [
                {"op": p, "perm": list(s), "result": r}
                for (p, s), r in sorted(self.symmetric.items())
            ],
            "composition": [
                {"outer": p, "slot": i, "inner": q, "result": r}
                for (p, i, q), r in sorted(self.composition.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> ColouredOperad:
        try:
            ops = {}
            for o in data["operations"]:
                if o["name"] in ops:
                    raise OperadError(f"operation {o['name']!r} listed twice")
                ops[o["name"]] = Operation(o["name"], tuple(o["inputs"]), o["output"])
            symmetric = {(s["op"], tuple(s["perm"])): s["result"] for s in data.get("symmetric", [])}
            composition = {
                (c["outer"], int(c["slot"]), c["inner"]): c["result"]
                for c in data.get("composition", [])
            }
            return cls(
                colours=tuple(data["colours"]),
                operations=ops,
                identities=dict(data["identities"]),
                symmetric=symmetric,
                composition=composition,
                max_arity=int(data["max_arity"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, OperadError):
                raise
            raise OperadError(f"malformed operad description: {exc!r}") from exc


def load_operad(path: str | Path, validate: bool = True) -> ColouredOperad:
    data = json.loads(Path(path).read_text())
    p = ColouredOperad.from_json(data)
    if validate and (bad := validate_operad(p)):
        raise OperadError(f"{len(bad)} axiom violation(s), first: {bad[0]}")
    return p


# axioms -----------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    axiom: str
    detail: str

    def __str__(self) -> str:
        return f"{self.axiom}: {self.detail}"

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "detail": self.detail}


def _slot_perm(target: list, source: list) -> tuple[int, ...]:
    """``rho`` with ``target[j] == source[rho[j]]`` on slot labels."""
    pos = {label: k for k, label in enumerate(source)}
    return tuple(pos[label] for label in target)


def _substituted(labels_p: list, i: int, labels_q: list) -> list:
    return labels_p[:i] + labels_q + labels_p[i + 1 :]


def validate_operad(p: ColouredOperad) -> list[Violation]:
    """Every violated axiom instance; empty iff the tables define an operad."""
    out: list[Violation] = []
    ops = p.operations
    A = p.max_arity

    def get_comp(a, i, b):
        return p.composition.get((a, i, b))

    def get_act(a, perm):
        if perm == tuple(range(len(perm))):
            return a
        return p.symmetric.get((a, perm))

    for name, o in ops.items():
        if o.output not in p.colours or any(c not in p.colours for c in o.inputs):
            out.append(Violation("colour discipline", f"{name} uses an unknown colour"))
        if o.arity > A:
            out.append(Violation("arity bound", f"{name} has arity {o.arity} > {A}"))

    for c in p.colours:
        idn = p.identities.get(c)
        if idn is None or idn not in ops or ops[idn].inputs != (c,) or ops[idn].output != c:
            out.append(Violation("unit", f"colour {c} lacks an identity c -> c"))
    if out:
        return out

    # table entries must name known operations and respect colours
    for (a, s), r in sorted(p.symmetric.items()):
        if a not in ops or r not in ops or sorted(s) != list(range(ops[a].arity)):
            out.append(Violation("symmetric action", f"bad entry {a} . {s} = {r}"))
    for (a, i, b), r in sorted(p.composition.items()):
        if a not in ops or b not in ops or r not in ops:
            out.append(Violation("colour discipline", f"unknown operation in {a} o_{i} {b} = {r}"))
            continue
        oa, ob, orr = ops[a], ops[b], ops[r]
        if not 0 <= i < oa.arity or oa.inputs[i] != ob.output:
            out.append(Violation("colour discipline", f"{a} o_{i} {b} composes mismatched colours"))
        elif list(orr.inputs) != _substituted(list(oa.inputs), i, list(ob.inputs)) or orr.output != oa.output:
            out.append(Violation("colour discipline", f"{a} o_{i} {b} = {r} has the wrong signature"))
    if out:
        return out

    names = sorted(ops)
    # symmetric action is a right action with the right signatures
    for a in names:
        oa = ops[a]
        perms = list(permutations(range(oa.arity)))
        for s in perms:
            r = get_act(a, s)
            if r is None:
                out.append(Violation("symmetric action", f"{a} . {s} undefined"))
                continue
            want = tuple(oa.inputs[s[j]] for j in range(oa.arity))
            if ops[r].inputs != want or ops[r].output != oa.output:
                out.append(Violation("symmetric action", f"{a} . {s} = {r} has the wrong signature"))
        for s, t in product(perms, perms):
            left = get_act(a, s)
            left = left and get_act(left, t)
            right = get_act(a, tuple(s[t[j]] for j in range(len(t))))
            if left is not None and right is not None and left != right:
                out.append(Violation("symmetric action", f"({a} . {s}) . {t} != {a} . ({s} o {t})"))

    # composites are defined wherever colours match and arity allows
    for a, b in product(names, names):
        oa, ob = ops[a], ops[b]
        if oa.arity + ob.arity - 1 > A:
            continue
        for i in range(oa.arity):
            if oa.inputs[i] == ob.output and get_comp(a, i, b) is None:
                out.append(Violation("composition", f"{a} o_{i} {b} undefined"))

    for a in names:
        oa = ops[a]
        if get_comp(p.identities[oa.output], 0, a) not in (None, a):
            out.append(Violation("unit", f"id o_0 {a} != {a}"))
        for i, c in enumerate(oa.inputs):
            if get_comp(a, i, p.identities[c]) not in (None, a):
                out.append(Violation("unit", f"{a} o_{i} id != {a}"))

    for a, b, c in product(names, names, names):
        oa, ob, oc = ops[a], ops[b], ops[c]
        if oa.arity + ob.arity + oc.arity - 2 > A:
            continue
        for i in range(oa.arity):
            if oa.inputs[i] != ob.output:
                continue
            ab = get_comp(a, i, b)
            # nested: (a o_i b) o_{i+j} c == a o_i (b o_j c)
            for j in range(ob.arity):
                if ob.inputs[j] != oc.output:
                    continue
                bc = get_comp(b, j, c)
                left = ab and get_comp(ab, i + j, c)
                right = bc and get_comp(a, i, bc)
                if left is not None and right is not None and left != right:
                    out.append(Violation(
                        "associativity",
                        f"({a} o_{i} {b}) o_{i + j} {c} = {left} but {a} o_{i} ({b} o_{j} {c}) = {right}",
                    ))
            # parallel: (a o_i b) o_{k+|b|-1} c == (a o_k c) o_i b for i < k
            for k in range(i + 1, oa.arity):
                if oa.inputs[k] != oc.output:
                    continue
                ac = get_comp(a, k, c)
                left = ab and get_comp(ab, k + ob.arity - 1, c)
                right = ac and get_comp(ac, i, b)
                if left is not None and right is not None and left != right:
                    out.append(Violation(
                        "associativity",
                        f"({a} o_{i} {b}) o_{k + ob.arity - 1} {c} = {left} but ({a} o_{k} {c}) o_{i} {b} = {right}",
                    ))

    for a, b in product(names, names):
        oa, ob = ops[a], ops[b]
        if oa.arity + ob.arity - 1 > A:
            continue
        pa = [("p", k) for k in range(oa.arity)]
        qb = [("q", k) for k in range(ob.arity)]
        for s in permutations(range(oa.arity)):
            a_s = get_act(a, s)
            for i in range(oa.arity):
                if oa.inputs[s[i]] != ob.output:
                    continue
                # (a . s) o_i b == (a o_{s[i]} b) . rho
                left = a_s and get_comp(a_s, i, b)
                base = get_comp(a, s[i], b)
                target = _substituted([("p", s[j]) for j in range(oa.arity)], i, qb)
                rho = _slot_perm(target, _substituted(pa, s[i], qb))
                right = base and get_act(base, rho)
                if left is not None and right is not None and left != right:
                    out.append(Violation("equivariance", f"({a} . {s}) o_{i} {b} != ({a} o_{s[i]} {b}) . {rho}"))
        for i in range(oa.arity):
            if oa.inputs[i] != ob.output:
                continue
            base = get_comp(a, i, b)
            for t in permutations(range(ob.arity)):
                # a o_i (b . t) == (a o_i b) . t'
                b_t = get_act(b, t)
                left = b_t and get_comp(a, i, b_t)
                target = _substituted(pa, i, [("q", t[j]) for j in range(ob.arity)])
                rho = _slot_perm(target, _substituted(pa, i, qb))
                right = base and get_act(base, rho)
                if left is not None and right is not None and left != right:
                    out.append(Violation("equivariance", f"{a} o_{i} ({b} . {t}) != ({a} o_{i} {b}) . {rho}"))
    return out


# nerves -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Labeling:
    """A dendrex of the nerve: edge colours and vertex operations.

    The operation at a vertex takes its inputs in the order the tree stores
    them, which fixes the representative of the symmetric-action orbit.
    """

    colours: tuple[tuple[str, str], ...]
    ops: tuple[tuple[str, str], ...] = ()

    @classmethod
    def of(cls, colours: Mapping[str, str], ops: Mapping[str, str]) -> Labeling:
        return cls(tuple(sorted(colours.items())), tuple(sorted(ops.items())))

    def colour_map(self) -> dict[str, str]:
        return dict(self.colours)

    def op_map(self) -> dict[str, str]:
        return dict(self.ops)

    def to_json(self) -> dict:
        return {"colours": dict(self.colours), "ops": dict(self.ops)}


def _check_arity(p: ColouredOperad, t: Tree) -> None:
    if t.max_arity > p.max_arity:
        raise ArityError(f"{t} has a vertex of arity {t.max_arity} > operad bound {p.max_arity}")


def nerve_evaluate(p: ColouredOperad, t: Tree) -> list[Labeling]:
    """All labelings of ``t`` by ``p``, sorted."""
    _check_arity(p, t)
    out: list[Labeling] = []

    def extend(pending: list[str], colours: dict, ops: dict):
        if not pending:
            out.append(Labeling.of(colours, ops))
            return
        v, rest = pending[0], pending[1:]
        if not t.is_vertex(v):
            extend(rest, colours, ops)
            return
        kids = t.inputs(v)
        for name in p.with_output(colours[v], len(kids)):
            ins = p.operations[name].inputs
            extend(rest, {**colours, **dict(zip(kids, ins))}, {**ops, v: name})

    for c in p.colours:
        extend(list(t.edges), {t.root: c}, {})
    return sorted(out)


def nerve_restrict(p: ColouredOperad, t: Tree, f: Face, x: Labeling) -> Labeling:
    """Restriction along a face: forget outside ``F``, compose across ``D``."""
    colours = x.colour_map()
    ops = x.op_map()
    dom = face_domain(t, f)
    d = f.contract

    def composite(v: str) -> str:
        q = ops[v]
        subs = {i: composite(c) for i, c in enumerate(t.inputs(v)) if c in d}
        arity = {i: p.operations[r].arity for i, r in subs.items()}
        # smallest arities first, so no intermediate composite exceeds the
        # final arity of a truncated operad
        done: list[int] = []
        for i in sorted(subs, key=lambda i: (arity[i], i)):
            slot = i + sum(arity[j] - 1 for j in done if j < i)
            q = p.compose(q, slot, subs[i])
            done.append(i)
        return q

    new_ops = {v: composite(v) for v in dom.vertices}
    return Labeling.of({e: colours[e] for e in dom.edges}, new_ops)


def nerve_pull(p: ColouredOperad, iso: TreeIso, x: Labeling) -> Labeling:
    """Pull a labeling of ``iso.target`` back to ``iso.source``."""
    s, t = iso.source, iso.target
    phi = iso.as_dict()
    colours = x.colour_map()
    ops = x.op_map()
    new_ops = {}
    for v in s.vertices:
        w = phi[v]
        pos = {c: k for k, c in enumerate(t.inputs(w))}
        perm = tuple(pos[phi[c]] for c in s.inputs(v))
        new_ops[v] = p.act(ops[w], perm)
    return Labeling.of({e: colours[phi[e]] for e in s.edges}, new_ops)


def nerve_degenerate(p: ColouredOperad, t: Tree, deg: Degeneracy, x: Labeling) -> Labeling:
    """Labeling of ``split_edge(t, ...)`` with an identity on the new vertex."""
    colours = x.colour_map()
    ops = x.op_map()
    e, new = deg.edge, deg.new_edge
    split_edge(t, e, new)  # validates the names
    colours[new] = colours[e]
    if e in ops:
        ops[new] = ops.pop(e)
    ops[e] = p.identity(colours[e])
    return Labeling.of(colours, ops)


def nerve_act(p: ColouredOperad, t: Tree, arrow, x: Labeling) -> Labeling:
    """Act on a labeling of ``t`` by a face, isomorphism or degeneracy.

    A face or an isomorphism must have ``t`` as codomain; a degeneracy is
    given by the edge of ``t`` it splits.
    """
    if isinstance(arrow, Face):
        return nerve_restrict(p, t, arrow, x)
    if isinstance(arrow, TreeIso):
        if arrow.target != t:
            raise OperadError("isomorphism does not land in the given tree")
        return nerve_pull(p, arrow, x)
    if isinstance(arrow, Degeneracy):
        return nerve_degenerate(p, t, arrow, x)
    raise OperadError(f"not an arrow: {arrow!r}")
