"""Small operads used as test and CLI fixtures."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping
from itertools import permutations, product

from .operads import ColouredOperad, Operation

__all__ = [
    "signature_operad",
    "com",
    "ass",
    "category_operad",
    "two_colour_operad",
    "two_object_category",
    "FIXTURES",
]


def _sig_name(inputs: tuple[str, ...], output: str) -> str:
    return ",".join(inputs) + "->" + output


def signature_operad(
    colours: Iterable[str],
    allowed: Callable[[tuple[str, ...], str], bool],
    max_arity: int,
) -> ColouredOperad:
    """The operad with one operation for each allowed signature.

    ``allowed`` must accept every ``(c,) -> c`` and be closed under
    substitution and permutation of inputs; the result is then a suboperad
    of the terminal coloured operad.
    """
    colours = tuple(colours)
    ops: dict[str, Operation] = {}
    for n in range(max_arity + 1):
        for ins in product(colours, repeat=n):
            for out in colours:
                if allowed(ins, out):
                    name = _sig_name(ins, out)
                    ops[name] = Operation(name, ins, out)
    symmetric = {}
    composition = {}
    for o in ops.values():
        for s in permutations(range(o.arity)):
            if s != tuple(range(o.arity)):
                symmetric[(o.name, s)] = _sig_name(tuple(o.inputs[j] for j in s), o.output)
    for a, b in product(ops.values(), ops.values()):
        if a.arity + b.arity - 1 > max_arity:
            continue
        for i, c in enumerate(a.inputs):
            if c == b.output:
                ins = a.inputs[:i] + b.inputs + a.inputs[i + 1 :]
                composition[(a.name, i, b.name)] = _sig_name(ins, a.output)
    return ColouredOperad(
        colours=colours,
        operations=ops,
        identities={c: _sig_name((c,), c) for c in colours},
        symmetric=symmetric,
        composition=composition,
        max_arity=max_arity,
    )


def com(max_arity: int = 3) -> ColouredOperad:
    """The commutative operad: one operation in each arity."""
    return signature_operad(["x"], lambda ins, out: True, max_arity)


def _word(w: tuple[int, ...]) -> str:
    return "w[" + ",".join(map(str, w)) + "]"


def ass(max_arity: int = 3) -> ColouredOperad:
    """The associative operad, one colour.

    An operation of arity n is a word listing the input slots in the order
    they are multiplied; the permutations of n letters.
    """
    ops = {}
    for n in range(max_arity + 1):
        for w in permutations(range(n)):
            ops[_word(w)] = Operation(_word(w), ("x",) * n, "x")
    symmetric = {}
    composition = {}
    for n in range(max_arity + 1):
        for w in permutations(range(n)):
            for s in permutations(range(n)):
                if s == tuple(range(n)):
                    continue
                inv = {s[j]: j for j in range(n)}
                symmetric[(_word(w), s)] = _word(tuple(inv[k] for k in w))
    for n in range(max_arity + 1):
        for m in range(max_arity + 2 - n):
            for w, u in product(permutations(range(n)), permutations(range(m))):
                for i in range(n):
                    word = []
                    for k in w:
                        if k < i:
                            word.append(k)
                        elif k == i:
                            word.extend(i + j for j in u)
                        else:
                            word.append(k + m - 1)
                    composition[(_word(w), i, _word(u))] = _word(tuple(word))
    return ColouredOperad(
        colours=("x",),
        operations=ops,
        identities={"x": _word((0,))},
        symmetric=symmetric,
        composition=composition,
        max_arity=max_arity,
    )


def category_operad(
    objects: Iterable[str],
    arrows: Mapping[str, tuple[str, str]],
    compose: Mapping[tuple[str, str], str],
    identities: Mapping[str, str],
) -> ColouredOperad:
    """A small category as an operad with only unary operations.

    ``arrows`` maps a name to ``(source, target)``; ``compose[(g, f)]`` is
    ``g . f`` (first ``f``, then ``g``) and must cover every composable pair,
    identities included.
    """
    ops = {a: Operation(a, (s,), t) for a, (s, t) in arrows.items()}
    composition = {(g, 0, f): h for (g, f), h in compose.items()}
    return ColouredOperad(
        colours=tuple(objects),
        operations=ops,
        identities=dict(identities),
        symmetric={},
        composition=composition,
        max_arity=1,
    )


def two_object_category() -> ColouredOperad:
    """Objects a, b; arrows f, g: a -> b and an idempotent e: b -> b with e.f = g, e.g = g."""
    arrows = {"1a": ("a", "a"), "1b": ("b", "b"), "f": ("a", "b"), "g": ("a", "b"), "e": ("b", "b")}
    comp = {("e", "f"): "g", ("e", "g"): "g", ("e", "e"): "e"}
    for name, (s, t) in arrows.items():
        comp[("1" + t, name)] = name
        comp[(name, "1" + s)] = name
    return category_operad(["a", "b"], arrows, comp, {"a": "1a", "b": "1b"})


def two_colour_operad(max_arity: int = 3) -> ColouredOperad:
    """Colours a, b generated by a binary operation (a, b) -> b.

    Composites are identified when their signatures agree, so there is one
    operation for every signature with exactly one ``b`` input and output
    ``b``, besides the identities.
    """

    def allowed(ins, out):
        if out == "a":
            return ins == ("a",)
        return ins.count("b") == 1

    return signature_operad(["a", "b"], allowed, max_arity)


FIXTURES: dict[str, Callable[[], ColouredOperad]] = {
    "com": com,
    "ass": ass,
    "category": two_object_category,
    "two-colour": two_colour_operad,
}
