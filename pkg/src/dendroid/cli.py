"""Command-line interface.

Exit codes: 0 success, 1 a check failed (witnesses are printed), 2 usage
error, 3 invalid input (unparsable tree, malformed or inconsistent file).
Relative output paths are resolved against ``$DENDROID_OUT_DIR`` when it is
set. Operads are given as JSON files, or as ``@com``, ``@ass``,
``@category`` and ``@two-colour`` for the built-in fixtures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .anodyne import (
    Certificate,
    CertificationNotFound,
    StepError,
    certify_inner_anodyne,
    verify_certificate,
)
from .dsets import (
    DendroidalSetView,
    EvaluationError,
    NerveView,
    RepresentableView,
    TabulatedView,
    inner_kan_check,
    normality_check,
    segal_char_check,
    simplicial_restriction,
    tabulate,
)
from .faces import FaceError, classify_codim1, codimension, face_domain, face_to_json, faces
from .fixtures import FIXTURES
from .operads import ColouredOperad, OperadError, load_operad, nerve_evaluate, validate_operad
from .subobjects import (
    Subobject,
    SubobjectError,
    boundary,
    external_boundary,
    full,
    inner_horn,
    segal_core,
)
from .trees import Tree, TreeError, enumerate_trees, parse_tree

OUT_DIR_ENV = "DENDROID_OUT_DIR"

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

INPUT_ERRORS = (
    TreeError,
    FaceError,
    SubobjectError,
    StepError,
    OperadError,
    EvaluationError,
    json.JSONDecodeError,
    OSError,
)


class InputError(Exception):
    pass


def _emit(args, data: Any, lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write("".join(line + "\n" for line in lines))


def _out_path(name: str) -> Path:
    p = Path(name)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def _tree(literal: str) -> Tree:
    return parse_tree(literal)


def _operad(spec: str) -> tuple[ColouredOperad, str]:
    if spec.startswith("@"):
        name = spec[1:]
        if name not in FIXTURES:
            raise InputError(f"unknown fixture {spec!r}; choose from {', '.join('@' + n for n in FIXTURES)}")
        return FIXTURES[name](), name
    return load_operad(spec), Path(spec).stem


def _view(args) -> DendroidalSetView:
    if args.operad:
        p, name = _operad(args.operad)
        return NerveView(p, name)
    if args.dset:
        return TabulatedView.load(args.dset)
    if args.sieve:
        a = Subobject.from_json(json.loads(Path(args.sieve).read_text()))
        return RepresentableView(a.ambient, a)
    return RepresentableView(_tree(args.representable))


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--operad", metavar="FILE", help="nerve of an operad (file or @fixture)")
    g.add_argument("--dset", metavar="FILE", help="tabulated dendroidal set")
    g.add_argument("--representable", metavar="TREE", help="the representable Omega[TREE]")
    g.add_argument("--sieve", metavar="FILE", help="a sieve on a representable (subobject JSON)")


# commands -------------------------------------------------------------------


def cmd_trees(args) -> int:
    keys = enumerate_trees(args.max_vertices, args.max_arity)
    data = {
        "max_vertices": args.max_vertices,
        "max_arity": args.max_arity,
        "count": len(keys),
        "trees": [
            {"tree": k.tree.literal(), "key": k.key, "vertices": k.tree.n_vertices} for k in keys
        ],
    }
    _emit(args, data, [k.tree.literal() for k in keys])
    return EXIT_OK


def _face_kind(t: Tree, f, internal, external) -> str:
    if f in internal:
        return "internal"
    if f in external:
        return "external"
    return "identity" if codimension(t, f) == 0 else "composite"


def cmd_faces(args) -> int:
    t = _tree(args.tree)
    internal, external = classify_codim1(t)
    rows = []
    for f in faces(t):
        rows.append(
            {
                "face": face_to_json(f),
                "codim": codimension(t, f),
                "kind": _face_kind(t, f, internal, external),
                "domain": face_domain(t, f).literal(),
            }
        )
    lines = [
        f"{r['codim']}  {r['kind']:<9}  {f}  ->  {r['domain']}" for r, f in zip(rows, faces(t))
    ]
    lines.append(f"{len(rows)} faces")
    _emit(args, {"tree": t.literal(), "count": len(rows), "faces": rows}, lines)
    return EXIT_OK


SUBOBJECTS = {"core": segal_core, "boundary": boundary, "ext-boundary": external_boundary}


def _print_subobject(args, a: Subobject) -> None:
    lines = [str(f) for f in a.sorted_members()]
    lines.append(f"{len(a)} of {len(full(a.ambient))} faces of {a.ambient.literal()}")
    _emit(args, a.to_json(), lines)


def cmd_subobject(args) -> int:
    _print_subobject(args, SUBOBJECTS[args.command](_tree(args.tree)))
    return EXIT_OK


def cmd_horn(args) -> int:
    _print_subobject(args, inner_horn(_tree(args.tree), args.edge))
    return EXIT_OK


def _start(t: Tree, spec: str) -> Subobject:
    if spec == "core":
        return segal_core(t)
    if spec.startswith("horn:"):
        return inner_horn(t, spec[len("horn:") :])
    raise InputError(f"--from expects core or horn:EDGE, not {spec!r}")


def cmd_certify(args) -> int:
    t = _tree(args.tree)
    start = _start(t, args.start)
    try:
        cert = certify_inner_anodyne(start, full(t))
    except CertificationNotFound as exc:
        _emit(args, {"certified": False, "reason": str(exc)}, [f"not certified: {exc}"])
        return EXIT_CHECK
    if args.out:
        path = _out_path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(cert.dumps())
        _emit(
            args,
            {"certified": True, "steps": len(cert), "out": str(path)},
            [f"wrote {path} ({len(cert)} steps)"],
        )
        return EXIT_OK
    lines = [f"{i}: {s.face} + {s.inner_edge}" for i, s in enumerate(cert.steps)]
    lines.append(f"{len(cert)} steps from {len(start)} to {len(cert.end)} faces")
    _emit(args, cert.to_json(), lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    data = json.loads(Path(args.file).read_text())
    cert = Certificate.from_json(data)
    v = verify_certificate(cert)
    if v.ok:
        line = f"ok: {len(cert)} steps"
    elif v.failed_step is None:
        line = f"failed: {v.reason}"
    else:
        line = f"failed at step {v.failed_step}: {v.reason}"
    _emit(args, {**v.to_json(), "steps": len(cert)}, [line])
    return EXIT_OK if v.ok else EXIT_CHECK


def cmd_nerve(args) -> int:
    p, name = _operad(args.operad)
    t = _tree(args.tree)
    values = nerve_evaluate(p, t)
    data = {
        "operad": name,
        "tree": t.literal(),
        "count": len(values),
        "dendrices": [x.to_json() for x in values],
    }
    lines = [
        " ".join(f"{v}={op}" for v, op in x.ops) or " ".join(c for _, c in x.colours)
        for x in values
    ]
    lines.append(f"{len(values)} dendrices at {t.literal()}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.operad.startswith("@"):
        p, name = _operad(args.operad)
    else:
        p = ColouredOperad.from_json(json.loads(Path(args.operad).read_text()))
        name = Path(args.operad).stem
    bad = validate_operad(p)
    data = {"operad": name, "ok": not bad, "violations": [v.to_json() for v in bad]}
    lines = [str(v) for v in bad] + [f"{name}: {len(bad)} violation(s)"]
    _emit(args, data, lines)
    return EXIT_CHECK if bad else EXIT_OK


CHECKS = {
    "check-segal": segal_char_check,
    "check-inner-kan": inner_kan_check,
    "check-normal": normality_check,
}


def _witness_lines(report) -> list[str]:
    lines = []
    for e in report.entries:
        if e.get("collisions") or e.get("missed"):
            lines.append(
                f"  {e['tree']}: {len(e['collisions'])} collision witness(es), "
                f"{len(e['missed'])} missed core family witness(es)"
            )
            for a, b in e["collisions"][:1]:
                lines.append(f"    same core restriction: {json.dumps(a)} and {json.dumps(b)}")
            for m in e["missed"][:1]:
                lines.append(f"    no dendrex restricts to: {json.dumps(m)}")
        if e.get("unfillable"):
            lines.append(f"  {e['tree']} at {e['edge']}: {e['horn_maps'] - e['fillable']} unfillable horn map(s)")
            lines.append(f"    witness: {json.dumps(e['unfillable'][0])}")
        if e.get("fixed_points"):
            w = e["witnesses"][0]
            lines.append(f"  {e['tree']}: {e['fixed_points']} fixed point(s)")
            lines.append(f"    {json.dumps(w['dendrex'])} fixed by {json.dumps(w['automorphism'])}")
    return lines


def cmd_check(args) -> int:
    x = _view(args)
    report = CHECKS[args.command](x, args.max_vertices, args.max_arity)
    lines = [f"{report.subject}: {report.summary}"] + _witness_lines(report)
    _emit(args, report.to_json(), lines)
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_restrict(args) -> int:
    x = _view(args)
    table = simplicial_restriction(x, args.max_n)
    lines = [f"level {n}: {len(lv)}" for n, lv in enumerate(table.levels)]
    lines.append("simplicial identities hold" if table.ok else "simplicial identities fail:")
    lines += [f"  {f}" for f in table.failures]
    _emit(args, table.to_json(x), lines)
    return EXIT_OK if table.ok else EXIT_CHECK


def cmd_tabulate(args) -> int:
    x = _view(args)
    data = tabulate(x, args.max_vertices, args.max_arity, name=args.name)
    text = json.dumps(data, indent=2) + "\n"
    if args.out:
        path = _out_path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        n = sum(len(r["dendrices"]) for r in data["trees"])
        _emit(
            args,
            {"out": str(path), "trees": len(data["trees"]), "dendrices": n},
            [f"wrote {path} ({len(data['trees'])} trees, {n} dendrices)"],
        )
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    out = _out_path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in FIXTURES.items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(make().to_json(), indent=2) + "\n")
        written.append(str(path))
    _emit(args, {"written": written}, [f"wrote {w}" for w in written])
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dendroid",
        description="Trees, faces, sieves and dendroidal sets over the category Omega.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("trees", parents=[common], help="enumerate trees up to isomorphism")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-arity", type=int, required=True)
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("faces", parents=[common], help="list the faces of a tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_faces)

    for name, what in (
        ("core", "the Segal core"),
        ("boundary", "the boundary"),
        ("ext-boundary", "the external boundary"),
    ):
        p = sub.add_parser(name, parents=[common], help=f"{what} of Omega[TREE]")
        p.add_argument("tree")
        p.set_defaults(func=cmd_subobject)

    p = sub.add_parser("horn", parents=[common], help="an inner horn of Omega[TREE]")
    p.add_argument("tree")
    p.add_argument("--edge", required=True)
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser("certify", parents=[common], help="certify an inclusion into Omega[TREE]")
    p.add_argument("tree")
    p.add_argument("--from", dest="start", default="core", metavar="core|horn:EDGE")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="replay a certificate")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nerve", parents=[common], help="dendrices of a nerve at a tree")
    p.add_argument("operad")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("validate", parents=[common], help="check the operad axioms")
    p.add_argument("operad")
    p.set_defaults(func=cmd_validate)

    for name, what in (
        ("check-segal", "Segal core bijectivity"),
        ("check-inner-kan", "inner horn filling"),
        ("check-normal", "freeness of automorphism actions"),
    ):
        p = sub.add_parser(name, parents=[common], help=what)
        _add_source(p)
        p.add_argument("--max-vertices", type=int, required=True)
        p.add_argument("--max-arity", type=int)
        p.set_defaults(func=cmd_check)

    p = sub.add_parser("restrict", parents=[common], help="underlying simplicial set")
    _add_source(p)
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("tabulate", parents=[common], help="write a dendroidal set as tables")
    _add_source(p)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--max-arity", type=int, required=True)
    p.add_argument("--name")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_tabulate)

    p = sub.add_parser("fixtures", parents=[common], help="write the fixture operads")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max_vertices", "max_arity", "max_n"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            parser.error(f"--{name.replace('_', '-')} must be non-negative")
    try:
        return args.func(args)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
