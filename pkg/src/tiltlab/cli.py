"""Command-line entry point.  Every command prints one JSON document.

Exit codes: 0 when everything requested holds, 1 when a check fails, 2 on
usage errors (bad flags, unparsable words, trees or charges).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import List, Optional

from . import braids as br
from . import hearts as he
from . import stability as st
from . import suites
from . import trees as tc
from .errors import TiltlabError
from .explorer import dot_export, explore, graph_to_dict


class UsageError(Exception):
    pass


def _load_tree(source: str) -> tc.BrauerTree:
    """A JSON tree file, or one of the built-ins `line:N`, `star:N`."""
    m = re.fullmatch(r"(line|star):(\d+)", source)
    if m:
        n = int(m.group(2))
        if n < 1:
            raise UsageError("a tree needs at least one edge")
        return tc.line(n) if m.group(1) == "line" else tc.star(n)
    try:
        with open(source, encoding="utf-8") as fh:
            return tc.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read tree file {source!r}: {exc.strerror}") from exc


def _labels(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad label list {text!r}") from exc


def _state_dict(s: he.HeartState) -> dict:
    return {
        "tree": tc.tree_to_dict(s.tree),
        "shape": tc.describe(s.tree),
        "classes": [list(c) for c in s.classes],
        "history": he.format_word(s.history),
    }


def cmd_tilt(args) -> tuple:
    tree = _load_tree(args.tree)
    state = he.apply_word(he.standard_heart(tree), he.parse_word(args.word, tree.n))
    return 0, _state_dict(state)


def cmd_decompose(args) -> tuple:
    tree = _load_tree(args.tree)
    h = he.standard_heart(tree)
    labels = _labels(args.set)
    dec = he.decompose_multi(h, labels)
    ok = dec.apply(h) == he.left_tilt_multi_direct(h, labels)
    return (0 if ok else 1), {
        "ok": ok,
        "set": sorted(labels),
        "word": he.format_word(dec.word),
        "sigma": he.perm_to_cycles(dec.sigma),
        "shift": dec.shift,
    }


def cmd_verify(args) -> tuple:
    rep = suites.run_suite(args.suite)
    return (0 if rep["ok"] else 1), rep


def cmd_rotate(args) -> tuple:
    tree = _load_tree(args.tree)
    h = he.standard_heart(tree)
    charge = st.parse_charges(args.charge)
    mode = {"seq": "sequential", "multi": "multiwall"}[args.mode]
    res = st.rotate_unit(st.validate_point(h, charge), mode)
    return 0, {
        "events": [e.as_dict() for e in res.events],
        "tilt_word": he.format_word(res.word()),
        "relabelling": he.perm_to_cycles(res.relabelling),
        "end_classes": [list(c) for c in res.end.heart.classes],
        "end_charge": [st.format_charge(z) for z in res.end.charge],
    }


def cmd_image(args) -> tuple:
    z = st.parse_charges(args.charge)
    if len(z) != 3:
        raise UsageError("image membership takes exactly three charges")
    return 0, st.image_membership_A3(*z).as_dict()


def cmd_lift(args) -> tuple:
    charge = st.parse_charges(args.charge)
    lifts = st.find_lifts(charge, args.depth)
    return 0, {
        "charge": [st.format_charge(z) for z in charge],
        "depth": args.depth,
        "lifts": [{"shape": tc.describe(s.tree), "classes": [list(c) for c in s.classes]} for s in lifts],
    }


def cmd_explore(args) -> tuple:
    tree = _load_tree(args.tree)
    graph = explore(he.standard_heart(tree), args.depth)
    if args.dot:
        text = dot_export(graph)
        if args.dot == "-":
            sys.stderr.write(text)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(text)
    return 0, graph_to_dict(graph)


def cmd_braid(args) -> tuple:
    m = br.braid_word_matrix(args.n, br.parse_braid(args.word, args.n))
    return 0, {"n": args.n, "word": args.word, "matrix": br.matrix_rows(m)}


def cmd_demo(args) -> tuple:
    picked = [args.covering_failure, args.noninjective, args.a4]
    if not any(picked):
        raise UsageError("pick a demo: --covering-failure, --noninjective or --a4")
    out = {}
    if args.covering_failure:
        out["covering_failure"] = st.covering_failure_demo(args.samples)
    if args.noninjective:
        out["noninjective"] = st.noninjectivity_witness(args.n)
    if args.a4:
        out["a4"] = st.a4_counterexample()
    ok = all(v["ok"] for v in out.values())
    out["ok"] = ok
    return (0 if ok else 1), out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tiltlab", description="Exact tilting and stability computations for Brauer tree algebras.")
    p.add_argument("--pretty", action="store_true", help="human readable output instead of compact JSON")
    # accepted after the subcommand too; SUPPRESS keeps it from clobbering the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("tilt", help="apply a tilt word to the standard heart")
    s.add_argument("--tree", required=True, help="tree JSON file, or line:N / star:N")
    s.add_argument("--word", required=True, help='e.g. "L1 M{1,3} S-1"')
    s.set_defaults(func=cmd_tilt)

    s = sub.add_parser("decompose", help="write a multi tilt as simple tilts")
    s.add_argument("--tree", required=True)
    s.add_argument("--set", required=True, help="comma separated labels")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("--suite", required=True, choices=list(suites.SUITES) + ["all"])
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("rotate", help="rotate a stability condition by pi")
    s.add_argument("--tree", required=True)
    s.add_argument("--charge", required=True, help="comma separated charges of the standard simples")
    s.add_argument("--mode", choices=["seq", "multi"], default="seq")
    s.set_defaults(func=cmd_rotate)

    s = sub.add_parser("image", help="membership in the image of the central charge map for A3")
    s.add_argument("--charge", required=True)
    s.set_defaults(func=cmd_image)

    s = sub.add_parser("lift", help="hearts near the standard one on which a charge is valid")
    s.add_argument("--charge", required=True)
    s.add_argument("--depth", type=int, default=4)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("explore", help="breadth-first exchange graph")
    s.add_argument("--tree", required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--dot", help="write DOT here ('-' for stderr)")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("braid", help="K0 matrix of a braid word")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--word", required=True, help='e.g. "s1 s2^-1 z"')
    s.set_defaults(func=cmd_braid)

    s = sub.add_parser("demo", help="stability-space demonstrations")
    s.add_argument("--covering-failure", action="store_true")
    s.add_argument("--noninjective", action="store_true")
    s.add_argument("--a4", action="store_true")
    s.add_argument("--samples", type=int, default=5)
    s.add_argument("--n", type=int, default=3)
    s.set_defaults(func=cmd_demo)
    return p


def _render_report(rep: dict) -> str:
    lines = []
    for suite in rep["suites"]:
        for c in suite["checks"]:
            lines.append(f"{'PASS' if c['ok'] else 'FAIL'}  {suite['suite']}: {c['name']}")
    lines.append("all checks pass" if rep["ok"] else f"first failure: {rep['first_failure']}")
    return "\n".join(lines) + "\n"


def _emit(obj, pretty: bool, stream) -> None:
    if pretty and isinstance(obj, dict) and "suites" in obj:
        stream.write(_render_report(obj))
    elif pretty:
        stream.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        stream.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


# values that may legitimately start with '-' (charges, shifts)
_VALUE_FLAGS = ("--charge", "--word", "--set")


def _glue_values(argv: List[str]) -> List[str]:
    out, k = [], 0
    while k < len(argv):
        if argv[k] in _VALUE_FLAGS and k + 1 < len(argv):
            out.append(f"{argv[k]}={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(list(sys.argv[1:] if argv is None else argv)))
    for name in ("depth", "samples"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name} must be nonnegative")
    try:
        code, out = args.func(args)
    except (UsageError, TiltlabError) as exc:
        _emit({"ok": False, "error": type(exc).__name__, "message": str(exc)}, args.pretty, sys.stderr)
        return 2
    _emit(out, args.pretty, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
