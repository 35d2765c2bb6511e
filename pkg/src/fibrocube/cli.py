"""Command-line front end with deterministic machine-readable output.

Commands: cube, classify, route, validate, group-table.  JSON is the
default output; ``--output text`` is human-oriented (for cube it emits
DOT).  Exit codes: 0 success, 1 validation failure, 2 usage or domain
errors.  FIBROCUBE_MAX_N raises the non-brute dimension ceiling
(default 24); brute-force commands are hard-capped at n = 5.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import classify, gf2, route
from .cube import CubeKind, build_cube, export_graph
from .errors import FibrocubeError, MatrixNotGoodError
from .gf2 import BinMatrix

_MATRIX_TERM = re.compile(r"^E\((\d+),(\d+)\)$")


def _max_n() -> int:
    try:
        return int(os.environ.get("FIBROCUBE_MAX_N", "24"))
    except ValueError:
        return 24


def parse_matrix_spec(spec: str, n: int) -> BinMatrix:
    """I, C, I+E(i,j)+..., C+E(i,j)+..., shift(k), or @file."""
    spec = spec.strip()
    if spec.startswith("@"):
        with open(spec[1:], "r", encoding="utf-8") as fh:
            text = fh.read()
        stripped = text.lstrip()
        if stripped.startswith("{"):
            return gf2.from_json_obj(json.loads(text))
        return gf2.from_text(text)
    m = re.match(r"^shift\((\d+)\)$", spec)
    if m:
        return gf2.cyclic_row_shift(gf2.identity(n), int(m.group(1)))
    terms = spec.split("+")
    base = terms[0].strip()
    if base == "I":
        out = gf2.identity(n)
    elif base == "C":
        out = gf2.reversal(n)
    else:
        raise FibrocubeError(f"matrix spec must start with I, C, or shift(k): {spec!r}")
    for term in terms[1:]:
        m = _MATRIX_TERM.match(term.strip())
        if not m:
            raise FibrocubeError(f"bad matrix term {term!r} (expected E(i,j))")
        out = gf2.add(out, gf2.unit(n, int(m.group(1)), int(m.group(2))))
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_n(n: int, brute: bool) -> None:
    if brute:
        if not 1 <= n <= classify.BRUTE_MAX_N:
            raise FibrocubeError(f"brute-force commands require 1 <= n <= {classify.BRUTE_MAX_N}")
    elif not 1 <= n <= _max_n():
        raise FibrocubeError(f"-n must be within 1..{_max_n()} (set FIBROCUBE_MAX_N to raise)")


def _cmd_cube(args) -> int:
    _check_n(args.n, brute=False)
    g = build_cube(CubeKind(args.kind), args.n)
    fmt = "json" if args.output == "json" else "dot"
    text = export_graph(g, fmt)
    if fmt == "json":
        text += "\n"
    _emit(text, args.out)
    return 0


def _group(args) -> classify.GoodMatrixGroup:
    kind = CubeKind(args.kind)
    if args.brute:
        elements = classify.enumerate_brute(kind, args.n, jobs=args.jobs)
    else:
        elements = classify.generate_analytic(kind, args.n)
    return classify.analyze_group(elements, kind=kind)


def _cmd_classify(args) -> int:
    _check_n(args.n, brute=args.brute)
    group = _group(args)
    if args.output == "json":
        _emit(json.dumps(classify.group_to_json_obj(group), separators=(",", ":")) + "\n", args.out)
    else:
        lines = [
            f"kind: {group.kind.value}",
            f"n: {group.n}",
            f"order: {len(group.elements)}",
            f"structure: {group.structure}",
        ]
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_group_table(args) -> int:
    _check_n(args.n, brute=args.brute)
    group = _group(args)
    obj = classify.group_to_json_obj(group)
    del obj["elements"]
    if args.output == "json":
        _emit(json.dumps(obj, separators=(",", ":")) + "\n", args.out)
    else:
        lines = [f"order: {obj['order']}", f"structure: {obj['structure']}"]
        for row in group.cayley:
            lines.append(" ".join(f"{v:3d}" for v in row))
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_route(args) -> int:
    _check_n(args.n, brute=False)
    kind = CubeKind(args.kind)
    g = build_cube(kind, args.n)
    a = parse_matrix_spec(args.matrix, args.n)
    verdict = classify.is_good(a, g)
    if not verdict.good:
        if verdict.witness is not None:
            raise MatrixNotGoodError(
                "matrix maps a vertex outside the cube", witness=verdict.witness
            )
        raise MatrixNotGoodError("matrix is not invertible")
    if a == gf2.identity(args.n):
        plan = route._plan(g, route.identity_perm(g), [], bound=0, matrix=a)
    elif a == gf2.reversal(args.n):
        plan = route.route_reversal(g)
    elif kind is CubeKind.FIBONACCI:
        plan = route.route_linear_fibonacci(g, a)
    elif args.n >= 5:
        plan = route.route_lucas(g, a)
    else:
        shifts = {gf2.cyclic_row_shift(gf2.identity(args.n), k): k for k in range(args.n)}
        if a not in shifts:
            raise FibrocubeError("no synthesizer for this matrix at this dimension")
        plan = route.route_coordinate_cycle(g, shifts[a])
    if args.output == "json":
        _emit(route.plan_to_json(plan) + "\n", args.out)
    else:
        _emit(
            f"steps: {len(plan.steps)}\nbound: {plan.declared_bound}\nvalid: true\n",
            args.out,
        )
    return 0


def _cmd_validate(args) -> int:
    with open(args.plan, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    plan = route.plan_from_json_obj(obj)
    report = route.validate_plan(plan)
    if args.output == "json":
        _emit(report.to_json() + "\n", args.out)
    else:
        _emit(
            f"valid: {str(report.valid).lower()}\nsteps: {report.steps}\n"
            f"failures: {len(report.failures)}\n",
            args.out,
        )
    return 0 if report.valid else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibrocube",
        description="Fibonacci/Lucas cubes: construction, good-matrix groups, routing",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, matrix=False, brute=False):
        p.add_argument("--kind", choices=["fibonacci", "lucas"], required=True)
        p.add_argument("-n", type=int, required=True)
        p.add_argument("--output", choices=["json", "text"], default="json")
        p.add_argument("--out", default=None, help="write output to this path")
        if matrix:
            p.add_argument("--matrix", required=True, help="I, C, I+E(i,j).., shift(k), or @file")
        if brute:
            p.add_argument("--brute", action="store_true", help="use the exhaustive oracle")
            p.add_argument("--jobs", type=int, default=1, help="worker processes for --brute")

    common(sub.add_parser("cube", help="emit the cube graph"))
    common(sub.add_parser("classify", help="emit the good-matrix group"), brute=True)
    common(sub.add_parser("group-table", help="emit the Cayley table"), brute=True)
    common(sub.add_parser("route", help="emit a routing plan"), matrix=True)
    vp = sub.add_parser("validate", help="validate a plan file")
    vp.add_argument("plan", help="path to a plan JSON file")
    vp.add_argument("--output", choices=["json", "text"], default="json")
    vp.add_argument("--out", default=None)
    return parser


_HANDLERS = {
    "cube": _cmd_cube,
    "classify": _cmd_classify,
    "group-table": _cmd_group_table,
    "route": _cmd_route,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _HANDLERS[args.command](args)
    except MatrixNotGoodError as exc:
        witness = ""
        if exc.witness is not None and hasattr(args, "n"):
            from ._bits import bits_to_string

            witness = f" (witness vertex {bits_to_string(exc.witness, args.n)})"
        print(f"error: {exc}{witness}", file=sys.stderr)
        return 2
    except (FibrocubeError, OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
