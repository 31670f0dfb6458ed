"""Command-line entry point: ``eqorbit <command> ...``.

Reports are JSON (sorted keys) on stdout or in ``--out``.  Exit status is 0 when
every selected check passes, 1 on a failed check (the report then carries the
first counterexample), 2 on unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import suites
from .exact_chain import ChainError
from .dga import DGAError
from .formats import (LOAD_ERRORS, load_algebra, load_cells, load_complex, load_gmodule,
                      load_group, parse_family, parse_subgroup, parse_window)
from .gmodule import GModuleError, coset_module, fixed_points, orbits
from .linalg import Field
from .model_struct import CellError
from .orbit_cat import CategoryError
from .presheaf import PresheafError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ring(s: str) -> Field:
    try:
        return Field.parse(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser, group: bool = True, family: bool = False,
            seed: bool = False, window: str | None = None):
    if group:
        p.add_argument("--group", required=True, help="group file (TOML/JSON) or builtin name")
    if family:
        p.add_argument("--family", default="all", help="all | trivial | file:<path>")
    p.add_argument("--ring", type=_ring, default=Field(0), help="q | fp:<p>")
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if window:
        p.add_argument("--window", default=window, help="degree window <lo>:<hi>")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--format", choices=["json", "markdown"], default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eqorbit", description="Equivariant chain complexes over orbit categories.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("group", help="group data")
    gs = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    _common(gs.add_parser("info", help="order, subgroups, conjugacy classes"))

    p = sub.add_parser("orbit-cat", help="hom-rank and composition tables")
    _common(p, family=True)
    p.add_argument("--variant", choices=["group-ring", "fixed", "both"], default="both")

    p = sub.add_parser("homology", help="homology of a complex file")
    _common(p, group=False)
    p.add_argument("--complex", required=True)

    for name in ("fixed", "orbits"):
        p = sub.add_parser(name, help=f"{name} of a G-module under a subgroup")
        _common(p)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--module", help="G-module file")
        src.add_argument("--coset", help="use R[G/K] for this subgroup K")
        p.add_argument("--subgroup", required=True, help="subgroup label or element labels")

    v = sub.add_parser("verify", help="verification suites")
    vs = v.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = vs.add_parser("adjunctions", help="keyG, bitensor, induction, double enrichment")
    _common(p, seed=True)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--window", default="-2:3")
    p.add_argument("--max-dim", type=int, default=3)
    p = vs.add_parser("quillen", help="epsilon, eta and triangle identities")
    _common(p, family=True, seed=True, window="0:1")
    p.add_argument("--instances", type=int, default=20)
    p = vs.add_parser("dreitoo", help="the adjunction with values in A-modules")
    _common(p, family=True, seed=True, window="0:1")
    p.add_argument("--algebra", default="exterior",
                   help="unit | exterior | exterior-acyclic | file:<path>")
    p.add_argument("--samples", type=int, default=5)

    r = sub.add_parser("report", help="informative reports")
    rs = r.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = rs.add_parser("tau", help="the comparison tau per pair of orbits")
    _common(p, family=True)
    p.add_argument("--algebra", default="exterior")

    c = sub.add_parser("cells", help="finite cell complexes")
    cs = c.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = cs.add_parser("build", help="attach cells from a TOML script")
    _common(p, family=True)
    p.add_argument("--cells", required=True)
    p = cs.add_parser("check-acyclic", help="J-cell script: inclusion is an F-equivalence")
    _common(p, family=True)
    p.add_argument("--cells", required=True)
    p = cs.add_parser("sm7", help="sampled (generator, fibration) pairs")
    _common(p, seed=True, window="-1:1")
    p.add_argument("--samples", type=int, default=100)
    return ap


def _module_for(args, G, F):
    H = parse_subgroup(G, args.subgroup)
    if args.module:
        M = load_gmodule(G, args.module, F)
    else:
        M = coset_module(G, parse_subgroup(G, args.coset), F)
    return M, H


def dispatch(args) -> dict:
    F = args.ring
    cmd = args.command
    if cmd == "homology":
        C = load_complex(args.complex, F)
        return {"suite": "homology", "field": C.field.name, "dims": suites.dims_of(C),
                "homology": C.homology(), "acyclic": C.is_acyclic(), "ok": True,
                "counterexample": None}
    G = load_group(args.group)
    family = parse_family(G, args.family) if hasattr(args, "family") else None
    window = parse_window(args.window) if getattr(args, "window", None) else None
    if cmd == "group":
        return suites.group_info(G)
    if cmd == "orbit-cat":
        return suites.orbit_cat_report(G, family, F, args.variant)
    if cmd in ("fixed", "orbits"):
        M, H = _module_for(args, G, F)
        X = fixed_points(M, H) if cmd == "fixed" else orbits(M, H)
        C = X.complex
        return {"suite": cmd, "group": G.name, "field": F.name, "subgroup": H.label,
                "module_dims": suites.dims_of(M.complex), "dims": suites.dims_of(C),
                "homology": C.homology(), "complex": C.to_json(), "ok": True,
                "counterexample": None}
    if cmd == "verify":
        if args.action == "adjunctions":
            return suites.adjunction_suite(G, F, args.seed, args.samples, window[0], window[1],
                                           args.max_dim)
        if args.action == "quillen":
            return suites.quillen_suite(G, family, F, args.seed, args.instances, window=window)
        A = load_algebra(args.algebra, F)
        return suites.dreitoo_report(G, family, A, args.seed, args.samples, window)
    if cmd == "report":
        return suites.tau_report(G, family, load_algebra(args.algebra, F))
    if cmd == "cells":
        if args.action == "sm7":
            return suites.sm7_suite([G], F, args.seed, args.samples, window)
        script = load_cells(G, args.cells, F)
        if args.action == "build":
            return suites.cells_build_report(G, F, script, family)[1]
        if any(kind != "J" for _, _, kind, _ in script["attach"]):
            raise CellError("check-acyclic takes J-cells only")
        return suites.cells_acyclic_report(G, family, F, script)
    raise UsageError(f"unknown command {cmd}")


def to_markdown(report: dict) -> str:
    """A readable view of the JSON report (nothing is recomputed)."""
    lines = [f"# {report.get('suite', 'report')}", ""]
    flat = json.loads(suites.dumps(report))
    for key in sorted(flat):
        val = flat[key]
        if key == "ranks" or (isinstance(val, dict) and "ranks" in val):
            table = val if key == "ranks" else val["ranks"]
            objs = list(table)
            lines += ["", f"## {key} hom ranks (row: source, column: target)", "",
                      "| | " + " | ".join(objs) + " |", "|---" * (len(objs) + 1) + "|"]
            for a in objs:
                lines.append(f"| {a} | " + " | ".join(str(table[a][b]) for b in objs) + " |")
            lines.append("")
        elif not isinstance(val, (dict, list)):
            lines.append(f"- **{key}**: {val}")
    if isinstance(flat.get("summary"), dict):
        lines += ["", "| check | passed | total |", "|---|---|---|"]
        for k, v in flat["summary"].items():
            lines.append(f"| {k} | {v['passed']} | {v['total']} |")
    if isinstance(flat.get("delta"), dict):
        lines += ["", "## delta discrepancies", ""]
        for d in flat["delta"]["discrepancies"]:
            lines.append(f"- hom({d['from']}, {d['to']}): group ring {d['group_ring']}, "
                         f"fixed point {d['fixed_point']}")
    return "\n".join(lines) + "\n"


INPUT_ERRORS = LOAD_ERRORS + (ChainError, GModuleError, CellError, DGAError, PresheafError,
                              CategoryError)


def _glue_windows(argv: list[str]) -> list[str]:
    # argparse takes "-1:1" for an option; bind it to --window explicitly
    out, k = [], 0
    while k < len(argv):
        if argv[k] == "--window" and k + 1 < len(argv):
            out.append(f"--window={argv[k + 1]}")
            k += 2
        else:
            out.append(argv[k])
            k += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_windows(argv))
    except UsageError as exc:
        print(f"eqorbit: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        report = dispatch(args)
    except INPUT_ERRORS as exc:
        print(f"eqorbit: invalid input: {exc}", file=sys.stderr)
        return 2
    text = suites.dumps(report) if args.format == "json" else to_markdown(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"eqorbit: {'pass' if report['ok'] else 'FAIL'} "
          f"({time.perf_counter() - start:.2f} s)", file=sys.stderr)
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
