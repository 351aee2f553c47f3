"""Command line entry point: ``igacuf run <case|table|all|file.json>``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..errors import IgaCufError
from .cases import builtin_cases, select_cases
from .report import TOLERANCE_PROFILES, compare, emit_table, write_outputs
from .runner import apply_overrides, run_case

OUT_ENV = "IGACUF_OUT"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="igacuf", description="NURBS/CUF laminated plate benchmarks")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run builtin cases, a table, 'all' or a JSON case file")
    run.add_argument("target")
    run.add_argument("--mesh", type=int, help="override elements per side")
    run.add_argument("--degree", type=int, choices=(2, 3, 4), help="override NURBS degree")
    run.add_argument("--alpha", type=float, help="stabilization constant")
    run.add_argument("--no-stabilization", action="store_true", help="disable shear stabilization")
    run.add_argument("--out", type=Path, help=f"output directory (default ${OUT_ENV} or ./results)")
    run.add_argument("--format", choices=("csv", "md"), default="csv")
    run.add_argument("--tolerance-profile", choices=sorted(TOLERANCE_PROFILES), default="paper")
    run.add_argument("--jobs", type=int, default=1, help="cases run in parallel")
    run.add_argument("-q", "--quiet", action="store_true")

    sub.add_parser("list", help="list builtin cases")
    show = sub.add_parser("show", help="print a builtin case as JSON")
    show.add_argument("name")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for name, spec in builtin_cases().items():
            print(f"{name:28s} {spec.table:7s} {spec.analysis:6s} p={spec.degree} {spec.mesh}x{spec.mesh}")
        return 0
    if args.command == "show":
        cases = builtin_cases()
        if args.name not in cases:
            print(f"unknown case {args.name!r}", file=sys.stderr)
            return 2
        print(cases[args.name].to_json())
        return 0

    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        specs = select_cases(args.target)
    except IgaCufError as exc:
        print(exc, file=sys.stderr)
        return 2
    specs = [apply_overrides(s, args.mesh, args.degree, args.alpha,
                             False if args.no_stabilization else None) for s in specs]
    try:
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(run_case, specs))
        else:
            results = [run_case(s) for s in specs]
    except IgaCufError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = args.out or Path(os.environ.get(OUT_ENV, "results"))
    report = write_outputs(results, out, args.format, args.tolerance_profile)
    if not args.quiet:
        for table in dict.fromkeys(r.spec.table for r in results):
            print(emit_table([r for r in results if r.spec.table == table], "md"))
    print(report.text() if not args.quiet else "\n".join(report.lines[:2]))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
