"""Command-line entry point.

Exit codes: 0 success, 1 failed checks, 2 usage or scenario errors, 3 I/O errors.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ScenarioClassMismatch, ScenarioFormatError
from .figures import FIGURE_IDS, FigureSpec, default_scenarios, export_csv, render_figure
from .scenarios import BUILTIN, DEFAULT_SUITE, Scenario, load_scenario
from .verify import format_text, run_suite, write_json

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, metavar="N", help="anomaly grid size (default: per scenario, 360)")
    common.add_argument("--tol-rel", type=float, metavar="X", help="relative tolerance for analytic checks")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hodograph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    p.add_argument("--scenario", action="append", metavar="SPEC",
                   help="builtin:NAME or a scenario file; repeatable (default: all built-ins)")
    p.add_argument("--report", metavar="PATH", help="also write a JSON report")
    p.add_argument("--quiet", action="store_true", help="print only the summary line")

    p = sub.add_parser("figure", parents=[common], help="render a figure as SVG")
    p.add_argument("--id", required=True, choices=FIGURE_IDS, dest="figure_id")
    p.add_argument("--scenario", action="append", metavar="SPEC",
                   help="scenario for the figure; two (E<0 then E>0) for director-circles and hodographs")
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--csv", metavar="PATH", help="also export the trace table of the (first) scenario")

    p = sub.add_parser("export", parents=[common], help="write the construction trace table as CSV")
    p.add_argument("--scenario", required=True, metavar="SPEC")
    p.add_argument("--out", required=True, metavar="PATH")

    sub.add_parser("list-scenarios", help="list built-in scenarios")
    return parser


def _apply_overrides(sc: Scenario, args) -> Scenario:
    if getattr(args, "grid", None) is not None:
        sc = sc.with_grid(args.grid)
    if getattr(args, "tol_rel", None) is not None:
        sc = sc.with_tolerances(rel=args.tol_rel)
    return sc


def _scenarios(specs, args) -> list[Scenario]:
    return [_apply_overrides(load_scenario(s), args) for s in specs]


def _cmd_verify(args) -> int:
    scenarios = _scenarios(args.scenario or [f"builtin:{n}" for n in DEFAULT_SUITE], args)
    reports = run_suite(scenarios)
    text = format_text(reports)
    print(text.splitlines()[-1] if args.quiet else text, end="" if not args.quiet else "\n")
    if args.report:
        write_json(reports, args.report)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _cmd_figure(args) -> int:
    if args.scenario:
        scenarios = tuple(_scenarios(args.scenario, args))
    else:
        scenarios = tuple(_apply_overrides(sc, args) for sc in default_scenarios(args.figure_id))
    render_figure(FigureSpec(args.figure_id, scenarios), args.out)
    if args.csv:
        export_csv(scenarios[0], args.csv)
    return EXIT_OK


def _cmd_export(args) -> int:
    sc = _scenarios([args.scenario], args)[0]
    export_csv(sc, args.out)
    return EXIT_OK


def _cmd_list(args) -> int:
    for name, sc in BUILTIN.items():
        s = sc.initial
        print(f"{name:<10} k={sc.k:g} r=({s.r.x:.6g}, {s.r.y:.6g}) p=({s.p.x:.6g}, {s.p.y:.6g}) grid={sc.phi_count}")
    return EXIT_OK


COMMANDS = {"verify": _cmd_verify, "figure": _cmd_figure, "export": _cmd_export, "list-scenarios": _cmd_list}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (ScenarioFormatError, ScenarioClassMismatch) as exc:
        print(f"hodograph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hodograph: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
