"""Command line for rendering the standard figures from ryddrive CSV outputs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipes import FigureRecipe
from .render import render
from .schema import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ryddrive-figures",
        description="Render figures from the documented ryddrive CSV outputs",
    )
    sub = parser.add_subparsers(dest="figure")

    p = sub.add_parser("fig3", help="pair energy gaps vs field with resonance markers")
    p.add_argument("--pair-energy", required=True, help="pairenergy.csv")
    p.add_argument("--resonances", required=True, help="resonances.csv")

    p = sub.add_parser("fig4", help="static-field scans, one axis per separation set")
    p.add_argument("--scan", action="append", required=True, help="fieldscan.csv (repeatable)")
    p.add_argument("--label", action="append", default=[], help="legend label per scan")

    p = sub.add_parser("fig5", help="49p fraction vs time for switching programs")
    p.add_argument("--dynamics", action="append", required=True, help="dynamics.csv (repeatable)")
    p.add_argument("--label", action="append", default=[], help="legend label per trace")

    p = sub.add_parser("fig6", help="multi-photon rf spectrum with predicted positions")
    p.add_argument("--scan", required=True, help="rfscan.csv")
    p.add_argument("--peaks", required=True, help="rfpeaks.csv")

    p = sub.add_parser("fig7", help="selection-rule comparison, two panels")
    p.add_argument("--upper-scan", required=True)
    p.add_argument("--upper-peaks", required=True)
    p.add_argument("--lower-scan", required=True)
    p.add_argument("--lower-peaks", required=True)

    p = sub.add_parser("fig8", help="one-photon resonance positions vs static field")
    p.add_argument("--points", required=True, help="spectroscopy.csv")
    p.add_argument("--resonances", required=True, help="resonances.csv")

    for name, sp in sub.choices.items():
        sp.add_argument("--out", required=True, help="output image (.png or .svg)")
    return parser


def _recipe_from_args(args) -> FigureRecipe:
    fid = args.figure
    if fid == "fig3":
        inputs = {"pair_energy": args.pair_energy, "resonances": args.resonances}
    elif fid == "fig4":
        inputs = {"scans": args.scan}
    elif fid == "fig5":
        inputs = {"dynamics": args.dynamics}
    elif fid == "fig6":
        inputs = {"scan": args.scan, "peaks": args.peaks}
    elif fid == "fig7":
        inputs = {
            "upper_scan": args.upper_scan,
            "upper_peaks": args.upper_peaks,
            "lower_scan": args.lower_scan,
            "lower_peaks": args.lower_peaks,
        }
    else:
        inputs = {"points": args.points, "resonances": args.resonances}
    labels = tuple(getattr(args, "label", []) or [])
    return FigureRecipe(fig_id=fid, inputs=inputs, output=Path(args.out), labels=labels)


def run(argv=None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if args.figure is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        out = render(_recipe_from_args(args))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
