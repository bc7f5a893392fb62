#!/usr/bin/env python3
"""Generate the CSV inputs for the six standard figures via the CLI.

Each recipe writes its CSVs under <outdir>/<fig>/; the companion plotting
package (figures/, installed as ryddrive-figures) turns them into images:

    python scripts/reproduce_figures.py all --outdir out
    ryddrive-figures fig6 --scan out/fig6/rfscan.csv --peaks out/fig6/rfpeaks.csv --out fig6.png

Every recipe runs in well under ten minutes; `fig6`/`fig7` carry the bulk of
the integration time.
"""

import argparse
import sys
from pathlib import Path

from ryddrive.cli import run


def _run(args):
    code = run([str(a) for a in args])
    if code != 0:
        sys.exit(code)


def fig3(out: Path):
    """Pair energy gaps vs field with the two resonance fields marked."""
    _run(["resonances", "--constants", "computed", "--pair-energies", "--outdir", out])


def fig4(out: Path):
    """Static-field scans at 20 / 30 / 40 um separation."""
    for sep in (20, 30, 40):
        d = out / f"sep{sep}"
        _run([
            "fieldscan", "--separation", sep, "--fmin", "0.33", "--fmax", "0.45",
            "--points", "121", "--shots", "600", "--seed", "11",
            "--length", "140", "--field-noise", "0.0014", "--outdir", d,
        ])


def fig5(out: Path):
    """Switching staircase plus constant-field references (R = 48 um pair)."""
    common = ["--duration", "20", "--samples", "401", "--separation", "48"]
    _run(["dynamics", "--program", "switching"] + common + ["--outdir", out / "switching"])
    _run(["dynamics", "--program", "constant", "--f-s", "0.3807"] + common + ["--outdir", out / "on"])
    _run(["dynamics", "--program", "constant", "--f-s", "0.0",
          "--background-rate", "0.002"] + common + ["--outdir", out / "off"])


def fig6(out: Path):
    """Multi-photon rf spectrum at F_S = 260 mV/cm, F_rf = 80 mV/cm."""
    _run([
        "rfscan", "--f-s", "0.26", "--f-rf", "0.08", "--omega-min", "2.2",
        "--omega-max", "16.5", "--points", "287", "--outdir", out,
    ])
    _run(["resonances", "--constants", "reference", "--f-s", "0.26", "--f-rf", "0.08",
          "--outdir", out])


def fig7(out: Path):
    """Selection rule: same effective field with and without a static offset."""
    for name, f_s, f_rf in (("upper", 0.060, 0.320), ("lower", 0.0, 0.331)):
        d = out / name
        _run([
            "rfscan", "--f-s", f_s, "--f-rf", f_rf, "--omega-min", "2.5",
            "--omega-max", "17.5", "--points", "301", "--outdir", d,
        ])
        _run(["resonances", "--constants", "reference", "--f-s", f_s, "--f-rf", f_rf,
              "--outdir", d])


def fig8(out: Path):
    """One-photon spectroscopy positions vs static field, with the fit."""
    _run([
        "spectroscopy", "--constants", "reference", "--f-rf", "0.08",
        "--fs-min", "0.0", "--fs-max", "0.34", "--points", "18", "--outdir", out,
    ])
    _run(["resonances", "--constants", "reference", "--outdir", out])


RECIPES = {"fig3": fig3, "fig4": fig4, "fig5": fig5, "fig6": fig6, "fig7": fig7, "fig8": fig8}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("figure", choices=[*RECIPES, "all"])
    parser.add_argument("--outdir", type=Path, default=Path("out"))
    args = parser.parse_args()
    targets = RECIPES if args.figure == "all" else {args.figure: RECIPES[args.figure]}
    for name, recipe in targets.items():
        out = args.outdir / name
        out.mkdir(parents=True, exist_ok=True)
        print(f"== {name} -> {out}")
        recipe(out)


if __name__ == "__main__":
    main()
