"""Command-line front end.

Subcommands cover the main workflows: Stark maps, channel constants and
resonance fields, rf frequency scans, switching dynamics, ensemble field
scans, doublet fitting, and the spectroscopic inversion. Each run writes CSV
output plus a JSON run-manifest that can be re-fed as --config to reproduce
the outputs byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .atomic import RydbergState, rb85_defects
from .errors import FitError, IntegrationError
from . import ensemble as _ensemble
from . import pairint as _pairint
from . import rfdyn as _rfdyn
from . import stark as _stark

USAGE_EXIT = 2
NUMERICAL_EXIT = 1


@dataclass(frozen=True)
class Param:
    name: str
    type: Callable[[str], Any]
    default: Any
    help: str


# fields in V/cm, frequencies in MHz, lengths in um, times in us
PARAMS: dict[str, list[Param]] = {
    "starkmap": [
        Param("state", str, "49p3/2,1/2", "target state, e.g. 49p3/2,1/2 (sets the |m_j| block)"),
        Param("fmax", float, 0.45, "maximum field (V/cm)"),
        Param("points", int, 46, "number of field points (grid starts at 0)"),
        Param("window", float, 150.0, "basis energy window around the state (GHz)"),
    ],
    "resonances": [
        Param("constants", str, "computed", "channel constants: computed | reference"),
        Param("f_s", float, None, "static offset (V/cm) for an rf-resonance table"),
        Param("f_rf", float, None, "rf amplitude (V/cm) for an rf-resonance table"),
        Param("n_max", int, 5, "largest photon number for the rf-resonance table"),
        Param("pair_energies", bool, False, "also write pair gaps W(F) vs field"),
        Param("fmax", float, 0.45, "field range for --pair-energies (V/cm)"),
    ],
    "rfscan": [
        Param("f_s", float, 0.26, "static offset (V/cm)"),
        Param("f_rf", float, 0.08, "rf amplitude (V/cm)"),
        Param("omega_min", float, 1.0, "scan start (MHz)"),
        Param("omega_max", float, 30.0, "scan end (MHz)"),
        Param("points", int, 291, "number of frequency points"),
        Param("duration", float, 20.0, "interaction time (us)"),
        Param("coupling_a", float, None, "channel-a coupling V (MHz); default from separation"),
        Param("coupling_b", float, None, "channel-b coupling V (MHz); default from separation"),
        Param("separation", float, 25.0, "pair separation (um) for default couplings"),
        Param("constants", str, "reference", "channel constants: computed | reference"),
        Param("background_rate", float, 0.0, "incoherent sd->pp background rate (1/us)"),
    ],
    "dynamics": [
        Param("program", str, "switching", "field program: switching | constant | rf"),
        Param("f_on", float, None, "switching level (V/cm); default: channel-a resonance"),
        Param("f_off", float, 0.0, "switching off-level (V/cm)"),
        Param("dwell", float, 2.5, "switching dwell per level (us)"),
        Param("slew", float, 76.0, "slew rate between levels (V/cm per us)"),
        Param("f_s", float, 0.0, "static field for constant/rf programs (V/cm)"),
        Param("f_rf", float, 0.0, "rf amplitude for the rf program (V/cm)"),
        Param("omega", float, 0.0, "rf frequency (MHz)"),
        Param("duration", float, 20.0, "interaction time (us)"),
        Param("samples", int, 401, "output samples"),
        Param("coupling_a", float, None, "channel-a coupling V (MHz); default from separation"),
        Param("coupling_b", float, None, "channel-b coupling V (MHz); default from separation"),
        Param("separation", float, 25.0, "pair separation (um) for default couplings"),
        Param("constants", str, "reference", "channel constants: computed | reference"),
        Param("background_rate", float, 0.0, "incoherent sd->pp background rate (1/us)"),
    ],
    "fieldscan": [
        Param("separation", float, 25.0, "volume separation (um)"),
        Param("fmin", float, 0.33, "scan start (V/cm)"),
        Param("fmax", float, 0.45, "scan end (V/cm)"),
        Param("points", int, 61, "number of field points"),
        Param("shots", int, 2000, "Monte-Carlo shots"),
        Param("n_s", int, 20, "49s atoms per shot"),
        Param("n_d", int, 20, "41d atoms per shot"),
        Param("diameter_s", float, 11.6, "49s volume FWHM diameter (um)"),
        Param("diameter_d", float, 16.3, "41d volume FWHM diameter (um)"),
        Param("length", float, 500.0, "volume length along the laser axis (um)"),
        Param("t_int", float, 20.0, "interaction time (us)"),
        Param("field_noise", float, 0.0, "per-shot rms field jitter (V/cm)"),
        Param("pairing", str, "strongest", "pairing model: strongest | all-pairs"),
        Param("constants", str, "reference", "channel constants: computed | reference"),
    ],
    "fitpeaks": [
        Param("input", str, None, "spectrum CSV (fieldscan or rfscan output)"),
    ],
    "spectroscopy": [
        Param("input", str, None, "resonance CSV (F_S_Vcm,F_rf_Vcm,N,omega_MHz,channel); default: generate"),
        Param("f_rf", float, 0.08, "rf amplitude for generated data (V/cm)"),
        Param("fs_min", float, 0.0, "generated static-field range start (V/cm)"),
        Param("fs_max", float, 0.3, "generated static-field range end (V/cm)"),
        Param("points", int, 13, "generated points per channel"),
        Param("noise", float, 0.0, "Gaussian noise on generated omega (MHz)"),
        Param("constants", str, "reference", "channel constants: computed | reference"),
    ],
}

GLOBAL_PARAMS = [
    Param("outdir", str, ".", "output directory"),
    Param("seed", int, 0, "random seed"),
]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ryddrive",
        description="Rydberg dipole-dipole transfer: Stark maps, rf spectra, ensemble scans",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")
    for cmd, params in PARAMS.items():
        p = sub.add_parser(cmd, help=f"run the {cmd} workflow")
        p.add_argument("--config", type=str, default=None, help="JSON config file (flags win)")
        for par in GLOBAL_PARAMS + params:
            flag = "--" + par.name.replace("_", "-")
            if par.type is bool:
                p.add_argument(flag, action="store_const", const=True, default=None, help=par.help)
            else:
                p.add_argument(flag, type=par.type, default=None, help=par.help)
    return parser


def _resolve_config(cmd: str, args: argparse.Namespace) -> dict[str, Any]:
    spec = {p.name: p for p in GLOBAL_PARAMS + PARAMS[cmd]}
    cfg = {name: p.default for name, p in spec.items()}
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValueError(f"cannot read config {args.config}: {exc}") from exc
        if "config" in loaded and "command" in loaded:  # a re-fed run manifest
            loaded = loaded["config"]
        section = loaded.get(cmd, loaded) if isinstance(loaded, dict) else None
        if not isinstance(section, dict):
            raise ValueError(f"config for {cmd!r} must be a JSON object")
        for key, value in section.items():
            if key not in spec:
                raise ValueError(f"unknown config key {cmd}.{key!r}")
            cfg[key] = value
    for name in spec:
        flag_val = getattr(args, name, None)
        if flag_val is not None:
            cfg[name] = flag_val
    return cfg


def _write_csv(path: Path, comments: list[str], header: list[str], rows) -> Path:
    with path.open("w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _write_manifest(outdir: Path, cmd: str, cfg: dict, outputs: list[Path]) -> Path:
    manifest = {
        "command": cmd,
        "config": {cmd: cfg},
        "versions": {
            "ryddrive": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
        },
        "outputs": [p.name for p in outputs],
    }
    path = outdir / f"{cmd}_manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _channels(mode: str):
    if mode not in ("computed", "reference"):
        raise ValueError(f"constants must be 'computed' or 'reference', got {mode!r}")
    return _stark.channels(mode)


def _default_couplings(cfg: dict, channels) -> tuple[float, float]:
    geom = _pairint.PairGeometry.along_z(cfg["separation"])
    va = cfg.get("coupling_a")
    vb = cfg.get("coupling_b")
    if va is None:
        va = abs(_pairint.channel_coupling(channels[0], geom))
    if vb is None:
        vb = abs(_pairint.channel_coupling(channels[1], geom))
    return float(va), float(vb)


def _cmd_starkmap(cfg: dict, outdir: Path) -> list[Path]:
    state = RydbergState.from_label(cfg["state"])
    basis = _stark.StarkBasis.around(state, window_GHz=cfg["window"])
    fields = np.linspace(0.0, cfg["fmax"], cfg["points"])
    smap = _stark.stark_map(basis, fields)
    out = smap.to_csv(outdir / "starkmap.csv")
    print(f"Stark map: {len(basis.states)} states x {len(fields)} fields -> {out}")
    for w in smap.warnings:
        print(f"  tracking warning: {w}")
    return [out]


def _cmd_resonances(cfg: dict, outdir: Path) -> list[Path]:
    ch_a, ch_b = _channels(cfg["constants"])
    outputs = []
    rows = []
    for ch in (ch_a, ch_b):
        F = _stark.resonance_field(ch)
        rows.append([ch.label, ch.W0, ch.alpha, F])
        print(
            f"channel {ch.label}: W0 = {ch.W0:.3f} MHz, alpha = {ch.alpha:.2f} MHz/(V/cm)^2, "
            f"F_{ch.label} = {F:.4f} V/cm"
        )
    outputs.append(
        _write_csv(
            outdir / "resonances.csv",
            [f"channel constants ({cfg['constants']})", "units: W0 MHz, alpha MHz/(V/cm)^2, F V/cm"],
            ["channel", "W0_MHz", "alpha_MHz_per_Vcm2", "F_res_Vcm"],
            rows,
        )
    )
    if cfg["f_s"] is not None and cfg["f_rf"] is not None:
        rows = []
        for ch in (ch_a, ch_b):
            for N, om in _rfdyn.resonance_frequencies(ch, cfg["f_s"], cfg["f_rf"], cfg["n_max"]):
                rows.append([ch.label, N, om])
        outputs.append(
            _write_csv(
                outdir / "rfpeaks.csv",
                [
                    f"N-photon rf resonances at F_S={cfg['f_s']} V/cm, F_rf={cfg['f_rf']} V/cm",
                    "units: omega MHz",
                ],
                ["channel", "N", "omega_MHz"],
                rows,
            )
        )
    if cfg["pair_energies"]:
        fields = np.linspace(0.0, cfg["fmax"], 181)
        rows = [
            [F, float(_stark.pair_energy_difference(ch_a, F)), float(_stark.pair_energy_difference(ch_b, F))]
            for F in fields
        ]
        outputs.append(
            _write_csv(
                outdir / "pairenergy.csv",
                ["pair gap W(F) = W0 - alpha F^2/2 per channel", "units: field V/cm, W MHz"],
                ["field_Vcm", "W_a_MHz", "W_b_MHz"],
                rows,
            )
        )
    return outputs


def _cmd_rfscan(cfg: dict, outdir: Path) -> list[Path]:
    channels = _channels(cfg["constants"])
    va, vb = _default_couplings(cfg, channels)
    omegas = np.linspace(cfg["omega_min"], cfg["omega_max"], cfg["points"])
    spec = _rfdyn.floquet_spectrum(
        channels, (va, vb), cfg["f_s"], cfg["f_rf"], omegas,
        duration=cfg["duration"], background_rate=cfg["background_rate"],
    )
    out = _write_csv(
        outdir / "rfscan.csv",
        [
            f"rf frequency scan at F_S={cfg['f_s']} V/cm, F_rf={cfg['f_rf']} V/cm, "
            f"V_a={va:.4g} MHz, V_b={vb:.4g} MHz, t={cfg['duration']} us",
            "units: freq MHz",
        ],
        ["freq_MHz", "p_fraction"],
        zip(spec.x, spec.y),
    )
    print(f"rf scan: {len(omegas)} points, max transfer {spec.y.max():.3f} -> {out}")
    return [out]


def _cmd_dynamics(cfg: dict, outdir: Path) -> list[Path]:
    channels = _channels(cfg["constants"])
    va, vb = _default_couplings(cfg, channels)
    kind = cfg["program"]
    if kind == "switching":
        f_on = cfg["f_on"] if cfg["f_on"] is not None else _stark.resonance_field(channels[0])
        prog = _rfdyn.switching_program(
            f_on, cfg["f_off"], dwell=cfg["dwell"], duration=cfg["duration"], slew=cfg["slew"]
        )
    elif kind == "constant":
        prog = _rfdyn.FieldProgram(F_S=cfg["f_s"])
    elif kind == "rf":
        prog = _rfdyn.FieldProgram(F_S=cfg["f_s"], F_rf=cfg["f_rf"], omega=cfg["omega"])
    else:
        raise ValueError(f"unknown program {kind!r} (switching | constant | rf)")
    res = _rfdyn.simulate_dynamics(
        channels, (va, vb), prog, cfg["duration"],
        n_samples=cfg["samples"], background_rate=cfg["background_rate"],
    )
    out = _write_csv(
        outdir / "dynamics.csv",
        [
            f"three-level dynamics, program={kind}, V_a={va:.4g} MHz, V_b={vb:.4g} MHz",
            "units: time us",
        ],
        ["time_us", "p_sd", "p_ppa", "p_ppb"],
        np.column_stack([res.times, res.populations]),
    )
    print(f"dynamics: final 49p fraction {res.final_p_fraction:.4f} -> {out}")
    return [out]


def _cmd_fieldscan(cfg: dict, outdir: Path) -> list[Path]:
    channels = _channels(cfg["constants"])
    ecfg = _ensemble.EnsembleConfig(
        separation=cfg["separation"],
        diameter_s=cfg["diameter_s"],
        diameter_d=cfg["diameter_d"],
        length=cfg["length"],
        n_atoms=(cfg["n_s"], cfg["n_d"]),
        t_int=cfg["t_int"],
        n_shots=cfg["shots"],
        seed=cfg["seed"],
        field_noise=cfg["field_noise"],
        pairing=cfg["pairing"],
    )
    fields = np.linspace(cfg["fmin"], cfg["fmax"], cfg["points"])
    spec = _ensemble.scan_static_field(ecfg, channels, fields)
    out = _write_csv(
        outdir / "fieldscan.csv",
        [
            f"ensemble static-field scan, separation={cfg['separation']} um, "
            f"{cfg['shots']} shots, seed={cfg['seed']}",
            "units: field V/cm",
        ],
        ["field_Vcm", "p_fraction", "p_fraction_err"],
        np.column_stack([spec.x, spec.y, spec.y_err]),
    )
    print(f"field scan: peak fraction {spec.y.max():.3f} -> {out}")
    return [out]


def load_csv(path: str | Path) -> np.ndarray:
    """Read one of the documented CSV outputs (leading '#' comments, then a
    header row) into a structured array."""
    lines = Path(path).read_text().splitlines()
    skip = 0
    while skip < len(lines) and lines[skip].lstrip().startswith("#"):
        skip += 1
    return np.genfromtxt(
        path, delimiter=",", names=True, skip_header=skip, dtype=None, encoding=None
    )


def _read_spectrum_csv(path: str) -> _rfdyn.SpectrumResult:
    data = load_csv(path)
    if data.dtype.names is None or len(data.dtype.names) < 2:
        raise ValueError(f"{path}: expected a CSV with a header row")
    names = data.dtype.names
    x = np.atleast_1d(data[names[0]])
    y = np.atleast_1d(data[names[1]])
    yerr = np.atleast_1d(data[names[2]]) if len(names) > 2 else np.zeros_like(y)
    return _rfdyn.SpectrumResult(x=x, y=y, y_err=yerr)


def _cmd_fitpeaks(cfg: dict, outdir: Path) -> list[Path]:
    if not cfg["input"]:
        raise ValueError("fitpeaks requires --input (a spectrum CSV)")
    spec = _read_spectrum_csv(cfg["input"])
    fit = _ensemble.fit_lorentzian_doublet(spec)
    report = fit.report()
    out = outdir / "fitpeaks.txt"
    out.write_text(report + "\n")
    print(report)
    return [out]


def _cmd_spectroscopy(cfg: dict, outdir: Path) -> list[Path]:
    ch_a, ch_b = _channels(cfg["constants"])
    rows = []
    if cfg["input"]:
        data = load_csv(cfg["input"])
        for rec in np.atleast_1d(data):
            rows.append(
                (float(rec["F_S_Vcm"]), float(rec["F_rf_Vcm"]), float(rec["omega_MHz"]),
                 int(rec["N"]), str(rec["channel"]))
            )
    else:
        rng = np.random.default_rng(cfg["seed"])
        fs_values = np.linspace(cfg["fs_min"], cfg["fs_max"], cfg["points"])
        for ch in (ch_a, ch_b):
            for F_S in fs_values:
                W = _rfdyn.detuning_at_effective_field(ch, F_S, cfg["f_rf"])
                N = 1 if W >= 0 else -1
                omega = W / N + (rng.normal(0.0, cfg["noise"]) if cfg["noise"] > 0 else 0.0)
                rows.append((float(F_S), cfg["f_rf"], float(omega), N, ch.label))
    fit = _rfdyn.extract_spectroscopy(rows)
    outputs = [
        _write_csv(
            outdir / "spectroscopy.csv",
            ["+/-1-photon resonance positions", "units: fields V/cm, omega MHz"],
            ["F_S_Vcm", "F_rf_Vcm", "omega_MHz", "N", "channel"],
            rows,
        )
    ]
    report = [
        f"W0 = {fit.W0:.4f} +/- {fit.W0_err:.4f} MHz",
        *(
            f"alpha_{lab} = {fit.alpha[lab]:.3f} +/- {fit.alpha_err[lab]:.3f} MHz/(V/cm)^2"
            for lab in sorted(fit.alpha)
        ),
        f"residual rms = {fit.residual_rms:.3g} MHz",
    ]
    out = outdir / "spectroscopy_fit.txt"
    out.write_text("\n".join(report) + "\n")
    outputs.append(out)
    print("\n".join(report))
    return outputs


_COMMANDS = {
    "starkmap": _cmd_starkmap,
    "resonances": _cmd_resonances,
    "rfscan": _cmd_rfscan,
    "dynamics": _cmd_dynamics,
    "fieldscan": _cmd_fieldscan,
    "fitpeaks": _cmd_fitpeaks,
    "spectroscopy": _cmd_spectroscopy,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Execute one subcommand; returns 0 (ok), 1 (numerical), or 2 (usage)."""
    parser = _build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return USAGE_EXIT
    try:
        cfg = _resolve_config(args.command, args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    outdir = Path(cfg["outdir"])
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        outputs = _COMMANDS[args.command](cfg, outdir)
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (IntegrationError, FitError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return NUMERICAL_EXIT
    manifest = _write_manifest(outdir, args.command, cfg, outputs)
    print(f"manifest -> {manifest}")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
