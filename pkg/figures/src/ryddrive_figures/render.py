"""Deterministic rendering of the six standard figures from ryddrive CSVs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import FigureRecipe
from .schema import load_table

# fixed settings so identical inputs give identical image bytes
matplotlib.rcParams["svg.hashsalt"] = "ryddrive-figures"
_METADATA = {"png": {"Software": "ryddrive-figures"}, "svg": {"Date": None}}

_MARKER_STYLE = {"a": {"ls": "--", "color": "tab:red"}, "b": {"ls": ":", "color": "tab:blue"}}


def _save(fig, output: Path) -> Path:
    output = Path(output)
    fmt = output.suffix.lstrip(".").lower() or "png"
    fig.savefig(output, format=fmt, dpi=150, metadata=_METADATA.get(fmt, {}))
    plt.close(fig)
    return output


def _peak_markers(ax, peaks, ymax):
    for row in peaks:
        ch = str(row["channel"])
        style = _MARKER_STYLE.get(ch, {"ls": "-.", "color": "gray"})
        ax.axvline(float(row["omega_MHz"]), lw=0.8, alpha=0.8, **style)
        ax.annotate(
            f"{ch}{int(row['N'])}",
            (float(row["omega_MHz"]), ymax),
            fontsize=7,
            ha="center",
            color=style["color"],
        )


def _labels(recipe: FigureRecipe, n: int) -> list[str]:
    labels = list(recipe.labels)
    while len(labels) < n:
        labels.append(f"trace {len(labels) + 1}")
    return labels


def _render_fig3(recipe: FigureRecipe):
    gaps = load_table(recipe.inputs["pair_energy"], "pairenergy")
    resonances = load_table(recipe.inputs["resonances"], "resonances")
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(gaps["field_Vcm"], gaps["W_a_MHz"], color="tab:red", label="channel a")
    ax.plot(gaps["field_Vcm"], gaps["W_b_MHz"], color="tab:blue", label="channel b")
    ax.axhline(0.0, color="k", lw=0.8)
    for row in resonances:
        ch = str(row["channel"])
        ax.axvline(float(row["F_res_Vcm"]), lw=0.8, **_MARKER_STYLE.get(ch, {}))
    ax.set_xlabel("static field (V/cm)")
    ax.set_ylabel("pair energy gap W (MHz)")
    ax.legend(frameon=False)
    return fig


def _render_fig4(recipe: FigureRecipe):
    paths = recipe.inputs["scans"]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for path, label in zip(paths, _labels(recipe, len(paths))):
        scan = load_table(path, "fieldscan")
        ax.errorbar(
            scan["field_Vcm"], scan["p_fraction"], yerr=scan["p_fraction_err"],
            fmt="o-", ms=2.5, lw=0.9, label=label,
        )
    ax.set_xlabel("static field (V/cm)")
    ax.set_ylabel("49p fraction")
    ax.legend(frameon=False)
    return fig


def _render_fig5(recipe: FigureRecipe):
    paths = recipe.inputs["dynamics"]
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    for path, label in zip(paths, _labels(recipe, len(paths))):
        tr = load_table(path, "dynamics")
        ax.plot(tr["time_us"], tr["p_ppa"] + tr["p_ppb"], lw=1.1, label=label)
    ax.set_xlabel("interaction time (us)")
    ax.set_ylabel("49p fraction")
    ax.legend(frameon=False)
    return fig


def _render_fig6(recipe: FigureRecipe):
    scan = load_table(recipe.inputs["scan"], "rfscan")
    peaks = load_table(recipe.inputs["peaks"], "rfpeaks")
    fig, ax = plt.subplots(figsize=(5.6, 3.6))
    ax.plot(scan["freq_MHz"], scan["p_fraction"], color="k", lw=0.9)
    _peak_markers(ax, peaks, float(scan["p_fraction"].max()) * 1.02)
    ax.set_xlabel("rf frequency (MHz)")
    ax.set_ylabel("49p fraction")
    return fig


def _render_fig7(recipe: FigureRecipe):
    fig, axes = plt.subplots(2, 1, figsize=(5.6, 5.2), sharex=True)
    for ax, which in zip(axes, ("upper", "lower")):
        scan = load_table(recipe.inputs[f"{which}_scan"], "rfscan")
        peaks = load_table(recipe.inputs[f"{which}_peaks"], "rfpeaks")
        ax.plot(scan["freq_MHz"], scan["p_fraction"], color="k", lw=0.9)
        _peak_markers(ax, peaks, float(scan["p_fraction"].max()) * 1.02)
        ax.set_ylabel("49p fraction")
    axes[1].set_xlabel("rf frequency (MHz)")
    return fig


def _render_fig8(recipe: FigureRecipe):
    points = load_table(recipe.inputs["points"], "spectroscopy")
    resonances = load_table(recipe.inputs["resonances"], "resonances")
    constants = {
        str(r["channel"]): (float(r["W0_MHz"]), float(r["alpha_MHz_per_Vcm2"]))
        for r in resonances
    }
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    fs_grid = np.linspace(points["F_S_Vcm"].min(), points["F_S_Vcm"].max(), 300)
    for ch, (w0, alpha) in sorted(constants.items()):
        style = _MARKER_STYLE.get(ch, {})
        for f_rf in np.unique(points["F_rf_Vcm"][points["channel"] == ch]):
            w = w0 - 0.5 * alpha * (fs_grid**2 + 0.5 * float(f_rf) ** 2)
            ax.plot(fs_grid, np.abs(w), lw=0.9, color=style.get("color"), ls=style.get("ls"))
    for ch in sorted(constants):
        sel = points["channel"] == ch
        for N, marker in ((1, "o"), (-1, "^")):
            m = sel & (points["N"] == N)
            if m.any():
                ax.plot(
                    points["F_S_Vcm"][m], points["omega_MHz"][m], marker, ms=4,
                    color=_MARKER_STYLE.get(ch, {}).get("color"),
                    label=f"channel {ch}, {'+1' if N == 1 else '-1'} photon",
                )
    ax.set_xlabel("static field offset (V/cm)")
    ax.set_ylabel("rf frequency (MHz)")
    ax.legend(frameon=False, fontsize=8)
    return fig


_RENDERERS = {
    "fig3": _render_fig3,
    "fig4": _render_fig4,
    "fig5": _render_fig5,
    "fig6": _render_fig6,
    "fig7": _render_fig7,
    "fig8": _render_fig8,
}


def render(recipe: FigureRecipe) -> Path:
    """Render one recipe to its output path; pure function of the CSV inputs."""
    fig = _RENDERERS[recipe.fig_id](recipe)
    return _save(fig, recipe.output)
