"""Figure recipes: which CSV inputs feed which figure."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

FIGURE_IDS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")

# role name -> schema kind, per figure
FIGURE_INPUTS: dict[str, dict[str, str]] = {
    "fig3": {"pair_energy": "pairenergy", "resonances": "resonances"},
    "fig4": {"scans": "fieldscan"},      # one or more scans
    "fig5": {"dynamics": "dynamics"},    # one or more traces
    "fig6": {"scan": "rfscan", "peaks": "rfpeaks"},
    "fig7": {
        "upper_scan": "rfscan",
        "upper_peaks": "rfpeaks",
        "lower_scan": "rfscan",
        "lower_peaks": "rfpeaks",
    },
    "fig8": {"points": "spectroscopy", "resonances": "resonances"},
}


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs and styling for one figure render.

    inputs maps role names to CSV paths (lists for the multi-trace roles of
    fig4/fig5); labels optionally annotate multi-trace inputs.
    """

    fig_id: str
    inputs: dict
    output: Path
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.fig_id not in FIGURE_IDS:
            raise ValueError(f"figure id must be one of {FIGURE_IDS}, got {self.fig_id!r}")
        missing = set(FIGURE_INPUTS[self.fig_id]) - set(self.inputs)
        if missing:
            raise ValueError(f"{self.fig_id} recipe is missing inputs: {sorted(missing)}")
