"""Documented CSV schemas of the ryddrive CLI and a strict loader.

Every input file must carry exactly the documented header row (after any
'#'-prefixed comment lines) and at least one data row; anything else fails
loudly, naming the offending column.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

SCHEMAS: dict[str, tuple[str, ...]] = {
    "starkmap": ("field_Vcm", "level_index", "energy_GHz", "label"),
    "resonances": ("channel", "W0_MHz", "alpha_MHz_per_Vcm2", "F_res_Vcm"),
    "rfpeaks": ("channel", "N", "omega_MHz"),
    "pairenergy": ("field_Vcm", "W_a_MHz", "W_b_MHz"),
    "rfscan": ("freq_MHz", "p_fraction"),
    "dynamics": ("time_us", "p_sd", "p_ppa", "p_ppb"),
    "fieldscan": ("field_Vcm", "p_fraction", "p_fraction_err"),
    "spectroscopy": ("F_S_Vcm", "F_rf_Vcm", "omega_MHz", "N", "channel"),
}


class SchemaError(ValueError):
    """CSV header does not match the documented schema."""

    def __init__(self, path, kind: str, column: str, problem: str):
        self.column = column
        super().__init__(
            f"{path}: column {column!r} {problem} for the {kind!r} schema "
            f"(expected header: {','.join(SCHEMAS[kind])})"
        )


def load_table(path: str | Path, kind: str) -> np.ndarray:
    """Load one documented CSV into a structured array, validating its header."""
    if kind not in SCHEMAS:
        raise ValueError(f"unknown schema kind {kind!r}")
    path = Path(path)
    lines = path.read_text().splitlines()
    body = [ln for ln in lines if not ln.lstrip().startswith("#")]
    if not body:
        raise SchemaError(path, kind, SCHEMAS[kind][0], "is missing (file has no header row)")
    header = tuple(name.strip() for name in body[0].split(","))
    expected = SCHEMAS[kind]
    for col in expected:
        if col not in header:
            raise SchemaError(path, kind, col, "is missing")
    for col in header:
        if col not in expected:
            raise SchemaError(path, kind, col, "is unexpected")
    if header != expected:
        raise SchemaError(path, kind, header[0], "is out of order")
    if len(body) < 2:
        raise SchemaError(path, kind, expected[0], "has no data rows")
    data = np.genfromtxt(
        io.StringIO("\n".join(body)), delimiter=",", names=True, dtype=None, encoding=None
    )
    return np.atleast_1d(data)
