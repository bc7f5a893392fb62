"""Stark maps and pair-channel constants.

Diagonalizes the dipole Stark Hamiltonian per |m_j| block, tracks levels
adiabatically across the field grid, extracts quadratic polarizabilities, and
combines them into the two-atom transfer-channel constants (W0, alpha) that
fix the resonance fields.
"""

from __future__ import annotations

import csv as _csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .atomic import (
    GridSpec,
    QuantumDefectTable,
    RydbergState,
    binding_energy_GHz,
    dipole_matrix_element,
    rb85_defects,
)
from .errors import QuadraticFitError
from .units import EA0_VCM_GHZ, HARTREE_MHZ

# the four states of the transfer 41d + 49s -> 42p + 49p
STATE_41D = RydbergState(41, 2, 1.5, 0.5)
STATE_49S = RydbergState(49, 0, 0.5, 0.5)
STATE_42P = RydbergState(42, 1, 0.5, 0.5)
STATE_49P_A = RydbergState(49, 1, 1.5, 0.5)
STATE_49P_B = RydbergState(49, 1, 1.5, 1.5)

# measured reference values for the channel constants (override for the
# computed ones so downstream modules can run without a Stark-map pass)
REFERENCE_CONSTANTS = {
    "a": (25.15, 347.04),
    "b": (25.15, 297.40),
}


@dataclass(frozen=True)
class PairChannel:
    """One sd -> pp transfer channel with its zero-field gap and polarizability.

    W0 (MHz) is the pp-above-sd energy difference at zero field; alpha
    (MHz/(V/cm)^2) the difference polarizability, both positive for the two
    channels here. The pair gap follows W(F) = W0 - alpha F^2 / 2.
    """

    label: str
    initial: tuple[RydbergState, RydbergState]
    final: tuple[RydbergState, RydbergState]
    W0: float
    alpha: float

    def __post_init__(self):
        if not (self.W0 > 0 and self.alpha > 0):
            raise ValueError(
                f"channel constants must be positive, got W0={self.W0}, alpha={self.alpha}"
            )


def _channel_states(label: str):
    if label == "a":
        return (STATE_41D, STATE_49S), (STATE_42P, STATE_49P_A)
    if label == "b":
        return (STATE_41D, STATE_49S), (STATE_42P, STATE_49P_B)
    raise ValueError(f"channel label must be 'a' or 'b', got {label!r}")


def reference_channel(label: str) -> PairChannel:
    """Channel with the measured reference constants."""
    initial, final = _channel_states(label)
    W0, alpha = REFERENCE_CONSTANTS[label]
    return PairChannel(label, initial, final, W0, alpha)


def reference_channels() -> tuple[PairChannel, PairChannel]:
    return reference_channel("a"), reference_channel("b")


@dataclass(frozen=True)
class StarkBasis:
    """All states of one |m_j| block inside an energy window around a target state."""

    mj: float
    states: tuple[RydbergState, ...]
    window_GHz: float
    n_range: tuple[int, int]
    defects: QuantumDefectTable

    @classmethod
    def around(
        cls,
        state: RydbergState,
        defects: QuantumDefectTable | None = None,
        window_GHz: float = 150.0,
        n_range: tuple[int, int] = (35, 55),
    ) -> "StarkBasis":
        defects = defects if defects is not None else rb85_defects()
        mj = state.mj_abs
        e0 = binding_energy_GHz(state, defects)
        states = []
        for n in range(n_range[0], n_range[1] + 1):
            for l in range(n):
                for dj in (-0.5, 0.5):
                    j = l + dj
                    if j < mj - 1e-9 or j < 0.5:
                        continue
                    s = RydbergState(n, l, j, mj)
                    if abs(binding_energy_GHz(s, defects) - e0) <= window_GHz:
                        states.append(s)
        states.sort(key=lambda s: binding_energy_GHz(s, defects))
        return cls(mj, tuple(states), window_GHz, n_range, defects)

    def index(self, state: RydbergState) -> int:
        return self.states.index(state)


_DIPOLE_MATRIX_CACHE: dict = {}


def _dipole_matrix(basis: StarkBasis, grid: GridSpec) -> np.ndarray:
    """Field-independent mu_z matrix (GHz per V/cm) between basis states."""
    key = (basis, grid)
    hit = _DIPOLE_MATRIX_CACHE.get(key)
    if hit is not None:
        return hit
    states = basis.states
    N = len(states)
    M = np.zeros((N, N))
    for i in range(N):
        si = states[i]
        for k in range(i + 1, N):
            sk = states[k]
            if abs(si.l - sk.l) != 1:
                continue
            mu = dipole_matrix_element(si, sk, 0, basis.defects, grid=grid)
            if mu != 0.0:
                M[i, k] = M[k, i] = mu * EA0_VCM_GHZ
    _DIPOLE_MATRIX_CACHE[key] = M
    return M


def build_hamiltonian(basis: StarkBasis, F: float, grid: GridSpec = GridSpec()) -> np.ndarray:
    """Stark Hamiltonian (GHz) at static field F (V/cm): defect energies on the
    diagonal, F * mu_z couplings (q = 0) off it."""
    if F < 0:
        raise ValueError(f"field must be non-negative, got {F}")
    H = F * _dipole_matrix(basis, grid)
    diag = np.array([binding_energy_GHz(s, basis.defects) for s in basis.states])
    H[np.diag_indices_from(H)] = diag
    return H


@dataclass(frozen=True)
class StarkMap:
    """Adiabatically tracked eigen-energies on a field grid.

    energies[f, k] is the energy (GHz) of the track that connects to
    labels[k] at zero field. warnings lists field points where the
    eigenvector-overlap assignment was ambiguous.
    """

    fields: np.ndarray
    energies: np.ndarray
    labels: tuple[RydbergState, ...]
    warnings: tuple[str, ...] = ()

    def track(self, state: RydbergState) -> np.ndarray:
        return self.energies[:, self.labels.index(state)]

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            fh.write("# Stark map: adiabatic level energies vs static field\n")
            mj = self.labels[0].mj_abs
            fh.write(f"# |m_j| block: {int(2 * mj)}/2; units: field V/cm, energy GHz\n")
            w = _csv.writer(fh)
            w.writerow(["field_Vcm", "level_index", "energy_GHz", "label"])
            for fi, F in enumerate(self.fields):
                for k, lab in enumerate(self.labels):
                    w.writerow([f"{F:.6g}", k, f"{self.energies[fi, k]:.9f}", lab.label(with_mj=False)])
        return path


def stark_map(
    basis: StarkBasis,
    fields: np.ndarray,
    grid: GridSpec = GridSpec(),
    ambiguity_tol: float = 1e-3,
) -> StarkMap:
    """Diagonalize at every field point and track levels by eigenvector overlap."""
    fields = np.asarray(fields, dtype=float)
    if fields.ndim != 1 or len(fields) < 1:
        raise ValueError("field grid must be a 1-d array")
    if np.any(np.diff(fields) <= 0):
        raise ValueError("field grid must be sorted strictly ascending")
    if fields[0] != 0.0:
        raise ValueError("field grid must start at 0")

    N = len(basis.states)
    energies = np.empty((len(fields), N))
    warnings: list[str] = []

    # F = 0: diagonal; tracks are the basis states ordered by energy
    e0 = np.array([binding_energy_GHz(s, basis.defects) for s in basis.states])
    order = np.argsort(e0, kind="stable")
    labels = tuple(basis.states[i] for i in order)
    energies[0] = e0[order]
    prev_vecs = np.zeros((N, N))
    prev_vecs[order, np.arange(N)] = 1.0

    for fi in range(1, len(fields)):
        H = build_hamiltonian(basis, fields[fi], grid)
        w, v = np.linalg.eigh(H)
        overlap = np.abs(prev_vecs.T @ v)
        row, col = linear_sum_assignment(-overlap)
        # row is 0..N-1 in order; col[k] = eigenvector index assigned to track k
        for k in range(N):
            best = overlap[k, col[k]]
            second = np.partition(overlap[k], -2)[-2]
            if best - second < ambiguity_tol:
                warnings.append(
                    f"ambiguous tracking at F={fields[fi]:.4g} V/cm for track "
                    f"{labels[k].label()} (overlaps {best:.4f}/{second:.4f})"
                )
        energies[fi] = w[col]
        prev_vecs = v[:, col]

    return StarkMap(fields, energies, labels, tuple(warnings))


@dataclass(frozen=True)
class PolarizabilityFit:
    """Quadratic Stark coefficient from E(F) = E0 - alpha F^2 / 2."""

    alpha: float  # MHz / (V/cm)^2
    zero_field_energy_GHz: float
    residual_rms_GHz: float


def polarizability(
    smap: StarkMap,
    label: RydbergState,
    fit_window: tuple[float, float] = (0.0, 0.45),
    rel_residual_tol: float = 0.02,
) -> PolarizabilityFit:
    """Least-squares fit of the tracked level to a pure quadratic Stark shift.

    Raises QuadraticFitError when the residual exceeds rel_residual_tol times
    the maximum shift (linearly shifting manifold states do)."""
    lo, hi = fit_window
    mask = (smap.fields >= lo) & (smap.fields <= hi)
    if mask.sum() < 3:
        raise ValueError("fit window must contain at least 3 field points")
    F = smap.fields[mask]
    E = smap.track(label)[mask]
    design = np.column_stack([np.ones_like(F), -0.5 * F**2])
    coef, *_ = np.linalg.lstsq(design, E, rcond=None)
    resid = E - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    shift = float(np.max(np.abs(E - E[0])))
    if shift > 0 and rms > rel_residual_tol * shift:
        raise QuadraticFitError(
            f"level {label.label()} is not quadratic in the window {fit_window}: "
            f"residual rms {rms:.3g} GHz vs shift {shift:.3g} GHz"
        )
    return PolarizabilityFit(
        alpha=float(coef[1] * 1e3), zero_field_energy_GHz=float(coef[0]), residual_rms_GHz=rms
    )


def perturbative_polarizability(basis: StarkBasis, state: RydbergState) -> float:
    """Second-order perturbation-theory polarizability (MHz/(V/cm)^2) from the
    same basis; cross-check for the Stark-map fit."""
    i = basis.index(state)
    e = np.array([binding_energy_GHz(s, basis.defects) for s in basis.states])
    alpha = 0.0
    for k, sk in enumerate(basis.states):
        if k == i or abs(sk.l - state.l) != 1:
            continue
        mu = dipole_matrix_element(state, sk, 0, basis.defects)
        if mu == 0.0:
            continue
        alpha += 2.0 * (mu * EA0_VCM_GHZ) ** 2 / (e[k] - e[i])
    return alpha * 1e3


def single_state_polarizability(
    state: RydbergState,
    defects: QuantumDefectTable | None = None,
    window_GHz: float = 150.0,
    n_range: tuple[int, int] = (35, 55),
    fields: np.ndarray | None = None,
) -> PolarizabilityFit:
    """Polarizability of one state from a dedicated Stark map around it."""
    defects = defects if defects is not None else rb85_defects()
    if fields is None:
        fields = np.linspace(0.0, 0.45, 10)
    basis = StarkBasis.around(state, defects, window_GHz, n_range)
    smap = stark_map(basis, fields)
    return polarizability(smap, state)


def compute_channels(
    defects: QuantumDefectTable | None = None,
    window_GHz: float = 150.0,
    n_range: tuple[int, int] = (35, 55),
    fields: np.ndarray | None = None,
) -> tuple[PairChannel, PairChannel]:
    """Channel constants (W0, alpha) from first principles: quantum-defect
    energies for W0, Stark-map polarizability differences for alpha."""
    defects = defects if defects is not None else rb85_defects()
    alphas = {
        s: single_state_polarizability(s, defects, window_GHz, n_range, fields).alpha
        for s in (STATE_41D, STATE_49S, STATE_42P, STATE_49P_A, STATE_49P_B)
    }
    channels = []
    for label in ("a", "b"):
        initial, final = _channel_states(label)
        W0 = (
            sum(binding_energy_GHz(s, defects) for s in final)
            - sum(binding_energy_GHz(s, defects) for s in initial)
        ) * 1e3
        alpha = sum(alphas[s] for s in final) - sum(alphas[s] for s in initial)
        channels.append(PairChannel(label, initial, final, W0, alpha))
    return tuple(channels)


def channels(mode: str = "computed", **kwargs) -> tuple[PairChannel, PairChannel]:
    """Both transfer channels; mode 'computed' (Stark map) or 'reference'."""
    if mode == "computed":
        return compute_channels(**kwargs)
    if mode == "reference":
        return reference_channels()
    raise ValueError(f"mode must be 'computed' or 'reference', got {mode!r}")


def pair_energy_difference(ch: PairChannel, F: float) -> float:
    """Two-atom energy gap W(F) = W0 - alpha F^2 / 2 in MHz (pp above sd)."""
    return ch.W0 - 0.5 * ch.alpha * np.asarray(F) ** 2


def resonance_field(ch: PairChannel) -> float:
    """Static field (V/cm) where the transfer is resonant: sqrt(2 W0 / alpha)."""
    return float(np.sqrt(2.0 * ch.W0 / ch.alpha))
