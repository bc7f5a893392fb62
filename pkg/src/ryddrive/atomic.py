"""Single-atom Rydberg structure.

Quantum-defect binding energies, radial wavefunctions u(r) = r R(r) from inward
Numerov integration on a sqrt(r) mesh, and radial / dipole matrix elements for
|n l j m_j> fine-structure states.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import IntegrationError
from .units import RYDBERG_INF_GHZ

L_LETTERS = "spdfghiklmnoqrtuvwxyz"


def _half_int(x: float) -> bool:
    return abs(2 * x - round(2 * x)) < 1e-9


@dataclass(frozen=True, order=True)
class RydbergState:
    """One fine-structure Rydberg state |n l j>, resolved to |m_j|."""

    n: int
    l: int
    j: float
    mj_abs: float = 0.5

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.l, (int, np.integer)) and 0 <= self.l < self.n):
            raise ValueError(f"l must satisfy 0 <= l < n, got l={self.l!r}, n={self.n}")
        if not _half_int(self.j) or abs(abs(self.j - self.l) - 0.5) > 1e-9 or self.j < 0.5:
            raise ValueError(f"j must be l +/- 1/2 (>= 1/2), got j={self.j} for l={self.l}")
        if not _half_int(self.mj_abs) or not (0.5 - 1e-9 <= self.mj_abs <= self.j + 1e-9):
            raise ValueError(f"|m_j| must be a half-integer in [1/2, j], got {self.mj_abs}")

    @property
    def l_letter(self) -> str:
        return L_LETTERS[self.l] if self.l < len(L_LETTERS) else f"(l={self.l})"

    def label(self, with_mj: bool = True) -> str:
        base = f"{self.n}{self.l_letter}{int(2 * self.j)}/2"
        if with_mj:
            return f"{base},{int(2 * self.mj_abs)}/2"
        return base

    def __str__(self) -> str:
        return self.label()

    @classmethod
    def from_label(cls, text: str) -> "RydbergState":
        """Parse '49p3/2' or '49p3/2,1/2' (the trailing fraction is |m_j|)."""
        s = text.strip().lower()
        mj = 0.5
        if "," in s:
            s, mj_s = s.split(",", 1)
            num, den = mj_s.split("/")
            mj = int(num) / int(den)
        i = 0
        while i < len(s) and s[i].isdigit():
            i += 1
        n = int(s[:i])
        letter = s[i]
        l = L_LETTERS.index(letter)
        num, den = s[i + 1 :].split("/")
        j = int(num) / int(den)
        return cls(n, l, j, mj)


@dataclass(frozen=True)
class QuantumDefectTable:
    """Modified Rydberg-Ritz coefficients delta0, delta2 per (l, j) series.

    delta(n) = delta0 + delta2 / (n - delta0)^2; series not listed are
    hydrogenic (delta = 0). `mu_ratio` is the reduced-mass ratio scaling the
    Rydberg constant for this species.
    """

    species: str
    mu_ratio: float
    entries: tuple[tuple[int, float, float, float], ...]  # (l, j, delta0, delta2)

    def __post_init__(self):
        table = {(l, j): (d0, d2) for l, j, d0, d2 in self.entries}
        object.__setattr__(self, "_table", table)

    def coefficients(self, l: int, j: float) -> tuple[float, float] | None:
        return self._table.get((l, j))

    def defect(self, n: int, l: int, j: float) -> float:
        coeff = self.coefficients(l, j)
        if coeff is None:
            return 0.0
        d0, d2 = coeff
        return d0 + d2 / (n - d0) ** 2

    @property
    def rydberg_GHz(self) -> float:
        return RYDBERG_INF_GHZ * self.mu_ratio

    @classmethod
    def from_file(cls, path: str | Path) -> "QuantumDefectTable":
        species = "?"
        mu_ratio = 1.0
        entries = []
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "species":
                species = parts[1]
            elif parts[0] == "reduced_mass_ratio":
                mu_ratio = float(parts[1])
            elif parts[0] == "defect":
                l, j, d0, d2 = int(parts[1]), float(parts[2]), float(parts[3]), float(parts[4])
                entries.append((l, j, d0, d2))
            else:
                raise ValueError(f"unknown directive in defect table: {parts[0]!r}")
        return cls(species, mu_ratio, tuple(entries))

    @classmethod
    def hydrogen(cls) -> "QuantumDefectTable":
        """Zero-defect table with infinite nuclear mass (validation against analytic H)."""
        return cls("H", 1.0, ())


_RB85: QuantumDefectTable | None = None


def rb85_defects() -> QuantumDefectTable:
    """The packaged Rb-85 defect table (see data/rb85_quantum_defects.txt)."""
    global _RB85
    if _RB85 is None:
        ref = resources.files("ryddrive").joinpath("data/rb85_quantum_defects.txt")
        with resources.as_file(ref) as path:
            _RB85 = QuantumDefectTable.from_file(path)
    return _RB85


def binding_energy(state: RydbergState, defects: QuantumDefectTable) -> float:
    """Quantum-defect binding energy in Hartree (negative).

    -Ry_eff / (n - delta)^2 with the reduced-mass Rydberg constant of the table's
    species. Series without a defect entry are hydrogenic.
    """
    delta = defects.defect(state.n, state.l, state.j)
    nstar = state.n - delta
    if nstar <= 0:
        raise ValueError(f"effective quantum number {nstar} <= 0 for {state}")
    return -0.5 * defects.mu_ratio / nstar**2


def binding_energy_GHz(state: RydbergState, defects: QuantumDefectTable) -> float:
    delta = defects.defect(state.n, state.l, state.j)
    return -defects.rydberg_GHz / (state.n - delta) ** 2


@dataclass(frozen=True)
class GridSpec:
    """Radial mesh, uniform in sqrt(r): x = sqrt(r), x_k = sqrt(r_min) + k*step.

    Below r_core the quantum-defect solution has no physical meaning (core
    penetration); the integrated wavefunction is zeroed there. Set r_core = 0
    for true hydrogenic states (validation against analytic hydrogen).
    """

    r_min: float = 0.05  # bohr
    step: float = 0.01   # sqrt(bohr)
    r_max: float | None = None  # default 2 n (n + 15)
    r_core: float = 2.1  # bohr, ~ (core polarizability)^(1/3) for Rb

    def outer_bound(self, n: int) -> float:
        return self.r_max if self.r_max is not None else 2.0 * n * (n + 15.0)


@dataclass(frozen=True)
class RadialWavefunction:
    """u(r) = r R(r) samples on an ascending radial grid (atomic units)."""

    grid: np.ndarray
    values: np.ndarray
    state: RydbergState

    def norm(self) -> float:
        return float(np.trapezoid(self.values**2, self.grid))


def radial_wavefunction(
    state: RydbergState, energy: float, grid: GridSpec = GridSpec()
) -> RadialWavefunction:
    """Inward Numerov integration of the radial equation at the given energy (Hartree).

    Coulomb potential plus centrifugal term on a sqrt(r) mesh; integration runs
    from outside the outer turning point toward r_min, cutting the divergent
    inner tail for non-integer effective quantum numbers. Result is normalized
    to int u^2 dr = 1, with the outermost lobe positive.
    """
    if energy >= 0:
        raise ValueError(f"bound-state energy must be negative, got {energy}")
    l = state.l
    r_out = grid.outer_bound(state.n)
    x0 = math.sqrt(grid.r_min)
    npts = int((math.sqrt(r_out) - x0) / grid.step)
    if npts < 10:
        raise ValueError("radial grid has too few points")
    xs = x0 + grid.step * np.arange(npts)
    r = xs * xs
    # y(x) = u(r) / sqrt(x) obeys y'' = -k(x) y on the sqrt mesh
    k = -3.0 / (4.0 * r) + 4.0 * r * (2.0 * (energy + 1.0 / r) - l * (l + 1) / r**2)
    c = grid.step * grid.step / 12.0
    fac = 1.0 + c * k
    y = _numerov_inward(k, fac, c, xs)
    u = y * np.sqrt(xs)
    if grid.r_core > 0:
        u[r < grid.r_core] = 0.0
    imax = int(np.argmax(np.abs(u)))
    if u[imax] < 0:
        u = -u
    norm = np.trapezoid(u * u, r)
    if not np.isfinite(norm) or norm <= 0:
        raise IntegrationError(f"normalization failed for {state} (norm={norm})")
    u = u / math.sqrt(norm)
    return RadialWavefunction(grid=r, values=u, state=state)


def _numerov_inward(k: np.ndarray, fac: np.ndarray, c: float, xs: np.ndarray) -> np.ndarray:
    """Inward Numerov sweep with divergence cut near the core.

    Tracks the running maximum of |u|; once the amplitude has been decaying for
    a while (inside the inner turning point) any renewed growth marks the
    divergent irregular solution, which is zeroed back to its local minimum.
    """
    npts = len(k)
    y = np.zeros(npts)
    y[npts - 1] = 1e-12
    y[npts - 2] = 2e-12
    sqrt_xs = np.sqrt(xs)
    max_u = 0.0
    quiet = 0
    checkpoint = -1
    divergence = -1
    for i in range(npts - 3, -1, -1):
        y[i] = (
            2.0 * (1.0 - 5.0 * c * k[i + 1]) * y[i + 1] - fac[i + 2] * y[i + 2]
        ) / fac[i]
        if not math.isfinite(y[i]):
            raise IntegrationError("Numerov integration diverged to non-finite values")
        u_abs = abs(y[i]) * sqrt_xs[i]
        if checkpoint < 0:
            if u_abs > max_u:
                max_u = u_abs
                quiet = 0
            else:
                quiet += 1
                if quiet > 50:
                    checkpoint = i
        elif u_abs > max_u:
            divergence = i
            break
    if divergence >= 0:
        u_abs_all = np.abs(y) * sqrt_xs
        i = divergence
        while i + 1 < checkpoint and u_abs_all[i] > u_abs_all[i + 1]:
            i += 1
        y[: i + 1] = 0.0
    return y


# wavefunction / radial-element caches: read-through, keyed on immutable inputs
_WF_CACHE: dict = {}
_RME_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def _cached_wavefunction(
    state: RydbergState, defects: QuantumDefectTable, grid: GridSpec
) -> RadialWavefunction:
    key = (state.n, state.l, state.j, defects, grid)
    with _CACHE_LOCK:
        hit = _WF_CACHE.get(key)
    if hit is not None:
        return hit
    wf = radial_wavefunction(state, binding_energy(state, defects), grid)
    with _CACHE_LOCK:
        _WF_CACHE[key] = wf
    return wf


def clear_caches() -> None:
    with _CACHE_LOCK:
        _WF_CACHE.clear()
        _RME_CACHE.clear()


def radial_matrix_element(
    s1: RydbergState,
    s2: RydbergState,
    defects: QuantumDefectTable | None = None,
    grid: GridSpec = GridSpec(),
) -> float:
    """<u1| r |u2> by quadrature on the common part of the radial grids (a0)."""
    defects = defects if defects is not None else rb85_defects()
    k1 = (s1.n, s1.l, s1.j)
    k2 = (s2.n, s2.l, s2.j)
    key = (min(k1, k2), max(k1, k2), defects, grid)
    with _CACHE_LOCK:
        hit = _RME_CACHE.get(key)
    if hit is not None:
        return hit
    w1 = _cached_wavefunction(s1, defects, grid)
    w2 = _cached_wavefunction(s2, defects, grid)
    m = min(len(w1.grid), len(w2.grid))  # same x0/step, so grids align on the prefix
    val = float(np.trapezoid(w1.values[:m] * w2.values[:m] * w1.grid[:m], w1.grid[:m]))
    with _CACHE_LOCK:
        _RME_CACHE[key] = val
    return val


def _spin_half_cg(l: int, j: float, mj: float, ms: float) -> float:
    """<l, ml=mj-ms; 1/2, ms | j, mj> for j = l +/- 1/2 (Condon-Shortley)."""
    if abs(mj - ms) > l + 1e-9:
        return 0.0
    if abs(j - (l + 0.5)) < 1e-9:
        if ms > 0:
            return math.sqrt((l + mj + 0.5) / (2 * l + 1))
        return math.sqrt((l - mj + 0.5) / (2 * l + 1))
    if l == 0:
        return 0.0
    if ms > 0:
        return -math.sqrt((l - mj + 0.5) / (2 * l + 1))
    return math.sqrt((l + mj + 0.5) / (2 * l + 1))


def _c1_element(l2: int, m2: float, l1: int, m1: float, q: int) -> float:
    """<l2 m2| C^1_q |l1 m1> for l2 = l1 +/- 1 (spherical-harmonic integrals)."""
    if abs(m2 - (m1 + q)) > 1e-9:
        return 0.0
    l, m = l1, m1
    if l2 == l1 + 1:
        if q == 0:
            return math.sqrt(((l + 1) ** 2 - m**2) / ((2 * l + 1) * (2 * l + 3)))
        if q == 1:
            return math.sqrt((l + m + 1) * (l + m + 2) / (2 * (2 * l + 1) * (2 * l + 3)))
        return math.sqrt((l - m + 1) * (l - m + 2) / (2 * (2 * l + 1) * (2 * l + 3)))
    if l2 == l1 - 1:
        if q == 0:
            return math.sqrt((l**2 - m**2) / ((2 * l - 1) * (2 * l + 1)))
        if q == 1:
            return -math.sqrt((l - m) * (l - m - 1) / (2 * (2 * l - 1) * (2 * l + 1)))
        return -math.sqrt((l + m) * (l + m - 1) / (2 * (2 * l - 1) * (2 * l + 1)))
    return 0.0


def angular_dipole_factor(
    l1: int, j1: float, mj1: float, l2: int, j2: float, mj2: float, q: int
) -> float:
    """<l2 j2 mj2| C^1_q |l1 j1 mj1> via the spin-1/2 decomposition of both states."""
    if abs(mj2 - (mj1 + q)) > 1e-9 or abs(l2 - l1) != 1:
        return 0.0
    total = 0.0
    for ms in (-0.5, 0.5):
        ml1 = mj1 - ms
        ml2 = mj2 - ms
        if abs(ml1) > l1 + 1e-9 or abs(ml2) > l2 + 1e-9:
            continue
        total += (
            _spin_half_cg(l1, j1, mj1, ms)
            * _spin_half_cg(l2, j2, mj2, ms)
            * _c1_element(l2, ml2, l1, ml1, q)
        )
    return total


def dipole_matrix_element(
    s1: RydbergState,
    s2: RydbergState,
    q: int,
    defects: QuantumDefectTable | None = None,
    mj_sign: int = +1,
    grid: GridSpec = GridSpec(),
) -> float:
    """Dipole matrix element <s2, mj1+q| r C^1_q |s1, mj1> in a0*e.

    mj1 = mj_sign * s1.mj_abs selects the signed initial sublevel; the final
    sublevel mj1 + q must match s2.mj_abs in magnitude, otherwise (and for
    |delta l| != 1) the element is zero by the angular selection rules.
    """
    if q not in (-1, 0, 1):
        raise ValueError(f"polarization index q must be in {{-1, 0, +1}}, got {q}")
    if mj_sign not in (-1, 1):
        raise ValueError("mj_sign must be +1 or -1")
    if abs(s1.l - s2.l) != 1:
        return 0.0
    mj1 = mj_sign * s1.mj_abs
    mj2 = mj1 + q
    if abs(abs(mj2) - s2.mj_abs) > 1e-9 or abs(mj2) > s2.j + 1e-9:
        return 0.0
    ang = angular_dipole_factor(s1.l, s1.j, mj1, s2.l, s2.j, mj2, q)
    if ang == 0.0:
        return 0.0
    return radial_matrix_element(s1, s2, defects, grid) * ang
