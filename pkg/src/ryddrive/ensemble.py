"""Monte-Carlo model of the two cigar-shaped Rydberg volumes.

Samples atom positions, evolves each 49s atom with its strongest-coupled 41d
partner at a fixed static field, scans the field across both resonances, and
fits the resulting lineshape with a Lorentzian doublet.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.optimize import curve_fit

from .atomic import QuantumDefectTable, rb85_defects
from .errors import FitError
from .pairint import channel_dipoles
from .rfdyn import SpectrumResult
from .stark import PairChannel, pair_energy_difference
from .units import HARTREE_MHZ, UM_TO_BOHR

FWHM_TO_SIGMA = 1.0 / np.sqrt(8.0 * np.log(2.0))


@dataclass(frozen=True)
class EnsembleConfig:
    """Geometry and sampling of the two Rydberg volumes.

    The volumes are separated along the field (z) axis and extend along the
    laser (x) axis; transverse profiles are Gaussian with the given FWHM
    diameters. Lengths in micrometres, times in microseconds.
    """

    separation: float = 25.0
    diameter_s: float = 11.6
    diameter_d: float = 16.3
    length: float = 500.0
    n_atoms: tuple[int, int] = (20, 20)  # (N_s, N_d) per shot
    t_int: float = 20.0
    n_shots: int = 2000
    seed: int = 0
    field_noise: float = 0.0  # per-shot rms static-field jitter, V/cm (0 = off)
    pairing: str = "strongest"  # or "all-pairs" (incoherent sum)

    def __post_init__(self):
        if min(self.separation, self.diameter_s, self.diameter_d, self.length) <= 0:
            raise ValueError("all lengths must be positive")
        if min(self.n_atoms) < 1 or self.n_shots < 1:
            raise ValueError("atom and shot counts must be >= 1")
        if self.t_int <= 0:
            raise ValueError("interaction time must be positive")
        if self.pairing not in ("strongest", "all-pairs"):
            raise ValueError(f"pairing must be 'strongest' or 'all-pairs', got {self.pairing!r}")


def _shot_rng(cfg: EnsembleConfig, shot: int) -> np.random.Generator:
    # counter-based per-shot streams: deterministic regardless of execution order
    return np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(shot,)))


def sample_atoms(cfg: EnsembleConfig, shot: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Positions (um) of the s- and d-atoms for one shot: arrays (N_s, 3), (N_d, 3).

    Uniform along x over `length`, Gaussian transverse (y, z) with the FWHM
    diameters; the d volume is offset by `separation` along z.
    """
    rng = _shot_rng(cfg, shot)
    n_s, n_d = cfg.n_atoms
    sig_s = cfg.diameter_s * FWHM_TO_SIGMA
    sig_d = cfg.diameter_d * FWHM_TO_SIGMA
    s_pos = np.column_stack([
        rng.uniform(-0.5 * cfg.length, 0.5 * cfg.length, n_s),
        rng.normal(0.0, sig_s, n_s),
        rng.normal(0.0, sig_s, n_s),
    ])
    d_pos = np.column_stack([
        rng.uniform(-0.5 * cfg.length, 0.5 * cfg.length, n_d),
        rng.normal(0.0, sig_d, n_d),
        rng.normal(cfg.separation, sig_d, n_d),
    ])
    return s_pos, d_pos


def _pair_couplings_MHz(
    r_vec_um: np.ndarray, mu_d: np.ndarray, mu_s: np.ndarray
) -> np.ndarray:
    """|V| (MHz) for an array of separation vectors (..., 3) and fixed dipole vectors."""
    r_bohr = r_vec_um * UM_TO_BOHR
    R = np.linalg.norm(r_bohr, axis=-1)
    rhat = r_bohr / R[..., None]
    dot12 = mu_d @ mu_s
    d1 = rhat @ mu_d
    d2 = rhat @ mu_s
    return np.abs((dot12 - 3.0 * d1 * d2) / R**3) * HARTREE_MHZ


def _transfer_probability(
    Va: np.ndarray, Vb: np.ndarray, Wa: float, Wb: float, t: float
) -> np.ndarray:
    """pp population after time t for constant couplings/detunings (batched 3x3)."""
    n = Va.shape[0]
    H = np.zeros((n, 3, 3))
    H[:, 0, 1] = H[:, 1, 0] = Va
    H[:, 0, 2] = H[:, 2, 0] = Vb
    H[:, 1, 1] = Wa
    H[:, 2, 2] = Wb
    w, v = np.linalg.eigh(H)
    phase = np.exp(-2j * np.pi * w * t)  # w in MHz, t in us
    # amplitude <k| U |0> = sum_m v[k,m] e^{-i 2pi w_m t} v[0,m]
    amp = np.einsum("nkm,nm,nm->nk", v, phase, v[:, 0, :])
    return np.abs(amp[:, 1]) ** 2 + np.abs(amp[:, 2]) ** 2


def scan_static_field(
    cfg: EnsembleConfig,
    channels: Sequence[PairChannel],
    field_grid: np.ndarray,
    defects: QuantumDefectTable | None = None,
) -> SpectrumResult:
    """49p fraction vs static field, Monte-Carlo averaged over the volumes.

    Per shot each s-atom evolves with its strongest-coupled d-atom (or, in
    'all-pairs' mode, sums the pairwise transfer probabilities, clipped at 1)
    for t_int at every field value; the fraction is averaged over shots with
    its standard error.
    """
    defects = defects if defects is not None else rb85_defects()
    ch_a, ch_b = channels
    field_grid = np.asarray(field_grid, dtype=float)
    mu_a = [d.as_array() for d in channel_dipoles(ch_a, defects)]
    mu_b = [d.as_array() for d in channel_dipoles(ch_b, defects)]

    n_s = cfg.n_atoms[0]
    frac = np.zeros((cfg.n_shots, len(field_grid)))
    for shot in range(cfg.n_shots):
        s_pos, d_pos = sample_atoms(cfg, shot)
        rvec = d_pos[None, :, :] - s_pos[:, None, :]  # (N_s, N_d, 3)
        Va = _pair_couplings_MHz(rvec, *mu_a)
        Vb = _pair_couplings_MHz(rvec, *mu_b)
        dF = 0.0
        if cfg.field_noise > 0:
            dF = _shot_rng(cfg, shot).normal(0.0, cfg.field_noise)
        if cfg.pairing == "strongest":
            best = np.argmax(Va, axis=1)
            Va_s = Va[np.arange(n_s), best]
            Vb_s = Vb[np.arange(n_s), best]
            for fi, F in enumerate(field_grid):
                Wa = float(pair_energy_difference(ch_a, F + dF))
                Wb = float(pair_energy_difference(ch_b, F + dF))
                p = _transfer_probability(Va_s, Vb_s, Wa, Wb, cfg.t_int)
                frac[shot, fi] = float(np.mean(p))
        else:
            for fi, F in enumerate(field_grid):
                Wa = float(pair_energy_difference(ch_a, F + dF))
                Wb = float(pair_energy_difference(ch_b, F + dF))
                p = _transfer_probability(Va.ravel(), Vb.ravel(), Wa, Wb, cfg.t_int)
                p_s = np.minimum(p.reshape(n_s, -1).sum(axis=1), 1.0)
                frac[shot, fi] = float(np.mean(p_s))
    y = frac.mean(axis=0)
    y_err = frac.std(axis=0, ddof=1) / np.sqrt(cfg.n_shots) if cfg.n_shots > 1 else np.zeros_like(y)
    return SpectrumResult(x=field_grid, y=y, y_err=y_err)


@dataclass(frozen=True)
class PeakFit:
    center: float
    fwhm: float
    amplitude: float


@dataclass(frozen=True)
class FitResult:
    """Lorentzian-doublet fit: two (center, FWHM, amplitude) triples + offset."""

    peaks: tuple[PeakFit, PeakFit]
    offset: float
    covariance: np.ndarray
    residual_rms: float

    def report(self) -> str:
        lines = ["Lorentzian doublet fit"]
        err = np.sqrt(np.diag(self.covariance))
        for i, p in enumerate(self.peaks):
            e_c, e_w, e_a = err[3 * i : 3 * i + 3]
            lines.append(
                f"  peak {i + 1}: center = {p.center:.6g} +/- {e_c:.2g}, "
                f"FWHM = {p.fwhm:.4g} +/- {e_w:.2g}, amplitude = {p.amplitude:.4g} +/- {e_a:.2g}"
            )
        lines.append(f"  offset = {self.offset:.4g} +/- {err[6]:.2g}")
        lines.append(f"  residual rms = {self.residual_rms:.3g}")
        return "\n".join(lines)


def _doublet(x, c1, w1, a1, c2, w2, a2, off):
    g1 = (0.5 * w1) ** 2
    g2 = (0.5 * w2) ** 2
    return a1 * g1 / ((x - c1) ** 2 + g1) + a2 * g2 / ((x - c2) ** 2 + g2) + off


def _two_largest_maxima(x: np.ndarray, y: np.ndarray) -> tuple[int, int]:
    interior = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])) + 1
    if len(interior) < 2:
        raise FitError("spectrum does not contain two discernible peaks")
    top = interior[np.argsort(y[interior])][-2:]
    return int(top.min()), int(top.max())


def fit_lorentzian_doublet(spec: SpectrumResult) -> FitResult:
    """Nonlinear least squares of two independent Lorentzians plus an offset.

    Initial guesses come from the two largest local maxima. Raises FitError
    when the peaks are indiscernible (amplitude below 3x the noise scale) or
    the fit does not converge.
    """
    x = np.asarray(spec.x, dtype=float)
    y = np.asarray(spec.y, dtype=float)
    i1, i2 = _two_largest_maxima(x, y)
    off0 = float(np.min(y))
    noise = float(np.median(spec.y_err)) if np.any(spec.y_err > 0) else 0.0
    for i in (i1, i2):
        if noise > 0 and (y[i] - off0) < 3.0 * noise:
            raise FitError(
                f"peak at x={x[i]:.4g} is below 3x the noise level ({y[i] - off0:.3g} vs {noise:.3g})"
            )
    span = x[-1] - x[0]
    p0 = [x[i1], span / 10, y[i1] - off0, x[i2], span / 10, y[i2] - off0, off0]
    sigma = spec.y_err if np.all(spec.y_err > 0) else None
    try:
        popt, pcov = curve_fit(
            _doublet, x, y, p0=p0, sigma=sigma, absolute_sigma=sigma is not None, maxfev=20000
        )
    except RuntimeError as exc:
        raise FitError(f"doublet fit did not converge: {exc}") from exc
    resid = y - _doublet(x, *popt)
    peaks = sorted(
        [PeakFit(popt[0], abs(popt[1]), popt[2]), PeakFit(popt[3], abs(popt[4]), popt[5])],
        key=lambda p: p.center,
    )
    return FitResult(
        peaks=(peaks[0], peaks[1]),
        offset=float(popt[6]),
        covariance=pcov,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )


def width_to_frequency(width_mVcm: float, ch: PairChannel, F_center: float) -> float:
    """Convert a field width (mV/cm) at F_center (V/cm) to kHz via the local
    slope |dW/dF| = alpha F of the pair gap."""
    if F_center <= 0:
        raise ValueError("F_center must be positive")
    return ch.alpha * F_center * width_mVcm
