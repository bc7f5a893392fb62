"""Two-atom dynamics under static + rf fields.

Effective field, ac-Stark shift, N-photon resonance positions, Schrödinger
integration of the three-level {sd, pp_a, pp_b} system for arbitrary field
programs, rf spectra, and the spectroscopic inversion back to (W0, alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .errors import FitError, IntegrationError
from .stark import PairChannel, pair_energy_difference

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FieldProgram:
    """Electric-field program F(t) = F_static(t) + F_rf sin(2 pi omega t).

    The static part is F_S, optionally overridden by a piecewise-constant
    schedule `segments` of (t_start_us, level_Vcm) entries; level changes ramp
    linearly at the given slew rate (V/cm per us). omega is an ordinary
    frequency in MHz.
    """

    F_S: float = 0.0
    F_rf: float = 0.0
    omega: float = 0.0
    segments: tuple[tuple[float, float], ...] = ()
    slew: float = 76.0

    def __post_init__(self):
        if self.F_S < 0 or self.F_rf < 0:
            raise ValueError("field amplitudes must be non-negative")
        if self.F_rf > 0 and self.omega <= 0:
            raise ValueError("rf amplitude given but omega <= 0")
        if self.slew <= 0:
            raise ValueError("slew rate must be positive")
        times = [t for t, _ in self.segments]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("segments must be time-sorted and non-overlapping")

    def static_field(self, t: float) -> float:
        """Static part at time t (us), with segment ramps at the slew rate."""
        level = self.F_S
        for t_start, value in self.segments:
            if t < t_start:
                break
            ramp = abs(value - level) / self.slew
            if t < t_start + ramp:
                return level + math.copysign(self.slew, value - level) * (t - t_start)
            level = value
        return level

    def total_field(self, t: float) -> float:
        f = self.static_field(t)
        if self.F_rf > 0:
            f = f + self.F_rf * np.sin(TWO_PI * self.omega * t)
        return f

    def max_static(self) -> float:
        return max([self.F_S] + [v for _, v in self.segments]) if self.segments else self.F_S


def effective_field(F_S: float, F_rf: float) -> float:
    """Static field with the same time-averaged quadratic Stark shift as the
    static + rf combination: sqrt(F_S^2 + F_rf^2 / 2)."""
    if F_S < 0 or F_rf < 0:
        raise ValueError("fields must be non-negative")
    return float(np.sqrt(F_S**2 + 0.5 * F_rf**2))


def ac_stark_shift(alpha: float, F_rf: float) -> float:
    """Resonance displacement alpha F_rf^2 / 4 (MHz) caused by the rf amplitude."""
    return 0.25 * alpha * F_rf**2


def detuning_at_effective_field(ch: PairChannel, F_S: float, F_rf: float) -> float:
    """Time-averaged pair gap W = W0 - alpha F_eff^2 / 2 in MHz."""
    return float(pair_energy_difference(ch, effective_field(F_S, F_rf)))


def resonance_frequencies(
    ch: PairChannel, F_S: float, F_rf: float, N_max: int = 5
) -> list[tuple[int, float]]:
    """rf frequencies (MHz) at which N photons bridge the averaged pair gap.

    For W(F_eff) > 0 returns (N, W/N) for N = 1..N_max; for W < 0 only the
    -1-photon branch (emission side) exists and (-1, |W|) is returned.
    """
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    W = detuning_at_effective_field(ch, F_S, F_rf)
    if W < 0:
        return [(-1, -W)]
    return [(N, W / N) for N in range(1, N_max + 1)]


def instantaneous_detuning(ch: PairChannel, prog: FieldProgram, t: float) -> float:
    """Pair gap W(t) = W0 - alpha F(t)^2 / 2 (MHz) at the instantaneous field."""
    if np.any(np.asarray(t) < 0):
        raise ValueError("time must be non-negative")
    F = prog.static_field(t) if np.isscalar(t) else np.array([prog.static_field(x) for x in np.asarray(t)])
    if prog.F_rf > 0:
        F = F + prog.F_rf * np.sin(TWO_PI * prog.omega * np.asarray(t))
    return ch.W0 - 0.5 * ch.alpha * F**2


@dataclass(frozen=True)
class DynamicsResult:
    """Populations of {sd, pp_a, pp_b} on a uniform time grid (us)."""

    times: np.ndarray
    populations: np.ndarray  # shape (len(times), 3): p_sd, p_ppa, p_ppb

    @property
    def p_sd(self) -> np.ndarray:
        return self.populations[:, 0]

    @property
    def p_ppa(self) -> np.ndarray:
        return self.populations[:, 1]

    @property
    def p_ppb(self) -> np.ndarray:
        return self.populations[:, 2]

    @property
    def p_fraction(self) -> np.ndarray:
        """49p fraction: total pp population."""
        return self.populations[:, 1] + self.populations[:, 2]

    @property
    def final_p_fraction(self) -> float:
        return float(self.p_fraction[-1])


def simulate_dynamics(
    channels: Sequence[PairChannel],
    couplings: Sequence[float],
    prog: FieldProgram,
    duration: float,
    n_samples: int = 401,
    background_rate: float = 0.0,
    rtol: float = 1e-8,
) -> DynamicsResult:
    """Integrate the three-level Schrödinger equation for the field program.

    The sd amplitude couples to one pp amplitude per channel with strength
    V_k (MHz); diagonal energies follow the instantaneous detunings W_k(t).
    Amplitudes are propagated in the interaction picture: each pp amplitude
    carries the accumulated detuning phase phi_k(t) = 2 pi int W_k dt', which
    the integrator accumulates alongside the amplitudes, so large gaps do not
    stiffen the equations. Optional incoherent background transfer moves
    population sd -> pp at `background_rate` (1/us), modelling the black-body
    contribution as linear growth.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    if len(channels) != len(couplings):
        raise ValueError("need one coupling per channel")
    if len(channels) != 2:
        raise ValueError("simulate_dynamics propagates exactly two channels (use V=0 to disable one)")
    ch_a, ch_b = channels
    va = TWO_PI * abs(float(couplings[0]))
    vb = TWO_PI * abs(float(couplings[1]))
    w0a, haa = ch_a.W0, 0.5 * ch_a.alpha
    w0b, hab = ch_b.W0, 0.5 * ch_b.alpha
    f_rf = prog.F_rf
    om_ang = TWO_PI * prog.omega
    static = prog.static_field if prog.segments else None
    f_s = prog.F_S
    sin = math.sin
    cos = math.cos

    def rhs(t, y):
        # y = [Re c_sd, Im c_sd, Re c_a, Im c_a, Re c_b, Im c_b, phi_a, phi_b]
        F = static(t) if static is not None else f_s
        if f_rf > 0.0:
            F += f_rf * sin(om_ang * t)
        F2 = F * F
        # rotate the pp amplitudes by e^{+/- i phi_k}: pure float arithmetic
        cA = cos(y[6])
        sA = sin(y[6])
        cB = cos(y[7])
        sB = sin(y[7])
        pa = cA * y[2] + sA * y[3]   # Re(e^{-i phi_a} c_a)
        qa = cA * y[3] - sA * y[2]   # Im
        pb = cB * y[4] + sB * y[5]
        qb = cB * y[5] - sB * y[4]
        ra = cA * y[0] - sA * y[1]   # Re(e^{+i phi_a} c_sd)
        ua = cA * y[1] + sA * y[0]   # Im
        rb = cB * y[0] - sB * y[1]
        ub = cB * y[1] + sB * y[0]
        return (
            va * qa + vb * qb,
            -(va * pa + vb * pb),
            va * ua,
            -va * ra,
            vb * ub,
            -vb * rb,
            TWO_PI * (w0a - haa * F2),
            TWO_PI * (w0b - hab * F2),
        )

    y0 = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    times = np.linspace(0.0, duration, n_samples)
    sol = solve_ivp(
        rhs, (0.0, duration), y0,
        method="DOP853", rtol=rtol, atol=rtol * 1e-2,
        dense_output=True,
    )
    if not sol.success:
        raise IntegrationError(f"dynamics integration failed: {sol.message}")
    ys = sol.sol(times)
    pops = np.empty((n_samples, 3))
    pops[:, 0] = ys[0] ** 2 + ys[1] ** 2
    pops[:, 1] = ys[2] ** 2 + ys[3] ** 2
    pops[:, 2] = ys[4] ** 2 + ys[5] ** 2
    if background_rate > 0.0:
        transfer = np.minimum(background_rate * times, pops[:, 0])
        pops[:, 0] -= transfer
        pops[:, 1] += 0.5 * transfer
        pops[:, 2] += 0.5 * transfer
    return DynamicsResult(times=times, populations=pops)


def switching_program(
    F_on: float,
    F_off: float = 0.0,
    dwell: float = 2.5,
    duration: float = 20.0,
    slew: float = 76.0,
) -> FieldProgram:
    """Diabatic switching schedule: F alternates F_on / F_off with equal dwells."""
    segments = []
    t = 0.0
    level_on = True
    while t < duration:
        segments.append((t, F_on if level_on else F_off))
        level_on = not level_on
        t += dwell
    return FieldProgram(F_S=F_off, segments=tuple(segments), slew=slew)


@dataclass(frozen=True)
class SpectrumResult:
    """Transfer fraction vs a scan variable (rf frequency MHz or field V/cm)."""

    x: np.ndarray
    y: np.ndarray
    y_err: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x)
        y = np.asarray(self.y)
        if np.any(np.diff(x) <= 0):
            raise ValueError("scan grid must be strictly increasing")
        if np.any((y < -1e-9) | (y > 1.0 + 1e-9)):
            raise ValueError("fractions must lie in [0, 1]")


def floquet_spectrum(
    channels: Sequence[PairChannel],
    couplings: Sequence[float],
    F_S: float,
    F_rf: float,
    omega_grid: np.ndarray,
    duration: float = 20.0,
    rtol: float = 1e-8,
    background_rate: float = 0.0,
) -> SpectrumResult:
    """Transfer fraction after `duration` vs rf frequency (multi-photon spectrum).

    Runs simulate_dynamics per grid point; valid in the averaged picture when
    omega is large against the quantum beat.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    y = np.empty_like(omega_grid)
    for i, om in enumerate(omega_grid):
        prog = FieldProgram(F_S=F_S, F_rf=F_rf, omega=float(om))
        res = simulate_dynamics(
            channels, couplings, prog, duration,
            n_samples=2, background_rate=background_rate, rtol=rtol,
        )
        y[i] = res.final_p_fraction
    return SpectrumResult(x=omega_grid, y=y, y_err=np.zeros_like(y))


@dataclass(frozen=True)
class SpectroscopyFit:
    """(W0, alpha_a, alpha_b) recovered from rf resonance positions."""

    W0: float
    W0_err: float
    alpha: dict[str, float]
    alpha_err: dict[str, float]
    residual_rms: float


def predicted_resonance(W0: float, alpha: float, F_S: float, F_rf: float, N: int) -> float:
    """rf frequency of the N-photon resonance from the channel constants (MHz)."""
    if N == 0:
        raise ValueError("photon number must be non-zero")
    return (W0 - 0.5 * alpha * (F_S**2 + 0.5 * F_rf**2)) / N


def extract_spectroscopy(
    resonance_data: Sequence[tuple[float, float, float, int, str]],
) -> SpectroscopyFit:
    """Invert N = +/-1 resonance positions to (W0, alpha_a, alpha_b).

    Each datum is (F_S V/cm, F_rf V/cm, observed omega MHz, N in {+1, -1},
    channel 'a' or 'b'). Linear least squares on N*omega = W0 - alpha_c
    F_eff^2 / 2 with a shared W0; parameter uncertainties from the residual
    variance. Raises FitError for rank-deficient designs (too few distinct
    effective fields per channel).
    """
    data = list(resonance_data)
    labels = sorted({d[4] for d in data})
    for lab in labels:
        if sum(1 for d in data if d[4] == lab) < 3:
            raise FitError(f"need >= 3 data points for channel {lab!r}")
    cols = {lab: 1 + i for i, lab in enumerate(labels)}
    X = np.zeros((len(data), 1 + len(labels)))
    b = np.empty(len(data))
    for i, (F_S, F_rf, omega, N, lab) in enumerate(data):
        if N not in (-1, +1):
            raise ValueError("spectroscopy inversion uses the +/- 1 photon branches only")
        X[i, 0] = 1.0
        X[i, cols[lab]] = -0.5 * effective_field(F_S, F_rf) ** 2
        b[i] = N * omega
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise FitError("design is rank-deficient: data do not span distinct effective fields")
    coef, rss, *_ = np.linalg.lstsq(X, b, rcond=None)
    resid = b - X @ coef
    dof = max(len(data) - X.shape[1], 1)
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    err = np.sqrt(np.diag(cov))
    return SpectroscopyFit(
        W0=float(coef[0]),
        W0_err=float(err[0]),
        alpha={lab: float(coef[cols[lab]]) for lab in labels},
        alpha_err={lab: float(err[cols[lab]]) for lab in labels},
        residual_rms=float(np.sqrt(np.mean(resid**2))),
    )
