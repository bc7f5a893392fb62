"""Dipole-dipole coupling between the two atoms.

Geometry-resolved coupling V = (mu1.mu2 - 3 (mu1.R)(mu2.R)) / R^3, the quantum
beat it drives, the near field of the oscillating transition dipoles, and the
energy of the exchanged photon.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .atomic import GridSpec, QuantumDefectTable, binding_energy_GHz, dipole_matrix_element, rb85_defects
from .stark import PairChannel
from .units import FIELD_AU_VCM, HARTREE_MHZ, UM_TO_BOHR

# spherical unit vectors e_q in the cartesian lab frame
_E_SPH = {
    0: np.array([0.0, 0.0, 1.0], dtype=complex),
    +1: np.array([-1.0, -1.0j, 0.0], dtype=complex) / np.sqrt(2.0),
    -1: np.array([1.0, -1.0j, 0.0], dtype=complex) / np.sqrt(2.0),
}


@dataclass(frozen=True)
class DipoleVector:
    """Transition dipole as a complex lab-frame 3-vector (a0*e)."""

    components: tuple[complex, complex, complex]

    @classmethod
    def from_spherical(cls, amplitudes: Mapping[int, complex]) -> "DipoleVector":
        """Build from spherical components {q: mu_q}; q=0 is linear along z,
        q=+/-1 are the circular (x +/- i y)/sqrt(2) combinations."""
        vec = np.zeros(3, dtype=complex)
        for q, amp in amplitudes.items():
            if q not in _E_SPH:
                raise ValueError(f"q must be in {{-1, 0, +1}}, got {q}")
            vec = vec + amp * _E_SPH[q]
        return cls(tuple(vec))

    @classmethod
    def linear_z(cls, mu: float) -> "DipoleVector":
        return cls.from_spherical({0: mu})

    def as_array(self) -> np.ndarray:
        return np.array(self.components, dtype=complex)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


@dataclass(frozen=True)
class PairGeometry:
    """Separation vector between the interacting atoms, micrometres."""

    R_vec: tuple[float, float, float]

    def __post_init__(self):
        if self.R == 0.0:
            raise ValueError("separation must be non-zero")

    @property
    def R(self) -> float:
        return float(np.linalg.norm(self.R_vec))

    @property
    def R_hat(self) -> np.ndarray:
        return np.asarray(self.R_vec, dtype=float) / self.R

    @classmethod
    def along_z(cls, R_um: float) -> "PairGeometry":
        return cls((0.0, 0.0, float(R_um)))

    @classmethod
    def polar(cls, R_um: float, theta: float) -> "PairGeometry":
        """Separation of magnitude R at polar angle theta from the field (z) axis."""
        return cls((float(R_um * np.sin(theta)), 0.0, float(R_um * np.cos(theta))))


def coupling(mu1: DipoleVector, mu2: DipoleVector, geom: PairGeometry) -> complex:
    """Dipole-dipole matrix element V in MHz (complex for circular dipoles).

    V = (mu1.mu2 - 3 (mu1.R_hat)(mu2.R_hat)) / R^3 in atomic units, converted
    to MHz. Half the avoided-crossing size; |V| drives the dynamics.
    """
    R_bohr = geom.R * UM_TO_BOHR
    if R_bohr == 0.0:
        raise ValueError("coupling is singular at R = 0")
    a1 = mu1.as_array()
    a2 = mu2.as_array()
    rhat = geom.R_hat
    val = (a1 @ a2 - 3.0 * (a1 @ rhat) * (a2 @ rhat)) / R_bohr**3
    return complex(val * HARTREE_MHZ)


def quantum_beat(V_MHz: float) -> float:
    """Quantum-beat angular frequency omega_QB = 2V, in rad/us (= 2pi * 2|V| for V in MHz)."""
    return 4.0 * np.pi * abs(V_MHz)


def dipole_field(mu: DipoleVector, geom: PairGeometry) -> float:
    """Quasi-static near-field amplitude (V/cm) of an oscillating dipole at R.

    |3 R_hat (R_hat . mu) - mu| / R^3; retardation is ignored (kR << 1 at the
    32.8 GHz exchange frequency and tens of micrometres).
    """
    R_bohr = geom.R * UM_TO_BOHR
    if R_bohr == 0.0:
        raise ValueError("dipole field is singular at R = 0")
    a = mu.as_array()
    rhat = geom.R_hat
    field_vec = (3.0 * rhat * (a @ rhat) - a) / R_bohr**3
    return float(np.linalg.norm(field_vec) * FIELD_AU_VCM)


def photon_energy(ch: PairChannel, defects: QuantumDefectTable | None = None) -> float:
    """Frequency (GHz) of the photon exchanged between the atoms: the
    49s -> 49p transition of the second atom (equal to the 41d -> 42p
    transition up to W)."""
    defects = defects if defects is not None else rb85_defects()
    return abs(
        binding_energy_GHz(ch.final[1], defects) - binding_energy_GHz(ch.initial[1], defects)
    )


@dataclass(frozen=True)
class CouplingTerm:
    """One allowed (q1, q2) dipole combination of a channel for signed m_j."""

    mj_d: float
    mj_s: float
    q_d: int
    q_s: int
    mu_d: DipoleVector
    mu_s: DipoleVector


def coupling_combinations(
    ch: PairChannel,
    defects: QuantumDefectTable | None = None,
    grid: GridSpec = GridSpec(),
) -> tuple[CouplingTerm, ...]:
    """All signed-m_j dipole combinations of a channel with q_d + q_s = 0.

    The separation lies along the field axis in the experiment, so only
    combinations conserving total m_j couple; this enumerates them for
    ensemble averaging.
    """
    defects = defects if defects is not None else rb85_defects()
    (d_state, s_state) = ch.initial
    (p1_state, p2_state) = ch.final
    terms = []
    for sign_d in (+1, -1):
        for sign_s in (+1, -1):
            for q_d in (-1, 0, 1):
                q_s = -q_d
                mu_d = dipole_matrix_element(d_state, p1_state, q_d, defects, sign_d, grid)
                mu_s = dipole_matrix_element(s_state, p2_state, q_s, defects, sign_s, grid)
                if mu_d == 0.0 or mu_s == 0.0:
                    continue
                terms.append(
                    CouplingTerm(
                        mj_d=sign_d * d_state.mj_abs,
                        mj_s=sign_s * s_state.mj_abs,
                        q_d=q_d,
                        q_s=q_s,
                        mu_d=DipoleVector.from_spherical({q_d: mu_d}),
                        mu_s=DipoleVector.from_spherical({q_s: mu_s}),
                    )
                )
    return tuple(terms)


def channel_dipoles(
    ch: PairChannel,
    defects: QuantumDefectTable | None = None,
    grid: GridSpec = GridSpec(),
) -> tuple[DipoleVector, DipoleVector]:
    """Dominant dipole combination of a channel for scalar workflows.

    Channel a couples through two linear (q=0) dipoles, channel b through a
    counter-rotating circular pair (q = -1 on the d -> p transition, q = +1 on
    s -> p), as fixed by the m_j bookkeeping for separation along z.
    """
    defects = defects if defects is not None else rb85_defects()
    q_d, q_s = (0, 0) if ch.final[1].mj_abs == ch.initial[1].mj_abs else (-1, +1)
    mu_d = dipole_matrix_element(ch.initial[0], ch.final[0], q_d, defects, +1, grid)
    mu_s = dipole_matrix_element(ch.initial[1], ch.final[1], q_s, defects, +1, grid)
    return (
        DipoleVector.from_spherical({q_d: mu_d}),
        DipoleVector.from_spherical({q_s: mu_s}),
    )


def channel_coupling(
    ch: PairChannel,
    geom: PairGeometry,
    defects: QuantumDefectTable | None = None,
    grid: GridSpec = GridSpec(),
) -> complex:
    """Coupling V (MHz) of a channel's dominant dipole combination at the given geometry."""
    mu_d, mu_s = channel_dipoles(ch, defects, grid)
    return coupling(mu_d, mu_s, geom)
