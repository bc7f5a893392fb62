"""Rydberg dipole-dipole transfer between separated volumes.

Quantum-defect atomic structure, Stark maps, dipole-dipole couplings,
rf-driven multi-photon dynamics, and Monte-Carlo ensemble lineshapes for the
41d + 49s -> 42p + 49p transfer in Rb-85.
"""

__version__ = "0.1.0"

from .atomic import (
    GridSpec,
    QuantumDefectTable,
    RadialWavefunction,
    RydbergState,
    binding_energy,
    binding_energy_GHz,
    dipole_matrix_element,
    radial_matrix_element,
    radial_wavefunction,
    rb85_defects,
)
from .ensemble import (
    EnsembleConfig,
    FitResult,
    fit_lorentzian_doublet,
    sample_atoms,
    scan_static_field,
    width_to_frequency,
)
from .errors import FitError, IntegrationError, QuadraticFitError
from .pairint import (
    DipoleVector,
    PairGeometry,
    channel_coupling,
    channel_dipoles,
    coupling,
    coupling_combinations,
    dipole_field,
    photon_energy,
    quantum_beat,
)
from .rfdyn import (
    DynamicsResult,
    FieldProgram,
    SpectrumResult,
    ac_stark_shift,
    effective_field,
    extract_spectroscopy,
    floquet_spectrum,
    instantaneous_detuning,
    resonance_frequencies,
    simulate_dynamics,
    switching_program,
)
from .stark import (
    PairChannel,
    StarkBasis,
    StarkMap,
    build_hamiltonian,
    channels,
    compute_channels,
    pair_energy_difference,
    polarizability,
    reference_channel,
    reference_channels,
    resonance_field,
    stark_map,
)
