"""Conversion factors between atomic units and the interface units (MHz, V/cm, um, us).

Internal calculations run in Hartree atomic units; every public interface uses
MHz / GHz for energies, V/cm for fields, micrometres for distances and
microseconds for times.
"""

from scipy.constants import physical_constants, atomic_mass, c, e, h, m_e

BOHR_M = physical_constants["Bohr radius"][0]
HARTREE_J = physical_constants["Hartree energy"][0]
RYDBERG_PER_M = physical_constants["Rydberg constant"][0]

# Rb-85 atomic mass (CODATA/AME), used for the reduced-mass Rydberg constant.
RB85_MASS_KG = 84.911789738 * atomic_mass
RB85_REDUCED_MASS_RATIO = 1.0 / (1.0 + m_e / (RB85_MASS_KG - m_e))

HARTREE_GHZ = HARTREE_J / h / 1e9
HARTREE_MHZ = HARTREE_GHZ * 1e3

# dipole (a0*e) times field (V/cm), as an interaction energy in MHz
EA0_VCM_MHZ = e * BOHR_M * 100.0 / h / 1e6
EA0_VCM_GHZ = EA0_VCM_MHZ * 1e-3

# atomic unit of electric field, in V/cm
FIELD_AU_VCM = HARTREE_J / (e * BOHR_M) / 100.0

UM_TO_BOHR = 1e-6 / BOHR_M

RYDBERG_INF_GHZ = RYDBERG_PER_M * c / 1e9
