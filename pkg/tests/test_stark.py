"""Stark maps, polarizabilities, channel constants, resonance fields."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ryddrive as rd
from ryddrive.errors import QuadraticFitError
from ryddrive.stark import (
    STATE_49P_A,
    STATE_49S,
    perturbative_polarizability,
    single_state_polarizability,
)
from ryddrive.units import EA0_VCM_GHZ


@pytest.fixture(scope="module")
def small_basis(defects):
    # window just wide enough to hold 49s and its direct dipole partners
    return rd.StarkBasis.around(STATE_49S, defects, window_GHz=40.0)


@pytest.fixture(scope="module")
def small_map(small_basis):
    return rd.stark_map(small_basis, np.linspace(0.0, 0.45, 10))


class TestHamiltonian:
    def test_zero_field_is_diagonal(self, small_basis):
        H = rd.build_hamiltonian(small_basis, 0.0)
        assert np.all(H == np.diag(np.diag(H)))

    def test_symmetric_exactly(self, small_basis):
        H = rd.build_hamiltonian(small_basis, 0.4)
        assert np.array_equal(H, H.T)

    def test_coupling_element_is_field_times_dipole(self, small_basis, defects):
        # direct product of operation outputs
        H = rd.build_hamiltonian(small_basis, 0.4)
        i = small_basis.index(STATE_49S)
        k = small_basis.index(STATE_49P_A)
        mu = rd.dipole_matrix_element(STATE_49S, STATE_49P_A, 0, defects)
        assert H[i, k] == pytest.approx(0.4 * mu * EA0_VCM_GHZ, rel=1e-12)

    def test_negative_field_rejected(self, small_basis):
        with pytest.raises(ValueError):
            rd.build_hamiltonian(small_basis, -0.1)

    def test_basis_one_mj_block_and_window(self, small_basis, defects):
        e0 = rd.binding_energy_GHz(STATE_49S, defects)
        for s in small_basis.states:
            assert s.mj_abs == 0.5
            assert abs(rd.binding_energy_GHz(s, defects) - e0) <= 40.0


class TestStarkMap:
    def test_zero_field_energies_match_defect_energies(self, small_map, defects):
        for k, lab in enumerate(small_map.labels):
            assert small_map.energies[0, k] == pytest.approx(
                rd.binding_energy_GHz(lab, defects), abs=1e-6
            )

    def test_labels_are_permutation_of_basis(self, small_basis, small_map):
        assert sorted(small_map.labels) == sorted(small_basis.states)

    def test_no_level_crossings_within_block(self, small_map):
        for fi in range(1, len(small_map.fields)):
            w = np.sort(small_map.energies[fi])
            assert np.min(np.diff(w)) > 0

    def test_trace_conserved(self, small_basis, small_map):
        for fi, F in enumerate(small_map.fields):
            H = rd.build_hamiltonian(small_basis, F)
            assert np.sum(small_map.energies[fi]) == pytest.approx(
                np.trace(H), rel=1e-8
            )

    def test_49p_splits_into_mj_branches(self, defects):
        # |m_j| = 1/2 and 3/2 blocks shift differently for F > 0
        e = {}
        for mj in (0.5, 1.5):
            state = rd.RydbergState(49, 1, 1.5, mj)
            basis = rd.StarkBasis.around(state, defects, window_GHz=40.0)
            smap = rd.stark_map(basis, np.linspace(0.0, 0.4, 5))
            e[mj] = smap.track(state)
        assert e[0.5][0] == pytest.approx(e[1.5][0], abs=1e-9)
        assert abs(e[0.5][-1] - e[1.5][-1]) * 1e3 > 1.0  # MHz-scale splitting

    def test_grid_validation(self, small_basis):
        with pytest.raises(ValueError):
            rd.stark_map(small_basis, np.array([0.1, 0.2]))
        with pytest.raises(ValueError):
            rd.stark_map(small_basis, np.array([0.0, 0.2, 0.1]))

    def test_csv_export(self, small_map, tmp_path):
        out = small_map.to_csv(tmp_path / "map.csv")
        lines = out.read_text().splitlines()
        header = [l for l in lines if not l.startswith("#")][0]
        assert header == "field_Vcm,level_index,energy_GHz,label"
        from ryddrive.cli import load_csv
        data = load_csv(out)
        assert len(data) == len(small_map.fields) * len(small_map.labels)


class TestPolarizability:
    def test_quadratic_fit_residual_reported(self, small_map):
        fit = rd.polarizability(small_map, STATE_49S)
        assert fit.residual_rms_GHz < 1e-4
        assert fit.alpha > 0

    def test_matches_perturbation_theory(self, small_basis, small_map):
        alpha_map = rd.polarizability(small_map, STATE_49S).alpha
        alpha_pt = perturbative_polarizability(small_basis, STATE_49S)
        assert alpha_map == pytest.approx(alpha_pt, rel=0.01)

    def test_manifold_state_fails_quadratic_model(self, defects):
        # near-degenerate high-l manifold states shift linearly
        state = rd.RydbergState(47, 10, 10.5, 0.5)
        basis = rd.StarkBasis.around(state, defects, window_GHz=4.0)
        smap = rd.stark_map(basis, np.linspace(0.0, 0.1, 6))
        with pytest.raises(QuadraticFitError):
            rd.polarizability(smap, state, fit_window=(0.0, 0.1))

    def test_basis_window_convergence(self, defects):
        # doubling-style check: enlarging the window leaves alpha(49s) within 1%
        a150 = single_state_polarizability(STATE_49S, defects, window_GHz=150.0).alpha
        a250 = single_state_polarizability(STATE_49S, defects, window_GHz=250.0).alpha
        assert a150 == pytest.approx(a250, rel=0.01)


class TestChannelConstants:
    def test_computed_match_measured_values(self, computed_channels):
        ch_a, ch_b = computed_channels
        assert ch_a.W0 == pytest.approx(25.15, abs=0.5)
        assert ch_a.alpha == pytest.approx(347.04, abs=3.5)
        assert ch_b.alpha == pytest.approx(297.40, abs=3.0)

    def test_resonance_fields(self, computed_channels):
        ch_a, ch_b = computed_channels
        assert rd.resonance_field(ch_a) == pytest.approx(0.3807, rel=0.01)
        assert rd.resonance_field(ch_b) == pytest.approx(0.4113, rel=0.01)

    def test_reference_channels(self, reference_channels):
        ch_a, ch_b = reference_channels
        assert (ch_a.W0, ch_a.alpha) == (25.15, 347.04)
        assert (ch_b.W0, ch_b.alpha) == (25.15, 297.40)
        assert ch_a.final[1].mj_abs == 0.5 and ch_b.final[1].mj_abs == 1.5

    def test_invalid_constants_rejected(self, reference_channels):
        ch = reference_channels[0]
        with pytest.raises(ValueError):
            rd.PairChannel("a", ch.initial, ch.final, -1.0, ch.alpha)
        with pytest.raises(ValueError):
            rd.PairChannel("a", ch.initial, ch.final, ch.W0, 0.0)

    def test_channels_mode_dispatch(self, reference_channels):
        assert rd.channels("reference") == reference_channels
        with pytest.raises(ValueError):
            rd.channels("guesswork")


class TestPairEnergy:
    def test_zero_field_gap(self, reference_channels):
        assert rd.pair_energy_difference(reference_channels[0], 0.0) == pytest.approx(25.15)

    def test_gap_at_60_mV(self, reference_channels):
        # 24.53 MHz at 60 mV/cm
        W = rd.pair_energy_difference(reference_channels[0], 0.060)
        assert W == pytest.approx(24.53, abs=0.01)

    def test_resonance_closes_gap(self, reference_channels):
        for ch in reference_channels:
            F = rd.resonance_field(ch)
            assert abs(rd.pair_energy_difference(ch, F)) < 1e-9

    @given(scale=st.floats(min_value=0.5, max_value=4.0))
    @settings(max_examples=25, deadline=None)
    def test_doubling_alpha_scales_field(self, scale):
        ch = rd.reference_channel("a")
        ch2 = rd.PairChannel("a", ch.initial, ch.final, ch.W0, ch.alpha * scale)
        assert rd.resonance_field(ch2) == pytest.approx(
            rd.resonance_field(ch) / np.sqrt(scale), rel=1e-12
        )
