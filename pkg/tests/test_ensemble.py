"""Monte-Carlo volumes: sampling, field scans, doublet fits, width conversion."""

import numpy as np
import pytest

import ryddrive as rd
from ryddrive.ensemble import FWHM_TO_SIGMA, PeakFit, _doublet
from ryddrive.errors import FitError


@pytest.fixture(scope="module")
def small_scan(reference_channels):
    cfg = rd.EnsembleConfig(separation=25.0, n_shots=150, seed=3)
    fields = np.linspace(0.355, 0.435, 81)
    return cfg, rd.scan_static_field(cfg, reference_channels, fields)


class TestSampling:
    def test_volume_centers_separated(self):
        cfg = rd.EnsembleConfig(separation=25.0, n_atoms=(10000, 10000), n_shots=1, seed=1)
        s_pos, d_pos = rd.sample_atoms(cfg)
        assert d_pos[:, 2].mean() - s_pos[:, 2].mean() == pytest.approx(25.0, abs=0.5)
        assert abs(s_pos[:, 1].mean()) < 0.5

    def test_transverse_variance_matches_fwhm(self):
        cfg = rd.EnsembleConfig(separation=25.0, n_atoms=(20000, 20000), n_shots=1, seed=2)
        s_pos, d_pos = rd.sample_atoms(cfg)
        var_s = (11.6 * FWHM_TO_SIGMA) ** 2
        var_d = (16.3 * FWHM_TO_SIGMA) ** 2
        assert s_pos[:, 1].var() == pytest.approx(var_s, rel=0.05)
        assert s_pos[:, 2].var() == pytest.approx(var_s, rel=0.05)
        assert d_pos[:, 1].var() == pytest.approx(var_d, rel=0.05)

    def test_uniform_along_laser_axis(self):
        cfg = rd.EnsembleConfig(separation=25.0, n_atoms=(20000, 20000), n_shots=1, seed=4)
        s_pos, _ = rd.sample_atoms(cfg)
        x = s_pos[:, 0]
        assert x.min() > -250.0 and x.max() < 250.0
        assert x.var() == pytest.approx(500.0**2 / 12.0, rel=0.05)

    def test_seed_determinism(self):
        cfg = rd.EnsembleConfig(separation=25.0, seed=7)
        a = rd.sample_atoms(cfg, shot=5)
        b = rd.sample_atoms(cfg, shot=5)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        c = rd.sample_atoms(cfg, shot=6)
        assert not np.array_equal(a[0], c[0])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            rd.EnsembleConfig(separation=-1.0)
        with pytest.raises(ValueError):
            rd.EnsembleConfig(n_atoms=(0, 5))
        with pytest.raises(ValueError):
            rd.EnsembleConfig(pairing="psychic")


class TestScan:
    def test_double_peaks_at_resonance_fields(self, small_scan, reference_channels):
        _, spec = small_scan
        fit = rd.fit_lorentzian_doublet(spec)
        pa, pb = fit.peaks
        assert pa.center == pytest.approx(rd.resonance_field(reference_channels[0]), abs=0.002)
        assert pb.center == pytest.approx(rd.resonance_field(reference_channels[1]), abs=0.002)

    def test_fraction_bounds(self, small_scan):
        _, spec = small_scan
        assert np.all(spec.y >= 0)
        assert np.all(spec.y <= 0.5)

    def test_far_detuned_background_only(self, reference_channels):
        cfg = rd.EnsembleConfig(separation=25.0, n_shots=60, seed=5)
        spec = rd.scan_static_field(cfg, reference_channels, np.linspace(0.0, 0.1, 3))
        assert np.all(spec.y < 0.01)

    def test_bitwise_determinism(self, reference_channels):
        cfg = rd.EnsembleConfig(separation=25.0, n_shots=20, seed=9)
        fields = np.linspace(0.37, 0.39, 5)
        s1 = rd.scan_static_field(cfg, reference_channels, fields)
        s2 = rd.scan_static_field(cfg, reference_channels, fields)
        assert np.array_equal(s1.y, s2.y) and np.array_equal(s1.y_err, s2.y_err)

    def test_error_scales_with_shots(self, reference_channels):
        fields = np.linspace(0.375, 0.385, 3)
        errs = []
        for shots in (40, 400):
            cfg = rd.EnsembleConfig(separation=25.0, n_shots=shots, seed=13)
            errs.append(rd.scan_static_field(cfg, reference_channels, fields).y_err.mean())
        assert errs[0] / errs[1] == pytest.approx(np.sqrt(10.0), rel=0.35)

    def test_all_pairs_mode_runs(self, reference_channels):
        cfg = rd.EnsembleConfig(separation=25.0, n_shots=30, seed=5, pairing="all-pairs")
        spec = rd.scan_static_field(cfg, reference_channels, np.linspace(0.37, 0.39, 3))
        assert np.all((spec.y >= 0) & (spec.y <= 1))

    def test_field_noise_broadens(self, reference_channels):
        fields = np.linspace(0.355, 0.435, 81)
        widths = []
        for noise in (0.0, 0.003):
            cfg = rd.EnsembleConfig(separation=25.0, n_shots=200, seed=17, field_noise=noise)
            spec = rd.scan_static_field(cfg, reference_channels, fields)
            widths.append(rd.fit_lorentzian_doublet(spec).peaks[0].fwhm)
        assert widths[1] > widths[0]


class TestDoubletFit:
    def test_exact_recovery_noiseless(self):
        x = np.linspace(0.0, 10.0, 601)
        truth = (3.0, 0.8, 0.6, 7.0, 1.2, 0.4, 0.05)
        y = _doublet(x, *truth)
        fit = rd.fit_lorentzian_doublet(rd.SpectrumResult(x=x, y=y, y_err=np.zeros_like(y)))
        pa, pb = fit.peaks
        assert (pa.center, pa.fwhm, pa.amplitude) == pytest.approx(truth[0:3], abs=1e-6)
        assert (pb.center, pb.fwhm, pb.amplitude) == pytest.approx(truth[3:6], abs=1e-6)
        assert fit.offset == pytest.approx(0.05, abs=1e-6)
        assert fit.residual_rms < 1e-9

    def test_report_format(self):
        x = np.linspace(0.0, 10.0, 301)
        y = _doublet(x, 3.0, 0.8, 0.6, 7.0, 1.2, 0.4, 0.05)
        fit = rd.fit_lorentzian_doublet(rd.SpectrumResult(x=x, y=y, y_err=np.zeros_like(y)))
        text = fit.report()
        assert "peak 1" in text and "peak 2" in text and "FWHM" in text

    def test_single_peak_rejected(self):
        x = np.linspace(0.0, 10.0, 301)
        y = _doublet(x, 5.0, 1.0, 0.5, 5.0, 1.0, 0.0, 0.0)
        with pytest.raises(FitError):
            rd.fit_lorentzian_doublet(rd.SpectrumResult(x=x, y=y, y_err=np.zeros_like(y)))

    def test_peaks_below_noise_rejected(self):
        rng = np.random.default_rng(0)
        x = np.linspace(0.0, 10.0, 301)
        y = np.clip(_doublet(x, 3.0, 0.8, 0.01, 7.0, 1.2, 0.008, 0.1) + rng.normal(0, 1e-4, x.size), 0, 1)
        err = np.full_like(y, 0.02)
        with pytest.raises(FitError):
            rd.fit_lorentzian_doublet(rd.SpectrumResult(x=x, y=y, y_err=err))


class TestWidthConversion:
    def test_channel_a_661_kHz(self, reference_channels):
        # 5 mV/cm at F_a
        F_a = rd.resonance_field(reference_channels[0])
        assert rd.width_to_frequency(5.0, reference_channels[0], F_a) == pytest.approx(660.6, abs=1.5)

    def test_channel_b_612_kHz(self, reference_channels):
        F_b = rd.resonance_field(reference_channels[1])
        assert rd.width_to_frequency(5.0, reference_channels[1], F_b) == pytest.approx(612.0, abs=1.5)

    def test_zero_width(self, reference_channels):
        assert rd.width_to_frequency(0.0, reference_channels[0], 0.38) == 0.0

    def test_field_must_be_positive(self, reference_channels):
        with pytest.raises(ValueError):
            rd.width_to_frequency(5.0, reference_channels[0], 0.0)
