import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersive_ring import presets
from dispersive_ring.cavity import (
    CavityConfig,
    airy_half_width_phase,
    amplitude_for_linewidth,
    find_resonance,
    linewidth_numeric,
    linewidth_ratio_analytic,
    round_trip_phase_delta,
    spectrum,
    transmission,
    vacuum_linewidth,
)
from dispersive_ring.errors import (
    AboveThresholdError,
    FormulaDomainError,
    ParameterError,
    WindowTooNarrowError,
)
from dispersive_ring.media import C_LIGHT, OMEGA_RB_D2, MediumKind, MediumSpec
from dispersive_ring.presets import MHZ, mhz

import frozen_values as frozen

VAC = MediumSpec.vacuum(OMEGA_RB_D2)


class TestConfig:
    def test_mode_number_consistent(self, reference_cavity):
        order = reference_cavity.omega_lock * reference_cavity.length_L / (2 * math.pi * C_LIGHT)
        assert order == pytest.approx(reference_cavity.mode_N, abs=1e-6)
        assert abs(reference_cavity.length_L - 1.0) < 1e-6

    def test_explicit_mode_number(self, reference_cavity):
        cfg = CavityConfig(1.0, 0.1, 0.97, mode_N=reference_cavity.mode_N)
        assert cfg.length_L == reference_cavity.length_L
        with pytest.raises(ParameterError):
            CavityConfig(1.0, 0.1, 0.97, mode_N=reference_cavity.mode_N + 3)

    def test_filled_ring_stays_filled(self, cad_cavity):
        assert cad_cavity.ell_over_L == 1.0

    @pytest.mark.parametrize(
        "kwargs, field",
        [
            (dict(length_L=0.0, length_medium=0.0, reflectivity_R=0.9), "length_L"),
            (dict(length_L=1.0, length_medium=2.0, reflectivity_R=0.9), "length_medium"),
            (dict(length_L=1.0, length_medium=0.1, reflectivity_R=1.0), "reflectivity_R"),
            (dict(length_L=1.0, length_medium=0.1, reflectivity_R=0.9, excess_loss=1.0), "excess_loss"),
        ],
    )
    def test_validation(self, kwargs, field):
        with pytest.raises(ParameterError) as info:
            CavityConfig(**kwargs)
        assert info.value.field == field

    def test_reference_linewidths(self, reference_cavity, eit_cavity):
        # snapping L to an integer mode number shifts widths by ~5e-8
        assert mhz(vacuum_linewidth(reference_cavity)) == pytest.approx(3.0, rel=1e-6)
        assert mhz(vacuum_linewidth(eit_cavity)) == pytest.approx(8.0, rel=1e-6)
        # finesse close to 100
        assert reference_cavity.free_spectral_range / vacuum_linewidth(reference_cavity) == pytest.approx(100, rel=0.01)

    def test_amplitude_inverse(self):
        a = amplitude_for_linewidth(5 * MHZ, 1.0)
        assert 4 * airy_half_width_phase(a) * C_LIGHT == pytest.approx(5 * MHZ, rel=1e-12)


class TestPhase:
    def test_zero_at_lock(self, eit_cavity, eit_medium):
        assert round_trip_phase_delta(eit_cavity, eit_medium, 0.0) == 0.0

    def test_vacuum_linear(self, reference_cavity):
        dw = np.array([-3e8, 1e5, 7e9])
        np.testing.assert_allclose(
            round_trip_phase_delta(reference_cavity, VAC, dw), dw * reference_cavity.length_L / C_LIGHT, rtol=1e-15
        )

    def test_linear_toy_first_order(self, reference_cavity):
        n_g = 40.0
        toy = MediumSpec.linear_toy(n_g, OMEGA_RB_D2)
        dw = 2 * math.pi * 1e5
        cfg = reference_cavity
        expected = dw * ((cfg.length_L - cfg.length_medium) + n_g * cfg.length_medium) / C_LIGHT
        assert round_trip_phase_delta(cfg, toy, dw) == pytest.approx(expected, rel=1e-9)

    def test_detuned_cavity_resonates_at_shift(self, reference_cavity):
        shift = 2.5 * MHZ
        assert round_trip_phase_delta(reference_cavity, VAC, shift, cavity_shift=shift) == pytest.approx(0.0, abs=1e-18)


class TestTransmission:
    def test_unit_at_lock(self, reference_cavity):
        assert transmission(reference_cavity, VAC, 0.0) == 1.0

    def test_antiresonance(self, reference_cavity):
        a = reference_cavity.round_trip_amplitude
        t = transmission(reference_cavity, VAC, 0.5 * reference_cavity.free_spectral_range)
        assert t == pytest.approx(1 / (1 + 4 * a / (1 - a) ** 2), rel=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(dw=st.floats(-1e10, 1e10))
    def test_periodic_in_fsr(self, dw):
        cfg = presets.reference_cavity()
        a = transmission(cfg, VAC, dw)
        b = transmission(cfg, VAC, dw + cfg.free_spectral_range)
        assert b == pytest.approx(a, abs=1e-12)

    def test_above_threshold(self, cad_cavity):
        strong = MediumSpec(MediumKind.RAMAN_GAIN_SINGLE, OMEGA_RB_D2, chi0=1e-7, gamma_opt=MHZ)
        with pytest.raises(AboveThresholdError):
            transmission(cad_cavity, strong, 0.0)


class TestSpectrum:
    def test_vacuum_width(self, reference_cavity):
        w = vacuum_linewidth(reference_cavity)
        res = spectrum(reference_cavity, VAC, -3 * w, 3 * w, 401)
        assert res.fwhm == pytest.approx(w, rel=5e-3)
        assert res.peak_center == pytest.approx(0.0, abs=1e-6 * w)

    def test_eit_regime(self, eit_cavity, eit_medium):
        res = find_resonance(eit_cavity, eit_medium)
        assert mhz(res.fwhm) == pytest.approx(frozen.EIT_LOADED_FWHM_MHZ, rel=1e-4)
        assert vacuum_linewidth(eit_cavity) / res.fwhm == pytest.approx(6.53, abs=0.01)

    def test_symmetric_center(self, eit_cavity, eit_medium):
        res = spectrum(eit_cavity, eit_medium, -2 * MHZ, 2 * MHZ, 1001)
        step = res.detunings[1] - res.detunings[0]
        assert abs(res.peak_center) < 1e-3 * step

    def test_window_too_narrow(self, reference_cavity):
        with pytest.raises(WindowTooNarrowError):
            spectrum(reference_cavity, VAC, -0.1 * MHZ, 0.1 * MHZ, 101)

    @pytest.mark.parametrize("samples", [0, 15, 20.5])
    def test_sample_count(self, reference_cavity, samples):
        with pytest.raises(ParameterError):
            spectrum(reference_cavity, VAC, -MHZ, MHZ, samples)

    def test_auto_window_widens(self, reference_cavity):
        # strong negative dispersion: the resonance is far wider than first guessed
        toy = MediumSpec.linear_toy(-5.0, OMEGA_RB_D2)
        cfg = CavityConfig(1.0, 1.0, reference_cavity.reflectivity_R)
        res = find_resonance(cfg, toy)
        assert res.fwhm == pytest.approx(vacuum_linewidth(cfg) / 5, rel=0.01)


class TestAnalyticRatio:
    def test_empty(self, reference_cavity):
        assert linewidth_ratio_analytic(reference_cavity, VAC) == 1.0

    def test_pure_dispersion(self, reference_cavity):
        toy = MediumSpec.linear_toy(50.0, OMEGA_RB_D2)
        assert linewidth_ratio_analytic(reference_cavity, toy) == pytest.approx(1 / 5.9, rel=1e-6)

    def test_cad_is_infinite(self, cad_cavity, cad_medium):
        assert linewidth_ratio_analytic(cad_cavity, cad_medium) == math.inf

    def test_negative_threshold_filled_ring(self, reference_cavity):
        cfg = CavityConfig(1.0, 1.0, reference_cavity.reflectivity_R)
        below = linewidth_ratio_analytic(cfg, MediumSpec.linear_toy(-1.01, OMEGA_RB_D2))
        above = linewidth_ratio_analytic(cfg, MediumSpec.linear_toy(-0.99, OMEGA_RB_D2))
        assert below < 1 < above

    def test_formula_domain(self):
        with pytest.raises(FormulaDomainError):
            airy_half_width_phase(0.01)

    def test_gain_narrows_beyond_dispersion(self, reference_cavity):
        single = MediumSpec(MediumKind.RAMAN_GAIN_SINGLE, OMEGA_RB_D2, chi0=2e-9, gamma_opt=100 * MHZ)
        n_g = single.group_index(0.0)
        lossless = MediumSpec.linear_toy(n_g, OMEGA_RB_D2)
        assert n_g > 1
        assert linewidth_ratio_analytic(reference_cavity, single) < linewidth_ratio_analytic(reference_cavity, lossless)
        assert linewidth_numeric(reference_cavity, single) < linewidth_numeric(reference_cavity, lossless)

    def test_eit_deviation_from_formula(self, eit_cavity, eit_medium):
        """The closed form assumes dispersion linear over the resonance.

        Here the resonance (~1.2 MHz) is wider than the EIT window (1 MHz),
        so the numeric width differs from the formula; the gap is recorded,
        not bounded.
        """
        analytic = linewidth_ratio_analytic(eit_cavity, eit_medium)
        numeric = linewidth_numeric(eit_cavity, eit_medium) / vacuum_linewidth(eit_cavity)
        assert analytic == pytest.approx(0.1716, abs=1e-3)
        assert numeric == pytest.approx(0.1531, abs=1e-3)


class TestCad:
    def test_double_humped(self, cad_cavity, cad_medium):
        res = find_resonance(cad_cavity, cad_medium)
        assert abs(mhz(res.peak_center)) == pytest.approx(frozen.CAD_HUMP_MHZ, rel=1e-3)
        assert transmission(cad_cavity, cad_medium, 0.0) < res.peak_height

    def test_numeric_width_finite(self, cad_cavity, cad_medium):
        assert mhz(linewidth_numeric(cad_cavity, cad_medium)) == pytest.approx(frozen.CAD_LOADED_FWHM_MHZ, rel=1e-3)
        assert mhz(vacuum_linewidth(cad_cavity)) == pytest.approx(frozen.CAD_VACUUM_FWHM_MHZ, rel=1e-9)
