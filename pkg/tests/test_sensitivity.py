import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dispersive_ring import presets
from dispersive_ring.cavity import CavityConfig, find_resonance
from dispersive_ring.errors import (
    AboveThresholdError,
    CadDivergenceError,
    ParameterError,
    SolverRangeError,
)
from dispersive_ring.media import OMEGA_RB_D2, MediumKind, MediumSpec, tune_dual_raman
from dispersive_ring.presets import MHZ, mhz
from dispersive_ring.sensitivity import (
    SHIFT_TOLERANCE,
    _ShiftEquation,
    cad_enhancement_scan,
    intersection_grid,
    length_to_dw0,
    scan_shift,
    shift_linear,
    solve_shift,
)

import frozen_values as frozen

VAC = MediumSpec.vacuum(OMEGA_RB_D2)


class TestShiftLinear:
    def test_no_dispersion(self):
        assert shift_linear(1.0, 0.3, 1.234e6) == 1.234e6

    def test_reference_factor(self):
        assert shift_linear(50.0, 0.1, 5.9 * MHZ) == pytest.approx(MHZ, rel=1e-12)

    def test_divergence(self):
        with pytest.raises(CadDivergenceError):
            shift_linear(0.0, 1.0, MHZ)


class TestLengthToShift:
    def test_zero(self, reference_cavity):
        assert length_to_dw0(reference_cavity, 0.0) == 0.0

    def test_four_mhz_detuning(self, reference_cavity):
        dL = -reference_cavity.length_L * 4 * MHZ / reference_cavity.omega_lock
        assert length_to_dw0(reference_cavity, dL) == pytest.approx(4 * MHZ, rel=1e-12)

    def test_linear(self, reference_cavity):
        assert length_to_dw0(reference_cavity, 2e-9) == pytest.approx(2 * length_to_dw0(reference_cavity, 1e-9), rel=1e-15)


class TestSolveShift:
    def test_zero_exact(self, eit_cavity, eit_medium):
        res = solve_shift(eit_cavity, eit_medium, 0.0)
        assert res.dw0_prime == 0.0 and res.dw0_prime_linear == 0.0
        assert res.n_g_eff == res.n_g_local == eit_medium.group_index(0.0)

    def test_linear_toy_matches_closed_form(self, reference_cavity):
        toy = MediumSpec.linear_toy(50.0, OMEGA_RB_D2)
        res = solve_shift(reference_cavity, toy, 5.9 * MHZ)
        assert abs(res.dw0_prime - MHZ) < SHIFT_TOLERANCE
        assert res.S_linear == pytest.approx(5.9)

    def test_eit_large_shift_regression(self, eit_cavity, eit_medium):
        res = solve_shift(eit_cavity, eit_medium, 4 * MHZ)
        assert mhz(res.dw0_prime) == pytest.approx(frozen.EIT_SHIFT_4MHZ_MHZ, rel=1e-7)
        # the small-signal reduction no longer holds this far out
        assert res.dw0_prime > 4 * MHZ / res.S_linear
        assert res.residual < SHIFT_TOLERANCE
        assert not res.fold

    def test_eit_1mhz_regression(self, eit_cavity, eit_medium):
        res = solve_shift(eit_cavity, eit_medium, MHZ)
        assert mhz(res.dw0_prime) == pytest.approx(frozen.EIT_SHIFT_1MHZ_MHZ, rel=1e-7)

    @settings(max_examples=40, deadline=None)
    @given(u=st.floats(0.01, 6.0))
    def test_residual_sign_and_reduction(self, u):
        cfg, med = presets.eit_cavity(), _EIT
        dw0 = u * MHZ
        pos, neg = solve_shift(cfg, med, dw0), solve_shift(cfg, med, -dw0)
        assert pos.residual < SHIFT_TOLERANCE and neg.residual < SHIFT_TOLERANCE
        assert 0 < pos.dw0_prime <= dw0
        assert neg.dw0_prime == pytest.approx(-pos.dw0_prime, abs=1e-6 * dw0)

    def test_residual_matches_multiplied_out_equation(self, eit_cavity, eit_medium):
        res = solve_shift(eit_cavity, eit_medium, 2.2 * MHZ)
        x = res.dw0_prime
        quotient = x * (1 + (res.n_g_eff - 1) * eit_cavity.ell_over_L) - res.dw0
        assert abs(quotient) < SHIFT_TOLERANCE

    def test_local_group_index_reported(self, eit_cavity, eit_medium):
        res = solve_shift(eit_cavity, eit_medium, 2 * MHZ)
        assert res.n_g_local == pytest.approx(eit_medium.group_index(res.dw0_prime))

    def test_above_threshold(self, cad_medium):
        cfg = CavityConfig(1.0, 1.0, 0.999)
        with pytest.raises(AboveThresholdError):
            solve_shift(cfg, cad_medium, 1e3)

    def test_out_of_range(self, reference_cavity):
        with pytest.raises(SolverRangeError):
            solve_shift(reference_cavity, VAC, 0.6 * reference_cavity.free_spectral_range)

    def test_fold_flagged(self):
        """Anomalous wings outside a dense EIT window fold the shift map."""
        line = MediumSpec(
            MediumKind.EIT_LAMBDA, OMEGA_RB_D2, chi0=3e-8, gamma_opt=6 * MHZ, rabi_pump=2 * MHZ
        )
        cfg = CavityConfig(1.0, 1.0, 0.9)
        g = _ShiftEquation(cfg, line).G(np.linspace(0, 30 * MHZ, 30001))
        top = float(g[np.argmax(np.diff(g) < 0)])
        res = solve_shift(cfg, line, 1.5 * top)
        assert res.fold
        assert res.dw0_prime > top
        assert res.residual < SHIFT_TOLERANCE


_EIT = presets.eit_medium()


class TestScan:
    def test_vacuum(self, reference_cavity):
        scan = scan_shift(reference_cavity, VAC, np.linspace(-4, 4, 9) * MHZ)
        assert scan.fitted_slope == pytest.approx(1.0, abs=1e-12)
        assert scan.implied_S == pytest.approx(1.0, abs=1e-6)

    def test_linear_toy(self, reference_cavity):
        cfg = CavityConfig(1.0, 0.5, reference_cavity.reflectivity_R)
        toy = MediumSpec.linear_toy(11.0, OMEGA_RB_D2)
        scan = scan_shift(cfg, toy, np.linspace(-3, 3, 13) * MHZ)
        assert scan.implied_S == pytest.approx(6.0, rel=1e-7)

    def test_truncation(self, eit_cavity, eit_medium):
        grid = np.arange(-8, 9) * 0.5 * MHZ
        scan = scan_shift(eit_cavity, eit_medium, grid)
        assert len(scan.points) == 7
        assert max(abs(p.dw0_prime) for p in scan.points) <= 0.5 * MHZ
        assert len(scan.dropped) == 10
        full = scan_shift(eit_cavity, eit_medium, grid, truncate=False)
        assert len(full.points) == 17
        assert full.implied_S < scan.implied_S

    def test_points_sorted_and_zero_row(self, eit_cavity, eit_medium):
        scan = scan_shift(eit_cavity, eit_medium, [MHZ, 0.0, -MHZ])
        assert [p.dw0 for p in scan.points] == [-MHZ, 0.0, MHZ]
        assert scan.points[1].dw0_prime == 0.0

    def test_slope_in_unit_interval(self, eit_cavity, eit_medium):
        scan = scan_shift(eit_cavity, eit_medium, np.linspace(-1, 1, 9) * MHZ)
        assert 0 < scan.fitted_slope <= 1

    def test_empty_grid(self, eit_cavity, eit_medium):
        with pytest.raises(ParameterError):
            scan_shift(eit_cavity, eit_medium, [])


class TestCad:
    def test_enhancement_regression(self, cad_cavity, cad_medium):
        for hz, expected in frozen.CAD_ENHANCEMENT.items():
            res = solve_shift(cad_cavity, cad_medium, 2 * math.pi * hz)
            assert res.dw0_prime / res.dw0 == pytest.approx(expected, rel=1e-6)
            assert math.isnan(res.dw0_prime_linear)

    def test_enhancement_decreases(self, cad_cavity, cad_medium):
        dws = 2 * math.pi * np.geomspace(10, 1e5, 12)
        ratios = [solve_shift(cad_cavity, cad_medium, d).dw0_prime / d for d in dws]
        assert np.all(np.diff(ratios) < 0)
        assert ratios[0] > 10

    def test_scan_slope_above_one(self, cad_cavity, cad_medium):
        scan = cad_enhancement_scan(cad_cavity, cad_medium, 2 * math.pi * np.linspace(-1e4, 1e4, 9))
        assert scan.fitted_slope > 1

    def test_unit_group_index_boundary(self, cad_cavity):
        medium = tune_dual_raman(1.0, presets.cad_chi0(), presets.RAMAN_LINEWIDTH, OMEGA_RB_D2)
        scan = cad_enhancement_scan(cad_cavity, medium, 2 * math.pi * np.array([-1e3, 1e3]))
        assert scan.implied_S == pytest.approx(1.0, abs=1e-4)

    def test_requires_dual(self, cad_cavity, eit_medium):
        with pytest.raises(ParameterError):
            cad_enhancement_scan(cad_cavity, eit_medium, [1e3])

    def test_requires_small_group_index(self, cad_cavity):
        medium = tune_dual_raman(3.0, presets.cad_chi0(), presets.RAMAN_LINEWIDTH, OMEGA_RB_D2)
        with pytest.raises(ParameterError):
            cad_enhancement_scan(cad_cavity, medium, [1e3])


class TestGridOracle:
    @pytest.mark.parametrize("u", [-4.0, -1.3, 0.7, 2.5, 4.0])
    def test_eit(self, eit_cavity, eit_medium, u):
        dw0 = u * MHZ
        roots = intersection_grid(eit_cavity, eit_medium, dw0)
        x = solve_shift(eit_cavity, eit_medium, dw0).dw0_prime
        assert np.min(np.abs(roots - x)) <= eit_cavity.free_spectral_range / 1e5

    def test_linear_toy_single_root(self, reference_cavity):
        toy = MediumSpec.linear_toy(50.0, OMEGA_RB_D2)
        roots = intersection_grid(reference_cavity, toy, 5.9 * MHZ)
        assert roots.size == 1
        assert roots[0] == pytest.approx(MHZ, abs=reference_cavity.free_spectral_range / 1e5)


def test_two_routes_agree_for_lossless_medium(reference_cavity):
    """Spectral peak of the detuned cavity equals the solver's shift."""
    toy = MediumSpec.linear_toy(50.0, OMEGA_RB_D2)
    for u in (-4.0, 0.5, 2.0):
        res = solve_shift(reference_cavity, toy, u * MHZ)
        peak = find_resonance(reference_cavity, toy, cavity_shift=res.dw0, center=res.dw0_prime)
        assert peak.peak_center == pytest.approx(res.dw0_prime, rel=1e-6)
