"""Parameter sets for the experimental setup being modeled.

A 10 cm Rb cell inside a 100 cm ring whose empty linewidth is 3 MHz
(finesse ~100). The EIT scenario adds enough excess loss for an 8 MHz
vacuum-medium linewidth and an EIT medium with a 1 MHz window and group
index 50. The CAD scenario fills the ring with a dual-peaked Raman gain
medium tuned to zero group index at line center.
"""

from __future__ import annotations

from .cavity import CavityConfig, amplitude_for_linewidth
from .media import OMEGA_RB_D2, TWO_PI, MediumSpec, calibrate_eit, tune_dual_raman

MHZ = TWO_PI * 1e6

CAVITY_LENGTH = 1.0
CELL_LENGTH = 0.1
EMPTY_LINEWIDTH = 3.0 * MHZ
LOADED_LINEWIDTH = 8.0 * MHZ
EIT_LINEWIDTH = 1.0 * MHZ
EIT_GROUP_INDEX = 50.0

# CAD scenario: each gain line 1 MHz wide, strength twice the minimum that
# can reach zero group index, vacuum round-trip amplitude 0.85 to stay
# below threshold at the gain peaks.
RAMAN_LINEWIDTH = 1.0 * MHZ
CAD_STRENGTH = 2.0
CAD_ROUND_TRIP = 0.85


def mirror_reflectivity(empty_linewidth: float = EMPTY_LINEWIDTH, length_L: float = CAVITY_LENGTH):
    """Reflectivity of each coupling mirror for a given empty-cavity FWHM (rad/s)."""
    return amplitude_for_linewidth(empty_linewidth, length_L)


def excess_loss_for(amplitude: float, reflectivity: float) -> float:
    """Excess round-trip loss that brings ``R`` down to a vacuum factor ``amplitude``."""
    return 1.0 - (amplitude / reflectivity) ** 2


def reference_cavity(omega_lock: float = OMEGA_RB_D2) -> CavityConfig:
    return CavityConfig(
        length_L=CAVITY_LENGTH,
        length_medium=CELL_LENGTH,
        reflectivity_R=mirror_reflectivity(),
        omega_lock=omega_lock,
    )


def eit_cavity(
    loaded_linewidth: float = LOADED_LINEWIDTH, omega_lock: float = OMEGA_RB_D2
) -> CavityConfig:
    """Reference cavity with excess loss raising the vacuum-medium FWHM to ``loaded_linewidth``."""
    r = mirror_reflectivity()
    a = amplitude_for_linewidth(loaded_linewidth, CAVITY_LENGTH)
    return CavityConfig(
        length_L=CAVITY_LENGTH,
        length_medium=CELL_LENGTH,
        reflectivity_R=r,
        excess_loss=excess_loss_for(a, r),
        omega_lock=omega_lock,
    )


def eit_medium(omega0: float = OMEGA_RB_D2) -> MediumSpec:
    return calibrate_eit(EIT_LINEWIDTH, EIT_GROUP_INDEX, omega0)


def cad_cavity(omega_lock: float = OMEGA_RB_D2) -> CavityConfig:
    """Ring filled end to end by the medium (medium length = L)."""
    r = mirror_reflectivity()
    return CavityConfig(
        length_L=CAVITY_LENGTH,
        length_medium=CAVITY_LENGTH,
        reflectivity_R=r,
        excess_loss=excess_loss_for(CAD_ROUND_TRIP, r),
        omega_lock=omega_lock,
    )


def cad_chi0(gamma_opt: float = RAMAN_LINEWIDTH, omega0: float = OMEGA_RB_D2) -> float:
    # zero center group index is reachable once omega0 * chi0 / (4 * gamma_opt) >= 1
    return CAD_STRENGTH * 4.0 * gamma_opt / omega0


def cad_medium(target_ng: float = 0.0, omega0: float = OMEGA_RB_D2) -> MediumSpec:
    return tune_dual_raman(target_ng, cad_chi0(RAMAN_LINEWIDTH, omega0), RAMAN_LINEWIDTH, omega0)


def mhz(value: float) -> float:
    """Angular frequency (rad/s) to ordinary frequency in MHz."""
    return value / MHZ


__all__ = [
    "MHZ",
    "cad_cavity",
    "cad_chi0",
    "cad_medium",
    "eit_cavity",
    "eit_medium",
    "excess_loss_for",
    "mhz",
    "mirror_reflectivity",
    "reference_cavity",
]
