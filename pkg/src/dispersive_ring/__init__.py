"""Ring cavity loaded with a dispersive medium.

Linewidth narrowing and shift reduction with slow-light media, and the
broadening and shift enhancement near the critically anomalous point.
"""

__version__ = "0.1.0"

from .cavity import (  # noqa: E402
    CavityConfig,
    SpectrumResult,
    find_resonance,
    linewidth_numeric,
    linewidth_ratio_analytic,
    spectrum,
    transmission,
    vacuum_linewidth,
)
from .media import MediumKind, MediumSpec, calibrate_eit, tune_dual_raman  # noqa: E402
from .sensitivity import (  # noqa: E402
    ShiftResult,
    ShiftScanResult,
    cad_enhancement_scan,
    length_to_dw0,
    scan_shift,
    shift_linear,
    solve_shift,
)

__all__ = [
    "CavityConfig",
    "MediumKind",
    "MediumSpec",
    "ShiftResult",
    "ShiftScanResult",
    "SpectrumResult",
    "__version__",
    "cad_enhancement_scan",
    "calibrate_eit",
    "find_resonance",
    "length_to_dw0",
    "linewidth_numeric",
    "linewidth_ratio_analytic",
    "scan_shift",
    "shift_linear",
    "solve_shift",
    "spectrum",
    "transmission",
    "tune_dual_raman",
    "vacuum_linewidth",
]
