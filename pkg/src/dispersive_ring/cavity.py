"""Ring cavity loaded with a dispersive medium.

Round-trip phase is always taken relative to the lock point ``omega_lock``:
with ``N ~ 1e6`` the absolute phase ``2 pi N`` would eat the whole mantissa.
Transmission is the Airy function normalized to a unit vacuum-medium peak at
the lock point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AboveThresholdError,
    ExtractionError,
    FormulaDomainError,
    ParameterError,
    WindowTooNarrowError,
)
from .media import C_LIGHT, OMEGA_RB_D2, TWO_PI, MediumSpec
from .numerics import extract_peak

MIN_SAMPLES = 16
MAX_WINDOW_DOUBLINGS = 10
# |1 + (n_g - 1) l/L| below this counts as the critically anomalous point
CAD_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CavityConfig:
    """Ring geometry, mirror and loss parameters.

    ``length_L`` is snapped so that the empty cavity is exactly resonant at
    ``omega_lock`` with order ``mode_N`` (the change is below half a
    wavelength). Passing ``mode_N`` explicitly checks it against the length.
    """

    length_L: float
    length_medium: float
    reflectivity_R: float
    excess_loss: float = 0.0
    omega_lock: float = OMEGA_RB_D2
    mode_N: int | None = None

    def __post_init__(self):
        if not self.length_L > 0:
            raise ParameterError("length_L", f"must be > 0, got {self.length_L}")
        if not 0 <= self.length_medium <= self.length_L:
            raise ParameterError(
                "length_medium", f"must lie in [0, length_L], got {self.length_medium}"
            )
        if not 0 < self.reflectivity_R < 1:
            raise ParameterError("reflectivity_R", f"must lie in (0, 1), got {self.reflectivity_R}")
        if not 0 <= self.excess_loss < 1:
            raise ParameterError("excess_loss", f"must lie in [0, 1), got {self.excess_loss}")
        if not self.omega_lock > 0:
            raise ParameterError("omega_lock", f"must be > 0, got {self.omega_lock}")

        order = self.omega_lock * self.length_L / (TWO_PI * C_LIGHT)
        if self.mode_N is None:
            n = max(1, round(order))
        else:
            n = int(self.mode_N)
            if n <= 0 or abs(n - order) > 0.5:
                raise ParameterError(
                    "mode_N", f"{self.mode_N} inconsistent with length (order {order:.3f})"
                )
        snapped = TWO_PI * n * C_LIGHT / self.omega_lock
        # a ring filled end to end stays filled after snapping
        filled = self.length_medium == self.length_L
        medium = snapped if filled else min(self.length_medium, snapped)
        object.__setattr__(self, "mode_N", n)
        object.__setattr__(self, "length_L", snapped)
        object.__setattr__(self, "length_medium", medium)

    @property
    def ell_over_L(self) -> float:
        return self.length_medium / self.length_L

    @property
    def free_spectral_range(self) -> float:
        """Empty-cavity FSR, 2 pi c / L (rad/s)."""
        return TWO_PI * C_LIGHT / self.length_L

    @property
    def round_trip_amplitude(self) -> float:
        """Vacuum-medium round-trip amplitude factor R * sqrt(1 - excess_loss)."""
        return self.reflectivity_R * math.sqrt(1.0 - self.excess_loss)


def airy_half_width_phase(amplitude: float) -> float:
    """Half of the phase FWHM of an Airy resonance: asin((1 - A) / (2 sqrt A))."""
    arg = (1.0 - amplitude) / (2.0 * math.sqrt(amplitude))
    if not -1.0 <= arg <= 1.0:
        raise FormulaDomainError(f"asin argument {arg:.4g} outside [-1, 1] (A = {amplitude:.4g})")
    return math.asin(arg)


def vacuum_linewidth(cfg: CavityConfig) -> float:
    """Analytic FWHM (rad/s) of the cavity with a vacuum medium."""
    return 2.0 * airy_half_width_phase(cfg.round_trip_amplitude) * 2.0 * C_LIGHT / cfg.length_L


def amplitude_for_linewidth(fwhm: float, length_L: float) -> float:
    """Round-trip amplitude factor giving an empty-cavity FWHM ``fwhm`` (rad/s)."""
    s = math.sin(fwhm * length_L / (4.0 * C_LIGHT))
    # (1 - A) / (2 sqrt A) = s  ->  sqrt A = sqrt(s^2 + 1) - s
    root = math.sqrt(s * s + 1.0) - s
    return root * root


def _medium_offset(cfg: CavityConfig, medium: MediumSpec) -> float:
    return cfg.omega_lock - medium.center


def round_trip_phase_delta(cfg: CavityConfig, medium: MediumSpec, dw, cavity_shift: float = 0.0):
    """Round-trip phase at ``omega_lock + dw`` minus the phase at ``omega_lock``.

    ``cavity_shift`` detunes the empty cavity: the length is changed so the
    vacuum resonance moves from ``omega_lock`` to ``omega_lock + cavity_shift``.
    """
    dw = np.asarray(dw, dtype=float)
    d0 = _medium_offset(cfg, medium)
    L, ell, w0 = cfg.length_L, cfg.length_medium, cfg.omega_lock
    dn = medium.index_excess(d0 + dw)
    dn0 = medium.index_excess(d0)
    phase = dw * (L - ell) / C_LIGHT + (dw * (1.0 + dn) + w0 * (dn - dn0)) * ell / C_LIGHT
    if cavity_shift:
        phase = phase - cavity_shift * L / C_LIGHT * (w0 + dw) / (w0 + cavity_shift)
    return phase if phase.ndim else float(phase)


def round_trip_factor(cfg: CavityConfig, medium: MediumSpec, dw):
    """Round-trip amplitude factor A = R * rho * sqrt(1 - excess_loss)."""
    dw = np.asarray(dw, dtype=float)
    alpha = medium.absorption(_medium_offset(cfg, medium) + dw)
    out = cfg.round_trip_amplitude * np.exp(-0.5 * np.asarray(alpha) * cfg.length_medium)
    return out if out.ndim else float(out)


def transmission(cfg: CavityConfig, medium: MediumSpec, dw, cavity_shift: float = 0.0):
    """Airy transmission at detuning ``dw`` from the lock point.

    Normalized so the vacuum-medium cavity transmits 1 at the lock point;
    gain media can exceed 1.

    Raises
    ------
    AboveThresholdError
        If the round-trip factor reaches 1 anywhere in ``dw``.
    """
    a = np.asarray(round_trip_factor(cfg, medium, dw))
    if np.any(a >= 1.0):
        raise AboveThresholdError(
            f"round-trip gain {float(np.max(a)):.6f} >= 1: passive-cavity model invalid"
        )
    a0 = cfg.round_trip_amplitude
    phase = np.asarray(round_trip_phase_delta(cfg, medium, dw, cavity_shift))
    out = (1.0 - a0) ** 2 / ((1.0 - a) ** 2 + 4.0 * a * np.sin(0.5 * phase) ** 2)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class SpectrumResult:
    detunings: np.ndarray
    transmission: np.ndarray
    peak_center: float
    fwhm: float
    peak_height: float


def spectrum(
    cfg: CavityConfig,
    medium: MediumSpec,
    dw_min: float,
    dw_max: float,
    samples: int,
    cavity_shift: float = 0.0,
) -> SpectrumResult:
    """Sample the transmission uniformly and extract the resonance.

    The window must contain exactly one resonance; otherwise
    :class:`WindowTooNarrowError` is raised.
    """
    if int(samples) != samples or samples < MIN_SAMPLES:
        raise ParameterError("samples", f"need an integer >= {MIN_SAMPLES}, got {samples}")
    if not dw_min < dw_max:
        raise ParameterError("dw_min", f"window [{dw_min}, {dw_max}] is empty")
    xs = np.linspace(dw_min, dw_max, int(samples))
    ys = transmission(cfg, medium, xs, cavity_shift)
    try:
        peak = extract_peak(xs, ys)
    except ExtractionError as exc:
        raise WindowTooNarrowError(str(exc), side=exc.side) from exc
    return SpectrumResult(xs, ys, peak.center, peak.fwhm, peak.height)


def linewidth_ratio_analytic(cfg: CavityConfig, medium: MediumSpec) -> float:
    """Loaded-to-vacuum linewidth ratio from the closed-form expression.

    ``|asin[(1 - A)/(2 sqrt A)] / asin[(1 - A0)/(2 sqrt A0)]| / |1 + (n_g - 1) l/L|``
    with ``A = A0 * rho`` and ``rho``, ``n_g`` taken at the lock point.
    Returns ``inf`` when the dispersive denominator vanishes (below
    ``CAD_TOLERANCE``).
    """
    a0 = cfg.round_trip_amplitude
    a = float(round_trip_factor(cfg, medium, 0.0))
    if a <= 0:
        raise FormulaDomainError("round-trip factor must be positive")
    loss_ratio = abs(airy_half_width_phase(a) / airy_half_width_phase(a0))
    n_g = medium.group_index(_medium_offset(cfg, medium))
    denom = abs(1.0 + (n_g - 1.0) * cfg.ell_over_L)
    if denom <= CAD_TOLERANCE:
        return math.inf
    return loss_ratio / denom


def find_resonance(
    cfg: CavityConfig,
    medium: MediumSpec,
    cavity_shift: float = 0.0,
    center: float = 0.0,
    samples: int = 2001,
) -> SpectrumResult:
    """Spectrum around one resonance with automatic windowing.

    The first window spans three predicted linewidths around ``center``;
    it is doubled until both half-maximum crossings are found, at most ten
    times and never beyond half an FSR on either side.
    """
    width = vacuum_linewidth(cfg)
    try:
        ratio = linewidth_ratio_analytic(cfg, medium)
        if math.isfinite(ratio) and ratio > 0:
            width *= ratio
    except FormulaDomainError:
        pass
    # beyond half an FSR the window would hold a neighbouring order
    cap = 0.5 * cfg.free_spectral_range
    half_window = min(1.5 * width, cap)
    last_error: WindowTooNarrowError | None = None
    for _ in range(MAX_WINDOW_DOUBLINGS + 1):
        try:
            return spectrum(
                cfg, medium, center - half_window, center + half_window, samples, cavity_shift
            )
        except WindowTooNarrowError as exc:
            last_error = exc
            if half_window >= cap:
                break
            half_window = min(2.0 * half_window, cap)
    raise WindowTooNarrowError(
        f"no complete resonance within half an FSR of the lock point: {last_error}",
        side=last_error.side if last_error else None,
    )


def linewidth_numeric(cfg: CavityConfig, medium: MediumSpec, samples: int = 2001) -> float:
    """FWHM (rad/s) of the lock-point resonance, measured on sampled spectra."""
    return find_resonance(cfg, medium, samples=samples).fwhm
