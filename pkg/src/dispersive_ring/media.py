"""Complex susceptibility models for the intra-cavity medium.

All spectral work happens in detuning coordinates ``delta = omega - center``.
The optical carrier (~2.4e15 rad/s) only ever appears as a multiplier, so
index differences of order 1e-7 keep their full double-precision mantissa.

Models (``chi0`` sets the strength, ``gamma_opt`` is Gamma, ``gamma_ground``
is gamma, ``rabi_pump`` is Omega):

* EIT Lambda system, pump on one-photon resonance::

      chi = chi0 * (i Gamma/2) / [(Gamma/2 - i delta) + (Omega^2/4) / (gamma - i delta)]

* Raman gain, one peak::

      chi = -i chi0 (Gamma/2) / (Gamma/2 - i delta)

  and the dual-peak variant as the sum of two such lines at
  ``delta = +/- peak_offset``.

* ``LINEAR_TOY`` is a lossless medium with ``n = 1 + slope * delta``.

Time dependence is exp(-i omega t), so Im chi > 0 absorbs.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .errors import CalibrationError, ModelBreakdownError, ParameterError
from .numerics import Bracket, find_root

C_LIGHT = 299_792_458.0  # m/s
TWO_PI = 2.0 * math.pi

# Rb D2 line, used as the default carrier
OMEGA_RB_D2 = TWO_PI * 384.2304844685e12

# Effective optical width of a Doppler-broadened hot Rb cell and a
# transit-time ground-state decoherence; used when calibrating EIT.
DEFAULT_GAMMA_OPT = TWO_PI * 500e6
DEFAULT_GAMMA_GROUND = TWO_PI * 10e3

# Largest susceptibility amplitude the dilute-medium model is trusted with.
CHI0_MAX = 1e-4


class MediumKind(enum.Enum):
    VACUUM = "vacuum"
    LINEAR_TOY = "linear_toy"
    EIT_LAMBDA = "eit_lambda"
    RAMAN_GAIN_SINGLE = "raman_gain_single"
    RAMAN_GAIN_DUAL = "raman_gain_dual"


class StepSizeWarning(UserWarning):
    """Finite-difference step is not small against the spectral feature."""


@dataclass(frozen=True)
class MediumSpec:
    """Parametric intra-cavity medium.

    Rates are angular frequencies in rad/s; ``slope`` (LINEAR_TOY only) is
    dn/domega in seconds. Fields not used by ``kind`` are ignored.
    """

    kind: MediumKind
    center: float
    chi0: float = 0.0
    gamma_opt: float = 0.0
    gamma_ground: float = 0.0
    rabi_pump: float = 0.0
    peak_offset: float = 0.0
    slope: float = 0.0

    def __post_init__(self):
        if not isinstance(self.kind, MediumKind):
            object.__setattr__(self, "kind", MediumKind(self.kind))
        if not self.center > 0:
            raise ParameterError("center", f"must be > 0, got {self.center}")
        if self.kind in (
            MediumKind.EIT_LAMBDA,
            MediumKind.RAMAN_GAIN_SINGLE,
            MediumKind.RAMAN_GAIN_DUAL,
        ):
            if not self.chi0 >= 0:
                raise ParameterError("chi0", f"must be >= 0, got {self.chi0}")
            if not self.gamma_opt > 0:
                raise ParameterError("gamma_opt", f"must be > 0, got {self.gamma_opt}")
        if self.kind is MediumKind.EIT_LAMBDA:
            if not self.gamma_ground >= 0:
                raise ParameterError("gamma_ground", f"must be >= 0, got {self.gamma_ground}")
            if not self.rabi_pump >= 0:
                raise ParameterError("rabi_pump", f"must be >= 0, got {self.rabi_pump}")
        if self.kind is MediumKind.RAMAN_GAIN_DUAL and not self.peak_offset >= 0:
            raise ParameterError("peak_offset", f"must be >= 0, got {self.peak_offset}")
        if self.kind is MediumKind.LINEAR_TOY and not math.isfinite(self.slope):
            raise ParameterError("slope", "must be finite")

    # -- constructors -----------------------------------------------------

    @classmethod
    def vacuum(cls, center: float = OMEGA_RB_D2) -> "MediumSpec":
        return cls(MediumKind.VACUUM, center)

    @classmethod
    def linear_toy(cls, group_index: float, center: float = OMEGA_RB_D2) -> "MediumSpec":
        """Lossless linear medium with the given group index at ``center``."""
        return cls(MediumKind.LINEAR_TOY, center, slope=(group_index - 1.0) / center)

    # -- susceptibility and its derivative, in detuning -------------------

    def chi(self, delta):
        """Complex susceptibility at detuning ``delta`` (scalar or array)."""
        d = np.asarray(delta, dtype=float)
        kind = self.kind
        if kind is MediumKind.VACUUM:
            out = np.zeros_like(d, dtype=complex)
        elif kind is MediumKind.LINEAR_TOY:
            s = self.slope * d
            out = (2.0 * s + s * s).astype(complex)
        elif kind is MediumKind.EIT_LAMBDA:
            out = self._eit(d)[0]
        elif kind is MediumKind.RAMAN_GAIN_SINGLE:
            out = _gain_line(d, self.chi0, 0.5 * self.gamma_opt)[0]
        else:
            half = 0.5 * self.gamma_opt
            out = (
                _gain_line(d - self.peak_offset, self.chi0, half)[0]
                + _gain_line(d + self.peak_offset, self.chi0, half)[0]
            )
        out = np.asarray(out)
        return out if out.ndim else complex(out)

    def dchi(self, delta):
        """d(chi)/d(omega) at detuning ``delta``, hand-differentiated."""
        d = np.asarray(delta, dtype=float)
        kind = self.kind
        if kind is MediumKind.VACUUM:
            out = np.zeros_like(d, dtype=complex)
        elif kind is MediumKind.LINEAR_TOY:
            out = (2.0 * self.slope * (1.0 + self.slope * d)).astype(complex)
        elif kind is MediumKind.EIT_LAMBDA:
            out = self._eit(d)[1]
        elif kind is MediumKind.RAMAN_GAIN_SINGLE:
            out = _gain_line(d, self.chi0, 0.5 * self.gamma_opt)[1]
        else:
            half = 0.5 * self.gamma_opt
            out = (
                _gain_line(d - self.peak_offset, self.chi0, half)[1]
                + _gain_line(d + self.peak_offset, self.chi0, half)[1]
            )
        out = np.asarray(out)
        return out if out.ndim else complex(out)

    def _eit(self, d):
        half = 0.5 * self.gamma_opt
        if self.rabi_pump == 0.0:
            # pump off: two-level Lorentzian (avoids 0/0 at gamma = delta = 0)
            return _absorption_line(d, self.chi0, half)
        g = self.gamma_ground - 1j * d
        num = 1j * half * g
        den = (half - 1j * d) * g + 0.25 * self.rabi_pump**2
        dnum = half
        dden = -1j * (self.gamma_ground + half - 2j * d)
        chi = self.chi0 * num / den
        dchi = self.chi0 * (dnum * den - num * dden) / (den * den)
        return chi, dchi

    # -- refractive index -------------------------------------------------

    def index_excess(self, delta):
        """n - 1 at detuning ``delta``, computed without cancellation."""
        if self.kind is MediumKind.LINEAR_TOY:
            out = self.slope * np.asarray(delta, dtype=float)
            return out if out.ndim else float(out)
        chi = np.asarray(self.chi(delta))
        root = _sqrt_one_plus(chi)
        out = (chi / (root + 1.0)).real
        return out if out.ndim else float(out)

    def index_slope(self, delta):
        """dn/domega at detuning ``delta``."""
        if self.kind is MediumKind.LINEAR_TOY:
            out = np.full_like(np.asarray(delta, dtype=float), self.slope)
            return out if out.ndim else float(out)
        chi = np.asarray(self.chi(delta))
        out = (np.asarray(self.dchi(delta)) / (2.0 * _sqrt_one_plus(chi))).real
        return out if out.ndim else float(out)

    def absorption(self, delta):
        """Intensity absorption coefficient alpha (1/m); negative means gain."""
        chi = np.asarray(self.chi(delta))
        n = 1.0 + np.asarray(self.index_excess(delta))
        out = (self.center + np.asarray(delta, dtype=float)) / C_LIGHT * chi.imag / n
        return out if out.ndim else float(out)

    def group_index(self, delta):
        """1 + omega * dn/domega at detuning ``delta``."""
        omega = self.center + np.asarray(delta, dtype=float)
        out = 1.0 + omega * np.asarray(self.index_slope(delta))
        return out if out.ndim else float(out)

    def feature_width(self) -> float:
        """Narrowest spectral scale of the model (inf for featureless media)."""
        kind = self.kind
        if kind in (MediumKind.VACUUM, MediumKind.LINEAR_TOY):
            return math.inf
        if kind is MediumKind.EIT_LAMBDA:
            if self.rabi_pump == 0.0:
                return self.gamma_opt
            hole = 2.0 * self.gamma_ground + self.rabi_pump**2 / self.gamma_opt
            return min(self.gamma_opt, hole)
        if kind is MediumKind.RAMAN_GAIN_DUAL and self.peak_offset > 0:
            return min(self.gamma_opt, 2.0 * self.peak_offset)
        return self.gamma_opt


def _gain_line(d, chi0, half):
    den = half - 1j * d
    return -1j * chi0 * half / den, chi0 * half / (den * den)


def _absorption_line(d, chi0, half):
    den = half - 1j * d
    return 1j * chi0 * half / den, -chi0 * half / (den * den)


def _sqrt_one_plus(chi):
    base = 1.0 + chi
    if np.any(base.real <= 0):
        raise ModelBreakdownError(
            "1 + Re[chi] <= 0: susceptibility too strong for the dilute-medium model"
        )
    return np.sqrt(base)


@dataclass(frozen=True)
class OpticalResponse:
    chi: complex
    n: float
    alpha: float
    n_g: float


def susceptibility(spec: MediumSpec, omega: float) -> complex:
    if not omega > 0:
        raise ParameterError("omega", f"must be > 0, got {omega}")
    return spec.chi(omega - spec.center)


def optical_response(spec: MediumSpec, omega: float) -> OpticalResponse:
    """Susceptibility, index, absorption and group index at one frequency."""
    if not omega > 0:
        raise ParameterError("omega", f"must be > 0, got {omega}")
    delta = omega - spec.center
    return OpticalResponse(
        chi=spec.chi(delta),
        n=1.0 + spec.index_excess(delta),
        alpha=spec.absorption(delta),
        n_g=spec.group_index(delta),
    )


def group_index_fd(spec: MediumSpec, omega: float, h: float) -> float:
    """Group index by central differences of the index, step ``h`` in rad/s.

    Independent of the analytic derivative; meant as a cross-check. Emits
    :class:`StepSizeWarning` when ``h`` is not below a tenth of the
    medium's narrowest feature.
    """
    if not h > 0:
        raise ParameterError("h", f"must be > 0, got {h}")
    if h >= spec.feature_width() / 10.0:
        warnings.warn(
            f"step {h:.3g} rad/s is not small against the feature width "
            f"{spec.feature_width():.3g} rad/s",
            StepSizeWarning,
            stacklevel=2,
        )
    delta = omega - spec.center
    dn = spec.index_excess(delta + h) - spec.index_excess(delta - h)
    return 1.0 + omega * dn / (2.0 * h)


def effective_group_index(spec: MediumSpec, omega0: float, dw: float) -> float:
    """Finite-span group index between ``omega0`` and ``omega0 + dw``.

    ``1 + (omega0 + dw) * [n(omega0 + dw) - n(omega0)] / dw``; the ``dw = 0``
    limit is the local group index at ``omega0``.
    """
    d0 = omega0 - spec.center
    if dw == 0.0:
        return 1.0 + omega0 * spec.index_slope(d0)
    dn = spec.index_excess(d0 + dw) - spec.index_excess(d0)
    return 1.0 + (omega0 + dw) * dn / dw


def local_group_index(spec: MediumSpec, omega: float) -> float:
    return spec.group_index(omega - spec.center)


# -- derived spectral widths ----------------------------------------------


def eit_linewidth(spec: MediumSpec) -> float:
    """FWHM of the transparency dip in Im[chi] (rad/s).

    The dip is measured at half depth between the line-center absorption
    and the absorption maximum on the dip's shoulder. Returns 0 when the
    pump is off (no dip).
    """
    if spec.kind is not MediumKind.EIT_LAMBDA:
        raise ParameterError("kind", "EIT linewidth is defined for EIT_LAMBDA only")
    if spec.rabi_pump == 0.0 or spec.chi0 == 0.0:
        return 0.0

    def im(d):
        return float(np.imag(spec.chi(d)) / spec.chi0)

    # the shoulder lies below ~ Omega/2 + Gamma; locate it on a log grid first
    top = spec.rabi_pump + spec.gamma_opt
    grid = np.geomspace(top * 1e-9, top, 2001)
    vals = np.imag(spec.chi(grid)) / spec.chi0
    k = int(np.argmax(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    shoulder = optimize.minimize_scalar(
        lambda d: -im(d), bounds=(lo, hi), method="bounded", options={"xatol": lo * 1e-10}
    )
    peak = -shoulder.fun
    floor = im(0.0)
    if peak <= floor:
        return 0.0
    level = 0.5 * (peak + floor)
    half = find_root(lambda d: im(d) - level, Bracket.of(lambda d: im(d) - level, 0.0, shoulder.x), 1e-6)
    return 2.0 * half


def dispersion_bandwidth(spec: MediumSpec) -> float:
    """Full width of the dispersive feature around line center (rad/s).

    EIT: the transparency width. Dual Raman gain with anomalous center: the
    span over which the local group index stays below 1. Single Raman gain:
    the gain linewidth. Featureless media: inf.
    """
    kind = spec.kind
    if kind in (MediumKind.VACUUM, MediumKind.LINEAR_TOY):
        return math.inf
    if kind is MediumKind.EIT_LAMBDA:
        return eit_linewidth(spec) if spec.rabi_pump > 0 else spec.gamma_opt
    if kind is MediumKind.RAMAN_GAIN_DUAL and spec.peak_offset > 0:
        if spec.group_index(0.0) < 1.0:
            f = lambda d: spec.group_index(d) - 1.0  # noqa: E731
            return 2.0 * find_root(f, Bracket.of(f, 0.0, spec.peak_offset), 1e-3)
        return 2.0 * spec.peak_offset
    return spec.gamma_opt


# -- calibration ----------------------------------------------------------


def calibrate_eit(
    target_eit_linewidth: float,
    target_ng: float,
    omega0: float,
    gamma_opt: float = DEFAULT_GAMMA_OPT,
    gamma_ground: float = DEFAULT_GAMMA_GROUND,
    chi0_max: float = CHI0_MAX,
) -> MediumSpec:
    """EIT medium with a prescribed transparency width and center group index.

    Solves the two conditions jointly for ``(chi0, rabi_pump)`` at fixed
    ``gamma_opt`` and ``gamma_ground``. Both targets are met to 0.1 %.

    Raises
    ------
    CalibrationError
        If the solution needs ``chi0 > chi0_max`` or the width is
        unreachable (narrower than ``2 * gamma_ground``).
    """
    if not target_eit_linewidth > 0:
        raise ParameterError("target_eit_linewidth", "must be > 0")
    if not target_ng >= 1:
        raise ParameterError("target_ng", f"must be >= 1, got {target_ng}")
    if not omega0 > 0:
        raise ParameterError("omega0", "must be > 0")
    if not gamma_opt > 0:
        raise ParameterError("gamma_opt", "must be > 0")

    base = MediumSpec(
        MediumKind.EIT_LAMBDA, omega0, chi0=0.0, gamma_opt=gamma_opt, gamma_ground=gamma_ground
    )
    # In the Gamma >> width limit the dip is a Lorentzian hole of half width
    # gamma + Omega^2/(2 Gamma); these seed the joint solve.
    hole = 0.5 * target_eit_linewidth - gamma_ground
    if hole <= 0:
        raise CalibrationError(
            "EIT width below the ground-decoherence floor 2*gamma_ground",
            best_residual=abs(2 * gamma_ground / target_eit_linewidth - 1.0),
        )
    rabi_guess = math.sqrt(2.0 * gamma_opt * hole)
    if target_ng == 1.0:
        return replace(base, rabi_pump=rabi_guess)
    chi0_guess = (target_ng - 1.0) * target_eit_linewidth**2 / (2.0 * omega0 * hole)

    def residuals(p):
        spec = replace(base, chi0=math.exp(p[0]), rabi_pump=math.exp(p[1]))
        return [
            eit_linewidth(spec) / target_eit_linewidth - 1.0,
            (spec.group_index(0.0) - 1.0) / (target_ng - 1.0) - 1.0,
        ]

    def best_in_box():
        chi0 = min(chi0_guess, chi0_max)
        return max(abs(r) for r in residuals([math.log(chi0), math.log(rabi_guess)]))

    if chi0_guess > 10.0 * chi0_max:
        raise CalibrationError("targets need chi0 beyond the search box", best_in_box())
    try:
        sol = optimize.root(residuals, [math.log(chi0_guess), math.log(rabi_guess)], method="hybr")
    except ModelBreakdownError as exc:
        raise CalibrationError(f"model breakdown during calibration: {exc}", best_in_box())
    chi0, rabi = (math.exp(v) for v in sol.x)
    worst = max(abs(r) for r in residuals(sol.x))
    if chi0 > chi0_max:
        raise CalibrationError("targets need chi0 beyond the search box", best_in_box())
    if worst > 1e-3:
        raise CalibrationError("calibration did not converge", worst)
    return replace(base, chi0=chi0, rabi_pump=rabi)


def tune_dual_raman(
    target_ng: float,
    chi0: float,
    gamma_opt: float,
    omega0: float,
) -> MediumSpec:
    """Dual-peak Raman gain medium whose center group index equals ``target_ng``.

    Root-finds the peak half-separation on ``[0, sqrt(3) * gamma_opt / 2]``,
    the branch on which the center group index falls monotonically from its
    single-peak value to its minimum.
    """
    base = MediumSpec(MediumKind.RAMAN_GAIN_DUAL, omega0, chi0=chi0, gamma_opt=gamma_opt)
    hi = math.sqrt(3.0) * 0.5 * gamma_opt

    def excess(offset):
        return replace(base, peak_offset=offset).group_index(0.0) - target_ng

    f_lo, f_hi = excess(0.0), excess(hi)
    if f_lo * f_hi > 0:
        best = min(abs(f_lo), abs(f_hi))
        raise CalibrationError(
            f"center group index {target_ng} not reachable with chi0={chi0:.3g}", best
        )
    offset = find_root(excess, Bracket(0.0, hi, f_lo, f_hi), hi * 1e-13)
    return replace(base, peak_offset=offset)
