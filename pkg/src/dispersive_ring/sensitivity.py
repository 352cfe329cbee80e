"""Resonance shift of the loaded cavity for a given empty-cavity shift.

An empty-cavity shift ``dw0`` (a length change) moves the loaded resonance
by ``x`` satisfying

    x * [1 + (n_g_eff(x) - 1) * l/L] = dw0,
    n_g_eff(x) = 1 + (w0 + x) * [n(w0 + x) - n(w0)] / x.

Multiplied out, the residual ``x + (w0 + x) [n(w0 + x) - n(w0)] l/L - dw0``
is smooth through ``x = 0``, so the solver never divides by ``x``. Roots
are followed by continuation from ``x = 0`` so that a scan stays on the
branch a continuously tuned lock would track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cavity import CAD_TOLERANCE, CavityConfig, round_trip_factor
from .errors import (
    AboveThresholdError,
    CadDivergenceError,
    ParameterError,
    SolverRangeError,
)
from .media import MediumKind, MediumSpec, dispersion_bandwidth, effective_group_index
from .numerics import Bracket, find_root, fit_slope_through_origin

# absolute residual budget for the self-consistent equation, rad/s
SHIFT_TOLERANCE = 2.0 * math.pi * 10.0
MAX_MARCH_STEPS = 400


def shift_linear(n_g: float, ell_over_L: float, dw0: float) -> float:
    """Loaded shift under locally linear dispersion: ``dw0 / [1 + (n_g - 1) l/L]``."""
    denom = 1.0 + (n_g - 1.0) * ell_over_L
    if abs(denom) <= CAD_TOLERANCE:
        raise CadDivergenceError(
            f"1 + (n_g - 1) l/L = {denom:.3g}: the linear shift diverges at this group index"
        )
    return dw0 / denom


def sensitivity_factor(n_g: float, ell_over_L: float) -> float:
    return 1.0 + (n_g - 1.0) * ell_over_L


def length_to_dw0(cfg: CavityConfig, dL: float) -> float:
    """Empty-cavity resonance shift for a length change ``dL`` (first order)."""
    return -cfg.omega_lock * dL / cfg.length_L


@dataclass(frozen=True)
class ShiftResult:
    dw0: float
    dw0_prime_linear: float
    dw0_prime: float
    n_g_eff: float
    n_g_local: float
    S_linear: float
    residual: float
    fold: bool = False


@dataclass(frozen=True)
class ShiftScanResult:
    points: tuple[ShiftResult, ...]
    fitted_slope: float
    implied_S: float
    dropped: tuple[float, ...] = field(default=())

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])


class _ShiftEquation:
    """Residual ``G(x) - dw0`` with ``G(x) = x + (w0 + x) dn(x) l/L``."""

    def __init__(self, cfg: CavityConfig, medium: MediumSpec):
        self.cfg = cfg
        self.medium = medium
        self.d0 = cfg.omega_lock - medium.center
        self.w0 = cfg.omega_lock
        self.weight = cfg.ell_over_L
        self.dn0 = medium.index_excess(self.d0)

    def G(self, x):
        dn = np.asarray(self.medium.index_excess(self.d0 + x)) - self.dn0
        return x + (self.w0 + x) * dn * self.weight


def _march(eq: _ShiftEquation, x_start: float, dw0: float, limit: float, tol_x: float):
    """Walk outward from ``x_start`` to the first crossing of ``G = dw0``.

    Returns ``(x, fold)``; ``fold`` is set when G turned back on itself
    between the start and the crossing, meaning the branch followed from
    the start point ended and the root lies on another branch.
    """
    f = lambda x: float(eq.G(x)) - dw0  # noqa: E731
    f_start = f(x_start)
    if f_start == 0.0:
        return x_start, False
    # derivative-free direction choice: probe both sides, go where |f| drops
    step = max(min(abs(f_start), 1e-3 * limit), tol_x)
    direction = 1.0 if abs(f(x_start + step)) < abs(f(x_start - step)) else -1.0

    fold = False
    x_prev, f_prev = x_start, f_start
    for _ in range(MAX_MARCH_STEPS):
        x_next = x_prev + direction * step
        if abs(x_next) > limit:
            x_next = math.copysign(limit, x_next)
        f_next = f(x_next)
        if (f_next - f_prev) * (-f_start) < 0:
            fold = True
        if f_next == 0.0 or (f_next < 0) != (f_prev < 0):
            lo, hi, f_lo, f_hi = x_prev, x_next, f_prev, f_next
            if lo > hi:
                lo, hi, f_lo, f_hi = hi, lo, f_hi, f_lo
            if f_next == 0.0:
                return x_next, fold
            return find_root(f, Bracket(lo, hi, f_lo, f_hi), tol_x), fold
        if abs(x_next) >= limit:
            break
        x_prev, f_prev = x_next, f_next
        step *= 1.5
    raise SolverRangeError(
        f"no root of the shift equation for dw0 = {dw0:.6g} rad/s within +/-{limit:.6g} rad/s"
    )


def solve_shift(
    cfg: CavityConfig,
    medium: MediumSpec,
    dw0: float,
    seed: float = 0.0,
    tolerance: float = SHIFT_TOLERANCE,
) -> ShiftResult:
    """Self-consistent loaded-cavity shift for an empty-cavity shift ``dw0``.

    Parameters
    ----------
    cfg, medium
        Cavity and medium; the medium should be centered on the lock point.
    dw0 : float
        Empty-cavity shift (rad/s).
    seed : float
        Loaded shift already known on the same branch (the previous point of
        a scan). The default 0 is the exact solution at ``dw0 = 0``.
    tolerance : float
        Bound on the absolute residual of the shift equation (rad/s).
    """
    if np.any(np.asarray(round_trip_factor(cfg, medium, 0.0)) >= 1.0):
        raise AboveThresholdError("round-trip gain >= 1 at the lock point")
    eq = _ShiftEquation(cfg, medium)
    n_g = medium.group_index(eq.d0)
    s_lin = sensitivity_factor(n_g, cfg.ell_over_L)
    try:
        x_lin = shift_linear(n_g, cfg.ell_over_L, dw0)
    except CadDivergenceError:
        x_lin = math.nan

    if dw0 == 0.0:
        return ShiftResult(0.0, 0.0, 0.0, n_g, n_g, s_lin, 0.0)

    limit = 0.5 * cfg.free_spectral_range
    # x-tolerance: tight enough that |G - dw0| stays well inside ``tolerance``
    tol_x = max(min(1e-3 * tolerance, 1e-7 * abs(dw0)), 1e-9)
    x, fold = _march(eq, seed, dw0, limit, tol_x)
    residual = abs(float(eq.G(x)) - dw0)
    if residual > tolerance:
        # secant refinement from the bracket end can stall on steep wings
        x, fold = _march(eq, x, dw0, limit, tol_x * 1e-3)
        residual = abs(float(eq.G(x)) - dw0)
    return ShiftResult(
        dw0=dw0,
        dw0_prime_linear=x_lin,
        dw0_prime=x,
        n_g_eff=effective_group_index(medium, cfg.omega_lock, x),
        n_g_local=medium.group_index(eq.d0 + x),
        S_linear=s_lin,
        residual=residual,
        fold=fold,
    )


def _continuation(cfg, medium, values, guard):
    points, dropped = [], []
    seed = 0.0
    for i, dw0 in enumerate(values):
        res = solve_shift(cfg, medium, dw0, seed=seed)
        if abs(res.dw0_prime) > guard:
            dropped.extend(values[i:])
            break
        points.append(res)
        seed = res.dw0_prime
    return points, dropped


def scan_shift(cfg: CavityConfig, medium: MediumSpec, dw0_grid, truncate: bool = True) -> ShiftScanResult:
    """Solve the shift over a grid and fit the slope through the origin.

    The grid is walked outward from zero on each side, seeding every solve
    with its neighbour. With ``truncate`` the walk stops at the first point
    whose loaded shift leaves the medium's dispersive window (half the
    dispersion bandwidth); the remaining points are listed in ``dropped``.
    """
    grid = np.unique(np.asarray(dw0_grid, dtype=float))
    if grid.size == 0:
        raise ParameterError("dw0_grid", "empty grid")
    guard = 0.5 * dispersion_bandwidth(medium) if truncate else math.inf

    positive = [float(v) for v in grid if v > 0]
    negative = [float(v) for v in grid[::-1] if v < 0]
    pos_pts, pos_drop = _continuation(cfg, medium, positive, guard)
    neg_pts, neg_drop = _continuation(cfg, medium, negative, guard)
    points = neg_pts[::-1]
    if np.any(grid == 0.0):
        points.append(solve_shift(cfg, medium, 0.0))
    points.extend(pos_pts)

    xs = [p.dw0 for p in points]
    ys = [p.dw0_prime for p in points]
    slope = fit_slope_through_origin(xs, ys)
    return ShiftScanResult(
        points=tuple(points),
        fitted_slope=slope,
        implied_S=1.0 / slope if slope != 0 else math.inf,
        dropped=tuple(sorted(neg_drop + pos_drop)),
    )


def cad_enhancement_scan(cfg: CavityConfig, medium: MediumSpec, dw0_grid) -> ShiftScanResult:
    """Shift scan for a dual-peak Raman gain medium near zero group index.

    Requires the center group index in [-1, 1] (the end points are the
    degenerate boundaries) and the cavity below threshold at the lock point.
    """
    if medium.kind is not MediumKind.RAMAN_GAIN_DUAL:
        raise ParameterError("medium.kind", "CAD scan needs a RAMAN_GAIN_DUAL medium")
    n_g = medium.group_index(cfg.omega_lock - medium.center)
    if not -1.0 - 1e-9 <= n_g <= 1.0 + 1e-9:
        raise ParameterError("medium", f"center group index {n_g:.4g} outside [-1, 1]")
    return scan_shift(cfg, medium, dw0_grid)


def intersection_grid(
    cfg: CavityConfig, medium: MediumSpec, dw0: float, points: int = 100_000, span: float | None = None
) -> np.ndarray:
    """All intersections of ``y = x`` with the quotient form of the shift map.

    Brute force: sample ``h(x) = dw0 / (1 + (w0 + x) [(n(w0 + x) - 1)/x] l/L) - x``
    on an even-sized uniform grid over ``[-span, span]`` (default half an
    FSR, so ``x = 0`` is never sampled) and return the linearly interpolated
    location of every sign change that is not a pole of the quotient.
    """
    if span is None:
        span = 0.5 * cfg.free_spectral_range
    if points % 2:
        points += 1
    xs = np.linspace(-span, span, points)
    d0 = cfg.omega_lock - medium.center
    dn = np.asarray(medium.index_excess(d0 + xs)) - medium.index_excess(d0)
    denom = 1.0 + (cfg.omega_lock + xs) * (dn / xs) * cfg.ell_over_L
    h = dw0 / denom - xs

    change = np.nonzero(np.signbit(h[1:]) != np.signbit(h[:-1]))[0]
    # a sign change of the denominator is a pole, not an intersection
    poles = np.signbit(denom[change + 1]) != np.signbit(denom[change])
    change = change[~poles]
    x0, x1 = xs[change], xs[change + 1]
    h0, h1 = h[change], h[change + 1]
    return x0 - h0 * (x1 - x0) / (h1 - h0)
