"""Small numerical kernels shared by the physics modules.

Root finding is derivative-free (bisection safeguarded secant), peak
extraction works on uniformly or non-uniformly sampled curves, and the
slope fit is the one-parameter least-squares line through the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketError, DegenerateFitError, ExtractionError

MAX_ITERATIONS = 200


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0:
            raise BracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})"
            )

    @classmethod
    def of(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        """Evaluate ``f`` at both ends and build the bracket."""
        return cls(lo, hi, f(lo), f(hi))


@dataclass(frozen=True)
class PeakEstimate:
    center: float
    height: float
    fwhm: float
    left_cross: float
    right_cross: float


def find_root(f: Callable[[float], float], bracket: Bracket, tol_x: float) -> float:
    """Locate a sign change of ``f`` inside ``bracket`` to within ``tol_x``.

    Each iteration tries a secant step from the bracket ends; if the step
    lands outside the bracket or fails to shrink it by half, a bisection step
    is taken instead, so the bracket width at least halves every two
    iterations.
    """
    if tol_x <= 0:
        raise ValueError("tol_x must be positive")
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi

    width_before = math.inf
    for _ in range(MAX_ITERATIONS):
        width = hi - lo
        if width <= tol_x:
            break
        x = hi - f_hi * (hi - lo) / (f_hi - f_lo)
        # Fall back to bisection when secant stalls or leaves the interval.
        if not (lo < x < hi) or width > 0.5 * width_before:
            x = 0.5 * (lo + hi)
        width_before = width
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == (f_lo < 0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
    # Return the end with the smaller residual; both lie within tol_x of the root.
    return lo if abs(f_lo) <= abs(f_hi) else hi


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Second-order central difference of ``f`` at ``x``."""
    if h <= 0:
        raise ValueError("step h must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def _crossing(x0, x1, y0, y1, level):
    # linear interpolation between two samples that straddle ``level``
    if y1 == y0:
        return 0.5 * (x0 + x1)
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def extract_peak(xs, ys) -> PeakEstimate:
    """Center, height and FWHM of the single resonance in a sampled curve.

    Parameters
    ----------
    xs : array_like
        Strictly increasing abscissae.
    ys : array_like
        Samples of a curve with one interior maximum whose half-maximum is
        crossed on both sides within the window.

    Returns
    -------
    PeakEstimate
        Center and height from a parabola through the three samples around
        the discrete maximum; half-maximum crossings by linear interpolation
        on each flank, walking outward from the maximum.

    Raises
    ------
    ExtractionError
        If the maximum sits on the window boundary, a flank never drops
        below half maximum, or the curve rises above half maximum in more
        than one separate region (more than one resonance in the window).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 3:
        raise ExtractionError("xs and ys must be 1-D arrays of equal length >= 3")
    if np.any(np.diff(xs) <= 0):
        raise ExtractionError("xs must be strictly increasing")

    i = int(np.argmax(ys))
    if i == 0:
        raise ExtractionError("maximum on the left window boundary", side="left")
    if i == xs.size - 1:
        raise ExtractionError("maximum on the right window boundary", side="right")

    x0, x1, x2 = xs[i - 1 : i + 2]
    y0, y1, y2 = ys[i - 1 : i + 2]
    # vertex of the parabola through three (possibly non-uniform) points
    d01, d12 = x0 - x1, x2 - x1
    s0, s2 = (y0 - y1) / d01, (y2 - y1) / d12
    curvature = (s2 - s0) / (d12 - d01)
    if curvature < 0:
        slope = s0 - curvature * d01
        offset = -slope / (2.0 * curvature)
        center = x1 + offset
        height = y1 + slope * offset + curvature * offset * offset
    else:
        center, height = x1, y1

    half = 0.5 * height
    above = ys >= half
    regions = np.count_nonzero(above[1:] & ~above[:-1]) + int(above[0])
    if regions > 1:
        raise ExtractionError("more than one peak above half maximum in window")

    left = np.nonzero(ys[:i] < half)[0]
    if left.size == 0:
        raise ExtractionError("half maximum not crossed on the left flank", side="left")
    j = left[-1]
    left_cross = _crossing(xs[j], xs[j + 1], ys[j], ys[j + 1], half)

    right = np.nonzero(ys[i:] < half)[0]
    if right.size == 0:
        raise ExtractionError("half maximum not crossed on the right flank", side="right")
    k = i + right[0]
    right_cross = _crossing(xs[k - 1], xs[k], ys[k - 1], ys[k], half)

    return PeakEstimate(
        center=float(center),
        height=float(height),
        fwhm=float(right_cross - left_cross),
        left_cross=float(left_cross),
        right_cross=float(right_cross),
    )


def fit_slope_through_origin(xs, ys) -> float:
    """Least-squares slope of ``ys ~ m * xs`` with no intercept."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 1:
        raise DegenerateFitError("xs and ys must have equal, nonzero length")
    sxx = float(np.dot(xs, xs))
    if sxx == 0.0 or not math.isfinite(sxx):
        raise DegenerateFitError("all abscissae are zero")
    return float(np.dot(xs, ys)) / sxx
