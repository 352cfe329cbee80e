"""Critically anomalous dispersion with a dual-peak Raman gain medium.

Two gain lines placed symmetrically about the lock point are spaced so the
group index at the center is zero. The linear shift formula then divides
by zero. The self-consistent solver stays finite, and the enhancement of
the loaded shift over the empty-cavity shift grows as dw0 shrinks.

The spectrum is also shown: the gain makes it double-humped and narrower
than the vacuum-medium resonance (see the decisions ledger).

Run: python demos/cad.py
"""

import math

import numpy as np

from dispersive_ring import find_resonance, linewidth_numeric, solve_shift
from dispersive_ring import presets
from dispersive_ring.errors import CadDivergenceError
from dispersive_ring.media import MediumSpec
from dispersive_ring.presets import mhz
from dispersive_ring.sensitivity import shift_linear

cavity = presets.cad_cavity()
medium = presets.cad_medium()
print(f"peak offset {mhz(medium.peak_offset):.4f} MHz, n_g(center) {medium.group_index(0.0):.1e}")

try:
    shift_linear(medium.group_index(0.0), cavity.ell_over_L, 2 * math.pi * 1e3)
except CadDivergenceError as exc:
    print(f"linear formula: {exc}")

for hz in np.geomspace(10, 1e5, 5):
    r = solve_shift(cavity, medium, 2 * math.pi * hz)
    print(f"dw0 {hz:9.1f} Hz -> enhancement {r.dw0_prime / r.dw0:8.2f}")

res = find_resonance(cavity, medium)
vac = linewidth_numeric(cavity, MediumSpec.vacuum(medium.center))
print(f"loaded FWHM {mhz(res.fwhm):.3f} MHz, peak at {mhz(res.peak_center):+.3f} MHz, vacuum {mhz(vac):.3f} MHz")
