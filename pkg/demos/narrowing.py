"""Linewidth narrowing by a slow-light EIT medium.

A 1 m ring with a 10 cm cell has an 8 MHz resonance when the cell is
off-resonant. Tuning the probe into a 1 MHz EIT window with group index
50 narrows the resonance roughly sixfold.

Run: python demos/narrowing.py
"""

from dispersive_ring import find_resonance, linewidth_ratio_analytic, vacuum_linewidth
from dispersive_ring import presets
from dispersive_ring.media import MediumSpec, eit_linewidth
from dispersive_ring.presets import mhz

cavity = presets.eit_cavity()
medium = presets.eit_medium()

print(f"EIT window width      {mhz(eit_linewidth(medium)):.3f} MHz")
print(f"group index at center {medium.group_index(0.0):.2f}")

empty = find_resonance(cavity, MediumSpec.vacuum(medium.center))
loaded = find_resonance(cavity, medium)
print(f"vacuum-medium FWHM    {mhz(empty.fwhm):.3f} MHz (Airy {mhz(vacuum_linewidth(cavity)):.3f})")
print(f"loaded FWHM           {mhz(loaded.fwhm):.3f} MHz")
print(f"ratio numeric         {loaded.fwhm / empty.fwhm:.4f}")
# the closed form assumes the dispersion is linear across the resonance
print(f"ratio closed form     {linewidth_ratio_analytic(cavity, medium):.4f}")
