"""Regression numbers from the independent mpmath oracle.

Produced by ``python tests/oracles/derive_frozen.py`` (40-digit arithmetic,
absolute round-trip phase, bisection on the multiplied-out shift equation).
Frequencies are ordinary frequencies in MHz.
"""

EIT_WIDTH_MHZ = 1.0
EIT_GROUP_INDEX = 50.0
EIT_LOADED_FWHM_MHZ = 1.22453813747
EIT_SHIFT_1MHZ_MHZ = 0.189023745225
EIT_SHIFT_4MHZ_MHZ = 3.70980983585
EIT_IMPLIED_S = 4.63328027092

CAD_PEAK_OFFSET_MHZ = 0.579470825518
CAD_ENHANCEMENT = {100.0: 207.700995831, 1000.0: 44.7301706448, 10000.0: 9.61984629573}
CAD_VACUUM_FWHM_MHZ = 15.5429257937
CAD_LOADED_FWHM_MHZ = 1.47567915134
CAD_HUMP_MHZ = 0.455107733933
