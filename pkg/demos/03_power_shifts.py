"""Reshaping a series turns S*^N questions into plain S* questions.

Psi_N groups N consecutive coefficients into one C^(dN)-valued coefficient
and intertwines S*^N with the ordinary backward shift.  The stacked tail
spans of the reshaped series then decide S*^N-cyclicity, and on spectra
alone the same verdict can be reached by streaming residues -- the
crosscheck confirms both routes agree.
"""

import numpy as np

from cyclica import (
    IntegerSpectrum,
    psi_reshape,
    psi_unreshape,
    residue_crosscheck,
    scalar_series,
    sstarN_cyclicity,
)

f = scalar_series([3, 4, 9, 16, 33, 64, 129, 256, 513, 1024],
                  2.0 ** -np.arange(10))
rs = psi_reshape(f, 2)
print("reshaped blocks:", [int(q) for q in rs.series.exponents])
print("round trip exact:", psi_unreshape(rs) == f)

print("S*^2 verdict:", sstarN_cyclicity(f, 2).status)

geo = IntegerSpectrum.geometric(2)
g = scalar_series([2**k for k in range(1, 11)], np.ones(10))
v = sstarN_cyclicity(g, 2, spectrum=geo)
print("geometric(2) via residue route:", v.status)

for N in (2, 3, 4):
    ok = residue_crosscheck(IntegerSpectrum.factorial_plus_k(), N)
    print(f"crosscheck factorial, N={N}:", ok)
