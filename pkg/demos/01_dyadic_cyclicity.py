"""The dyadic lacunary series and its cyclicity certificate.

f = sum_k 2^-k z^(2^k) is the standard example of a cyclic vector for the
backward shift: its coefficient tails keep pointing in every direction of
the (here one-dimensional) coefficient space, so X_*(f) is everything.
The orbit harness then shows the constant 1 being approached by orbit
combinations, with the residual decaying like budget^(-1/2).
"""

import numpy as np

from cyclica import cyclicity_single, decompose, scalar_series, TailModel
from cyclica.orbit import orbit_project

K = 16
f = scalar_series([2**k for k in range(1, K + 1)],
                  [2.0**-k for k in range(1, K + 1)])
print("series:", f)

v = cyclicity_single(f)
print("at-horizon verdict:", v.status, v.detail)

# the exact route: declare the tail structure and decompose
model = TailModel(1, [np.array([1.0 + 0.0j])])
rep = decompose(f, model)
print("exact verdict:", rep.verdict.status,
      "| transient part p has", len(rep.p), "terms")

g = scalar_series([0], [1.0])
orb = orbit_project(f, g, 256)
for budget in (4, 16, 64, 256):
    print(f"orbit residual, budget {budget:4d}: {orb.residuals[budget]:.5f}")
print("residual ratio 256/64:",
      round(orb.residuals[256] / orb.residuals[64], 3),
      "(~ 1/2, i.e. budget^-1/2 decay)")
