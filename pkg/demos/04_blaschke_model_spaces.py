"""The orbit span of a polynomial is a model space K_Theta.

For a C^d-valued polynomial p with independent S*-orbit, the orbit span
equals H^2 minus Theta H^2 for an inner matrix polynomial Theta built from
rank-one Blaschke factors (1-P) + zP.  The peeling factorization extracts
the factor vectors one by one; the verifier re-checks every structural
property of the product.
"""

import numpy as np

from cyclica import VectorSeries
from cyclica.modelspace import factorize_Ep, verify_potapov

# the hand example p = e1 + z e2
p = VectorSeries(2, [0, 1], np.eye(2) + 0j)
pp = factorize_Ep(p)
print("factor vectors (leftmost first):")
for x in pp.factors:
    print("  ", np.round(x, 6))
print("assembled degree:", pp.assembled.degree)

rep = verify_potapov(pp, generator=p)
for key in ("unitarity_defect", "det_gamma", "kernel_dim_theta0star",
            "nesting_defect", "model_space_defect", "all_ok"):
    print(f"{key:24s}", rep[key])

# a random degree-3 polynomial in C^3
rng = np.random.default_rng(0)
q = VectorSeries(3, range(4), rng.standard_normal((4, 3))
                 + 1j * rng.standard_normal((4, 3)))
ppq = factorize_Ep(q)
print("\nrandom C^3 example:", ppq.n_factors, "factors,",
      "verified:", verify_potapov(ppq, generator=q)["all_ok"])
