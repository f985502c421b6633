"""Bounded polynomial blocks and the local-rank criterion.

Series of the form sum_k P_k(z) z^(n_k) with uniformly bounded blocks P_k
escape the plain tail-span criterion: cyclicity is decided by the local
rank of the recurrent polynomial directions, the maximal dimension of
{p(z) : p in L} over disc points.  The classic non-cyclic pair puts all
blocks on the single direction e1 + z e2 (local rank 1 in C^2), and the
same obstruction shows up in the reshaped family machinery.
"""

import numpy as np

from cyclica import VectorSeries, bounded_block_family_cyclicity
from cyclica.blocks import BlockSeries, PolyDirectionModel, blocks_cyclicity

K = 12
a = [2.0**-k for k in range(1, K + 1)]

# blocks P_k = a_k (e1 + z e2) at positions 2^k
bs = BlockSeries(2, 1, [
    (2**k, [[a[k - 1], 0.0], [0.0, a[k - 1]]]) for k in range(1, K + 1)
])
model = PolyDirectionModel([[[1.0, 0.0], [0.0, 1.0]]])
v = blocks_cyclicity(bs, model)
print("single direction e1 + z e2:", v.status, v.detail)

# two independent directions restore cyclicity
model2 = PolyDirectionModel([[[1.0, 0.0], [0.0, 1.0]],
                             [[0.0, 1.0], [1.0, 0.0]]])
bs2 = BlockSeries(2, 1, [
    (2**k, [[a[k - 1], 0.0], [0.0, a[k - 1]]]) if k % 2 else
    (2**k, [[0.0, a[k - 1]], [a[k - 1], 0.0]]) for k in range(1, K + 1)
])
print("two directions:", blocks_cyclicity(bs2, model2).status)

# the same obstruction through the reshaped-family route
exps, coeffs = [], []
for k in range(1, K + 1):
    exps += [2**k - 1, 2**k]
    coeffs += [[0.0, a[k - 1]], [a[k - 1], 0.0]]
F = VectorSeries(2, exps, np.array(coeffs))
v2 = bounded_block_family_cyclicity([F], 2)
print("reshaped family route:", v2.status, v2.detail)
