import numpy as np
import pytest

from cyclica import VectorSeries, scalar_series


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_series(rng, dim=2, n_terms=8, lacunary=True):
    """A random series with nonzero coefficients on a lacunary-ish spectrum."""
    if lacunary:
        exps = np.cumsum(rng.integers(1, 4, size=n_terms)) ** 2
        exps = sorted(set(int(e) for e in exps))
    else:
        exps = sorted(rng.choice(4 * n_terms, size=n_terms, replace=False))
    coeffs = rng.standard_normal((len(exps), dim)) + 1j * rng.standard_normal(
        (len(exps), dim)
    )
    return VectorSeries(dim, exps, coeffs)


def dyadic_scalar(K=12, ratio=0.5):
    """f = sum_{k<=K} ratio^k z^{2^k}, the workhorse lacunary example."""
    exps = [2**k for k in range(1, K + 1)]
    coeffs = [ratio**k for k in range(1, K + 1)]
    return scalar_series(exps, coeffs)
