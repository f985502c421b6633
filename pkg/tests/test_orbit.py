import numpy as np
import pytest

from cyclica import (
    PolySeries,
    VectorSeries,
    one_in_orbit_check,
    orbit_project,
    orbit_project_polydisc,
    scalar_series,
    tail_diagnostics,
)
from cyclica.orbit import _orbit_beta, _orbit_gram

from conftest import dyadic_scalar


def _dense_orbit_matrix(f, n_max, dim_cols):
    """Independent oracle: materialize S*^n f as dense coefficient columns."""
    cols = np.zeros((dim_cols * f.dim, n_max + 1), dtype=complex)
    for e, a in zip(f.exponents, f.coeffs):
        for n in range(n_max + 1):
            j = int(e) - n
            if 0 <= j < dim_cols:
                cols[j * f.dim : (j + 1) * f.dim, n] = a
    return cols


def _dense_target(g, dim_cols):
    b = np.zeros(dim_cols * g.dim, dtype=complex)
    for e, a in zip(g.exponents, g.coeffs):
        if int(e) < dim_cols:
            b[int(e) * g.dim : (int(e) + 1) * g.dim] = a
    return b


# -- Gram assembly against the dense oracle -----------------------------------


def test_gram_matches_dense_oracle(rng):
    f = VectorSeries(
        2, [1, 3, 6, 10, 17],
        rng.standard_normal((5, 2)) + 1j * rng.standard_normal((5, 2)),
    )
    n_max = 8
    cols = _dense_orbit_matrix(f, n_max, 20)
    G = _orbit_gram(f, n_max)
    assert np.allclose(G, cols.conj().T @ cols, atol=1e-12)


def test_beta_matches_dense_oracle(rng):
    f = scalar_series([1, 3, 6], [1.0, 2.0, 3.0])
    g = scalar_series([0, 2, 5], [1.0, 1j, 2.0])
    beta = _orbit_beta(f, g, 6)
    cols = _dense_orbit_matrix(f, 6, 10)
    b = _dense_target(g, 10)
    assert np.allclose(beta, cols.conj().T @ b, atol=1e-12)


def test_gram_positive_semidefinite(rng):
    f = VectorSeries(
        3, [2, 5, 9, 16],
        rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3)),
    )
    w = np.linalg.eigvalsh(_orbit_gram(f, 12))
    assert w.min() >= -1e-10


# -- residual curve -----------------------------------------------------------


def test_residual_curve_nonincreasing():
    f = dyadic_scalar()
    g = scalar_series([0], [1.0])
    rep = orbit_project(f, g, 64)
    assert np.all(np.diff(rep.residuals) <= 1e-12)
    assert rep.residuals.shape == (65,)


def test_endpoint_matches_dense_least_squares():
    f = dyadic_scalar(K=8)
    g = scalar_series([0], [1.0])
    n_max = 40
    rep = orbit_project(f, g, n_max)
    cols = _dense_orbit_matrix(f, n_max, 2**8 + 1)
    b = _dense_target(g, 2**8 + 1)
    x, *_ = np.linalg.lstsq(cols, b, rcond=None)
    oracle = np.linalg.norm(cols @ x - b)
    assert rep.residual_final == pytest.approx(oracle, abs=1e-9)
    assert rep.residuals[-1] == pytest.approx(oracle, abs=1e-8)


def test_projection_of_orbit_member_is_exact():
    f = dyadic_scalar(K=6)
    from cyclica import backward_shift

    g = backward_shift(f, 3)
    rep = orbit_project(f, g, 8)
    assert rep.residual_final < 1e-10


def test_noncyclic_witness_lower_bound():
    # F confined to the e1 direction: any e2 target keeps its full norm
    es = [2**k for k in range(1, 10)]
    F = VectorSeries(2, es, np.array([[2.0**-k, 0.0] for k in range(1, 10)]))
    g = VectorSeries(2, [0], np.array([[0.0, 1.0]]))
    rep = orbit_project(F, g, 128)
    assert rep.residuals.min() >= 1.0 - 1e-9


def test_orbit_project_input_validation():
    g = scalar_series([0], [1.0])
    with pytest.raises(ValueError):
        orbit_project(VectorSeries(1, [], np.zeros((0, 1))), g, 4)
    with pytest.raises(ValueError):
        orbit_project(dyadic_scalar(4), g, -1)


# -- polydisc orbit -----------------------------------------------------------


def _poly_lacunary(K=5, decay=0.25):
    return PolySeries(2, 1, [((2**k, 3**k), [decay**k]) for k in range(K + 1)])


def test_polydisc_curve_nonincreasing():
    f = _poly_lacunary()
    one = PolySeries(2, 1, [((0, 0), [1.0])])
    rep = orbit_project_polydisc(f, one, (32, 27))
    assert np.all(np.diff(rep.residuals) <= 1e-12)
    assert len(rep.residuals) == 5


def test_polydisc_projection_of_shift_member():
    f = _poly_lacunary(K=3)
    from cyclica import poly_backward_shift

    g = poly_backward_shift(f, (2, 3))
    rep = orbit_project_polydisc(f, g, (8, 9), chain=(1.0,))
    assert rep.residual_final < 1e-8


def test_one_in_orbit_check_scalar_only():
    f = PolySeries(1, 2, [((0,), [1.0, 0.0]), ((2,), [0.0, 1.0])])
    with pytest.raises(ValueError, match="scalar"):
        one_in_orbit_check(f, (4,))


def test_one_in_orbit_small_example():
    # f = 1 + c z^2: S*^2 f = c, so 1 is in the orbit span exactly
    f = PolySeries(1, 1, [((0,), [1.0]), ((2,), [0.5])])
    assert one_in_orbit_check(f, (2,), threshold=1e-8)


# -- tail diagnostics ---------------------------------------------------------


def test_lemma13_terms_oracle():
    # ||a_k||^2 = 2^{-k}: each term equals tail/tail = 1 up to truncation
    K = 24
    f = scalar_series([2**k for k in range(1, K + 1)],
                      [2.0 ** (-k / 2.0) for k in range(1, K + 1)])
    td = tail_diagnostics(f)
    # away from the truncated end the terms are within 1% of 1
    assert np.allclose(td.lemma13_terms[: K - 8], 1.0, rtol=0.01)
    assert td.lemma13_partial[-1] > td.lemma13_partial[0]


def test_lemma12_partial_sums_cauchy():
    f = dyadic_scalar(K=20)
    td = tail_diagnostics(f)
    for p, sums in td.lemma12_partial.items():
        total = sums[-1]
        if total == 0:
            continue
        inc = total - sums[3 * len(sums) // 4]
        assert inc < 0.01 * total, (p, inc, total)


def test_tail_diagnostics_needs_three_terms():
    with pytest.raises(ValueError):
        tail_diagnostics(scalar_series([1, 2], [1.0, 1.0]))
