import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclica import (
    IntegerSpectrum,
    MultiSpectrum,
    bounded_block_check,
    difference_multiplicity,
    lacunarity_ratio,
    polydisc_c1,
    polydisc_c2,
    residues_hit,
    spectrum_admits_SstarN,
)
from cyclica.constructions import CrtSequenceSpec, DivisorClosedSet
from cyclica.spectrum import is_hadamard_lacunary


# -- terms and residues -------------------------------------------------------


def test_geometric_terms():
    s = IntegerSpectrum.geometric(2)
    assert s.terms(5) == [2, 4, 8, 16, 32]


def test_factorial_terms():
    # (k+1)! + k, checked by hand for the first few
    s = IntegerSpectrum.factorial_plus_k()
    assert s.terms(4) == [3, 8, 27, 124]


def test_terms_are_one_indexed():
    s = IntegerSpectrum.explicit([5, 9])
    assert s.term(1) == 5
    with pytest.raises(IndexError):
        s.term(0)
    with pytest.raises(IndexError):
        s.term(3)


@given(k=st.integers(1, 40), N=st.integers(1, 30))
@settings(max_examples=80, deadline=None)
def test_streamed_residue_matches_term(k, N):
    for s in (IntegerSpectrum.geometric(3), IntegerSpectrum.factorial_plus_k()):
        assert s.residue(k, N) == s.term(k) % N


def test_factorial_residue_congruent_to_k():
    # n_k = k (mod N) for every k >= N - 1: the key arithmetic fact
    s = IntegerSpectrum.factorial_plus_k()
    for N in range(2, 13):
        for k in range(N - 1, N + 20):
            assert s.residue(k, N) == k % N


# -- lacunarity and difference multiplicity -----------------------------------


def test_lacunarity_ratio_geometric():
    assert lacunarity_ratio(IntegerSpectrum.geometric(2), 20) == pytest.approx(2.0)


def test_lacunarity_ratio_factorial_oracle():
    # min over k of n_{k+1}/n_k is attained at k=1: 8/3
    s = IntegerSpectrum.factorial_plus_k()
    assert lacunarity_ratio(s, 12) == pytest.approx(8.0 / 3.0)


def test_is_hadamard_lacunary():
    assert is_hadamard_lacunary(IntegerSpectrum.geometric(2), 2.0)
    assert not is_hadamard_lacunary(IntegerSpectrum.explicit([1, 2, 3, 4]), 1.5)


def test_difference_multiplicity_stabilizes():
    s = IntegerSpectrum.geometric(2)
    assert difference_multiplicity(s, 16) == 1
    assert difference_multiplicity(s, 32) == 1
    assert difference_multiplicity(s, 64) == 1


def test_difference_multiplicity_oracle():
    # 1, 2, 3 has difference 1 twice
    assert difference_multiplicity(IntegerSpectrum.explicit([1, 2, 3]), 8) == 2


# -- residue criterion --------------------------------------------------------


def test_N_equals_one_always_proven():
    for s in (
        IntegerSpectrum.geometric(5),
        IntegerSpectrum.explicit([0, 7]),
        IntegerSpectrum.factorial_plus_k(),
    ):
        assert spectrum_admits_SstarN(s, 1).status == "Proven"


def test_factorial_proven_for_all_N():
    s = IntegerSpectrum.factorial_plus_k()
    for N in range(1, 13):
        assert spectrum_admits_SstarN(s, N).status == "Proven"


def test_geometric2_mod2_no_witness():
    v = spectrum_admits_SstarN(IntegerSpectrum.geometric(2), 2)
    assert v.status == "No-witness"
    assert v.detail["missing_residues"] == [1]
    assert not bool(v)


def test_divisor_monotonicity():
    # N admissible and m | N => m admissible
    spec = CrtSequenceSpec(DivisorClosedSet([4, 6]))
    s = IntegerSpectrum.crt(spec)
    good = {N for N in range(1, 13) if bool(spectrum_admits_SstarN(s, N))}
    for N in good:
        for m in range(1, N + 1):
            if N % m == 0:
                assert m in good


def test_residues_hit_shift_invariance():
    base = [3, 7, 15, 31, 63]
    N, c = 4, 5
    a = residues_hit(IntegerSpectrum.explicit(base), N, window=len(base))
    b = residues_hit(
        IntegerSpectrum.explicit([n + c * N for n in base]), N, window=len(base)
    )
    assert a == b


def test_explicit_full_coverage_at_horizon():
    # every tail of 1,2,3,...,40 covers both classes mod 2
    s = IntegerSpectrum.explicit(list(range(1, 41)))
    v = spectrum_admits_SstarN(s, 2, horizon=40)
    assert v.status == "Yes-at-horizon"
    assert bool(v)


# -- bounded blocks -----------------------------------------------------------


def test_bounded_block_check_straddling_pairs():
    # {2^k - 1, 2^k}: each pair collapses into lacunary width-2 blocks... but
    # the pair straddles two cells, so indices come in adjacent non-lacunary
    # pairs and the plain block check must reject them
    vals = sorted(v for k in range(2, 12) for v in (2**k - 1, 2**k))
    assert not bounded_block_check(IntegerSpectrum.explicit(vals), 2, 32, 1.5)


def test_bounded_block_check_geometric():
    assert bounded_block_check(IntegerSpectrum.geometric(2), 2, 20, 1.9)


def test_bounded_block_check_rejects_dense():
    s = IntegerSpectrum.explicit(list(range(1, 30)))
    assert not bounded_block_check(s, 2, 30, 1.2)


# -- polydisc conditions ------------------------------------------------------


def test_polydisc_c1_oracle_lacunary_pairs():
    ms = MultiSpectrum([(2**k, 3**k) for k in range(1, 9)])
    assert polydisc_c1(ms) == 1


def test_polydisc_c1_oracle_grid():
    # the 2x2 grid has the difference (1,0) twice
    ms = MultiSpectrum([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert polydisc_c1(ms) == 2


def test_polydisc_c2_verdicts():
    good = MultiSpectrum([(2**k, 3**k) for k in range(1, 9)])
    _, v = polydisc_c2(good)
    assert bool(v)
    bad = MultiSpectrum([(k, k) for k in range(1, 9)])
    gaps, v = polydisc_c2(bad)
    assert not bool(v)
    assert gaps[0] == [1] * 7


def test_multispectrum_rejects_duplicates():
    with pytest.raises(ValueError):
        MultiSpectrum([(1, 2), (1, 2)])
