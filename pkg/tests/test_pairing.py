from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l1roots.curve_model import NecklaceConfig, chi_permutation, necklace_incidence, single_pair_incidence
from l1roots.errors import DimensionError
from l1roots.pairing import (
    WeightVector,
    averaged_vector,
    curve_pairing,
    pairing_via_reweight,
    pairing_weights,
    reweight,
    solenoid_pairing,
)
from l1roots.spectral import perron
from l1roots.twist_algebra import psi_matrix

K8 = necklace_incidence(NecklaceConfig(2, 2), r=1)


def indicator(K, i):
    return tuple(1 if k == i else 0 for k in range(1, K + 1))


def test_single_cell():
    inc = single_pair_incidence(5)
    assert pairing_weights((2,), (3,), inc) == 30
    assert pairing_weights((2,), (0,), inc) == 0
    assert reweight((3,), inc).entries == (15,)
    assert reweight((0,), inc).entries == (0,)


def test_necklace_indicators():
    assert pairing_weights(indicator(8, 3), indicator(8, 3), K8) == 1
    assert pairing_weights(indicator(8, 3), indicator(8, 2), K8) == 1
    assert pairing_weights(indicator(8, 3), indicator(8, 5), K8) == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        pairing_weights((1, 2), (1,) * 8, K8)
    with pytest.raises(DimensionError):
        reweight((1,) * 7, K8)


def test_two_evaluation_paths_agree():
    rng = np.random.default_rng(7)
    for _ in range(100):
        u, w = rng.random(8), rng.random(8)
        two = pairing_weights(u, w, K8)
        three = pairing_via_reweight(u, w, K8)
        assert abs(two - three) <= 1e-12


weights = st.lists(st.fractions(min_value=0, max_value=10, max_denominator=50), min_size=8, max_size=8)


@settings(max_examples=50, deadline=None)
@given(weights, weights, st.fractions(min_value=0, max_value=5, max_denominator=20))
def test_bilinear_exact(u, w, t):
    scaled = [t * x for x in u]
    assert pairing_weights(scaled, w, K8) == t * pairing_weights(u, w, K8)
    assert pairing_weights(u, [t * x for x in w], K8) == t * pairing_weights(u, w, K8)
    summed = [x + y for x, y in zip(u, w)]
    assert pairing_weights(summed, w, K8) == pairing_weights(u, w, K8) + pairing_weights(w, w, K8)
    assert pairing_via_reweight(u, w, K8) == pairing_weights(u, w, K8)


def test_solenoid_pairing():
    assert solenoid_pairing(6, 3) == 2
    assert solenoid_pairing(4.5, 1) == 4.5
    assert solenoid_pairing(10, 4) == solenoid_pairing(10, 2) / 2
    with pytest.raises(ValueError):
        solenoid_pairing(1, 0)
    cfg = NecklaceConfig(2, 2)
    assert cfg.cover_degree == 2 * 2 * 2 * 2


def test_averaged_vector():
    avg = averaged_vector(WeightVector.labeled([0.1, 0.2], [0.3, 0.4]))
    assert avg.a_sum == pytest.approx(0.3) and avg.b_sum == pytest.approx(0.7)
    avg = averaged_vector(WeightVector((1 / 16,) * 16, split=8))
    assert (avg.a_sum, avg.b_sum) == (0.5, 0.5)
    with pytest.raises(DimensionError):
        averaged_vector(WeightVector((0.5, 0.5)))


def test_averaged_perron_vector_is_probability():
    v = perron(psi_matrix(NecklaceConfig(2, 2), 1, 1).T).vector
    avg = averaged_vector(WeightVector(tuple(v), split=8))
    assert avg.a_sum > 0 and avg.b_sum > 0
    assert abs(avg.a_sum + avg.b_sum - 1) <= 1e-12


def test_weights_must_be_nonnegative():
    with pytest.raises(ValueError):
        WeightVector((1, -1))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 20), min_size=16, max_size=16))
def test_solenoid_pairing_chi_invariant(entries):
    cfg = NecklaceConfig(2, 2)
    inc = necklace_incidence(cfg, 1)
    perm = chi_permutation(cfg)
    u = WeightVector(tuple(entries), split=8)
    moved = [0] * 16
    for i in range(8):
        moved[perm[i] - 1] = entries[i]
        moved[8 + perm[i] - 1] = entries[8 + i]
    v = WeightVector(tuple(moved), split=8)
    for kind in "cd":
        a = solenoid_pairing(Fraction(curve_pairing(u, kind, inc)), cfg.cover_degree)
        b = solenoid_pairing(Fraction(curve_pairing(v, kind, inc)), cfg.cover_degree)
        assert a == b
    assert pairing_weights(u.c_part, u.d_part, inc) == pairing_weights(v.c_part, v.d_part, inc)


def test_lift_of_base_measure_pairs_like_base():
    # a downstairs measure (a, b) lifted to every c_i, d_j: cover pairing / degree = downstairs
    cfg = NecklaceConfig(3, 2)
    inc = necklace_incidence(cfg, 2)
    a, b = Fraction(2, 7), Fraction(5, 7)
    lifted = WeightVector.labeled([a] * cfg.K, [b] * cfg.K)
    base = WeightVector.labeled([a], [b])
    for kind in "cd":
        down = curve_pairing(base, kind, single_pair_incidence(2))
        up = solenoid_pairing(curve_pairing(lifted, kind, inc), cfg.cover_degree)
        assert up == down
