from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassdesigns.geometry import random_projector, inner
from grassdesigns.partitions import partitions_of
from grassdesigns.zonal import (
    SignedMeasure, lower_bound, mean_inner_power, numeric_rank, t_matrix, zonal_at_identity,
)


def beta_moment(l, d, t):
    """E (u^T Q u)^t for a uniform unit vector u and a rank-l projector Q in R^d."""
    out = F(1)
    for i in range(t):
        out *= F(l + 2 * i, d + 2 * i)
    return out


def binom(n, r):
    from math import comb
    return comb(n, r)


def test_zonal_examples():
    for k in range(1, 7):
        assert zonal_at_identity((1,), k) == k
    assert zonal_at_identity((1, 1), 1) == 0
    assert zonal_at_identity((2,), 3) == 5
    assert zonal_at_identity((1, 1), 3) == 4


@pytest.mark.parametrize("k", range(1, 9))
@pytest.mark.parametrize("t", range(0, 7))
def test_zonal_trace_normalization(k, t):
    assert sum(zonal_at_identity(pi, k) for pi in partitions_of(t)) == k**t


def test_zonal_vanishes_beyond_rank():
    for t in range(1, 6):
        for pi in partitions_of(t):
            for k in range(1, pi.length()):
                assert zonal_at_identity(pi, k) == 0


def test_zonal_closed_forms_degree_two():
    for d in range(1, 9):
        assert zonal_at_identity((2,), d) == F(d * (d + 2), 3)
        assert zonal_at_identity((1, 1), d) == F(2 * d * (d - 1), 3)


def test_t_matrix_degree_one():
    for d in range(2, 8):
        K = set(range(1, d))
        T = t_matrix(d, K, 1)
        for k in K:
            for l in K:
                assert T[(k, l)] == F(k * l, d)


def test_t_matrix_planes_and_lines_in_r3():
    T = t_matrix(3, {1, 2}, 2)
    assert [[T[(1, 1)], T[(1, 2)]], [T[(2, 1)], T[(2, 2)]]] == [[F(1, 5), F(8, 15)], [F(8, 15), F(28, 15)]]


@pytest.mark.parametrize("d", range(2, 8))
@pytest.mark.parametrize("t", range(1, 5))
def test_lines_against_beta_moments(d, t):
    # one argument a line: Tr(PQ) = u^T Q u is Beta(l/2, (d-l)/2)
    for l in range(1, d):
        assert mean_inner_power(d, 1, l, t) == beta_moment(l, d, t)


@pytest.mark.parametrize("d", range(3, 8))
@pytest.mark.parametrize("t", range(1, 4))
def test_complement_expansion(d, t):
    # Tr((I-P)(I-Q)) = d - k - l + Tr(PQ): expand the power binomially
    for k in range(1, d):
        for l in range(1, d):
            c = d - k - l
            expected = sum(binom(t, j) * F(c) ** (t - j) * mean_inner_power(d, k, l, j) for j in range(t + 1))
            assert mean_inner_power(d, d - k, d - l, t) == expected


def test_mean_inner_power_examples():
    assert mean_inner_power(3, 1, 1, 2) == F(1, 5)
    assert mean_inner_power(4, 2, 2, 2) == F(10, 9)
    for d in range(2, 7):
        for k in range(1, d):
            for l in range(1, d):
                assert mean_inner_power(d, k, l, 1) == F(k * l, d)


def test_mean_inner_power_monte_carlo():
    rng = np.random.default_rng(3)
    for d, k, l, t in [(4, 2, 2, 2), (5, 2, 3, 2), (5, 2, 2, 3)]:
        vals = [inner(random_projector(d, k, rng), random_projector(d, l, rng)) ** t for _ in range(40000)]
        assert np.mean(vals) == pytest.approx(float(mean_inner_power(d, k, l, t)), rel=1.5e-2)


@pytest.mark.parametrize("d", range(2, 9))
def test_bound_lines_hyperplane(d):
    for m in [F(-1, d - 1), F(0), F(1, 3), F(1), F(5, 2)]:
        masses = {1: 1 + m} if d == 2 else {1: 1, d - 1: m}
        assert lower_bound(masses, d=d, t=1) == (1 + (d - 1) * m) ** 2 / d


def test_bound_two_planes_in_r4():
    for m1 in [F(0), F(1, 2), F(1), F(2)]:
        assert lower_bound({1: m1, 2: 1}, d=4, t=1) == (1 + m1 / 2) ** 2


def test_bound_r3_and_r4_and_r5():
    for m2 in [F(0), F(3, 2), F(2, 7), F(-1, 3)]:
        assert lower_bound({1: 1, 2: m2}, d=3, t=2) == (3 + 16 * m2 + 28 * m2**2) / 15
        assert lower_bound({1: 1, 2: m2}, d=4, t=2) == (9 + 48 * m2 + 80 * m2**2) / 72
    assert lower_bound({1: 1, 2: F(5, 3)}, d=5, t=2) == F(131, 45)


def test_bound_float_masses():
    value = lower_bound({1: 1.0, 2: 1.5}, d=3, t=2)
    assert isinstance(value, float)
    assert value == pytest.approx(float((3 + 16 * F(3, 2) + 28 * F(9, 4)) / 15), rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.data())
def test_t_matrix_symmetric_psd_and_bound_nonnegative(d, t, data):
    K = data.draw(st.sets(st.integers(1, d - 1), min_size=1))
    T = t_matrix(d, K, t)
    A = T.to_numpy()
    assert np.array_equal(A, A.T)
    assert np.linalg.eigvalsh(A).min() >= -1e-12 * max(1.0, np.abs(A).max())
    masses = {k: data.draw(st.fractions(-3, 3, max_denominator=5)) for k in K}
    assert lower_bound(SignedMeasure(d, masses), K, t) >= 0


def test_rank_claim_is_reported_only():
    # measured, not asserted as equal: see the decision ledger
    for d in range(3, 7):
        for t in range(1, 4):
            K = set(range(1, d // 2 + 1))
            r = numeric_rank(d, K, t)
            assert 1 <= r <= len(K)


def test_measure_validation():
    with pytest.raises(ValueError):
        lower_bound({1: 1}, t=1)
    with pytest.raises(ValueError):
        lower_bound(SignedMeasure(3, {1: 1, 2: 1}), {1}, 1)
