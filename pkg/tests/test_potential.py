from fractions import Fraction as F

import numpy as np
import pytest

from grassdesigns.families import family_lines_hyperplane, family_r3_2design, icosahedral_lines, FAMILIES
from grassdesigns.geometry import coordinate_projector, projector_from_frame, random_orthogonal, random_projector
from grassdesigns.potential import (
    Configuration, EmptyConfigurationError, certify, distinct_points, equivalent_measure_check,
    extract_marginal, ffp, marginal_strength, merge_coincident, worst_case_error_sq,
)
from grassdesigns.repdim import min_points_lower_bound
from grassdesigns.zonal import SignedMeasure, lower_bound, mean_inner_power, t_matrix


def random_config(rng, d, n, t_ranks=None):
    ranks = t_ranks or [int(rng.integers(1, d)) for _ in range(n)]
    pts = [random_projector(d, k, rng) for k in ranks]
    return Configuration(pts, rng.uniform(0.05, 1.0, len(pts)))


def test_ffp_examples():
    for k in range(1, 4):
        for t in range(1, 4):
            assert ffp(Configuration([coordinate_projector(4, k)], [1.0]), t) == pytest.approx(k**t)
    two = Configuration([coordinate_projector(2, 1), projector_from_frame(2, [[0, 1]])], [0.5, 0.5])
    assert ffp(two, 1) == 0.5
    ico = icosahedral_lines()
    assert np.allclose(ico.weights, 1 / 6)
    assert ffp(ico, 2) == pytest.approx(float(mean_inner_power(3, 1, 1, 2)), abs=1e-12)
    assert ffp(ico, 2) == pytest.approx(0.2, abs=1e-12)


def test_lower_bound_holds_on_random_configurations():
    rng = np.random.default_rng(10)
    for _ in range(1000):
        d = int(rng.integers(2, 6))
        t = int(rng.integers(1, 4))
        c = random_config(rng, d, int(rng.integers(1, 7)))
        assert ffp(c, t) >= float(lower_bound(c.induced_measure(), t=t)) - 1e-9


def test_worst_case_error_identity():
    rng = np.random.default_rng(11)
    for _ in range(50):
        d = int(rng.integers(3, 6))
        t = int(rng.integers(1, 4))
        c = random_config(rng, d, 6)
        gap = ffp(c, t) - float(lower_bound(c.induced_measure(), t=t))
        assert worst_case_error_sq(c, c.induced_measure(), t) == pytest.approx(gap, rel=1e-12, abs=1e-14)


def test_worst_case_error_cubature_and_zero():
    c, sigma = family_lines_hyperplane(3, F(1, 2))
    assert abs(worst_case_error_sq(c, sigma, 1)) <= 1e-10
    zero = Configuration([coordinate_projector(3, 1), coordinate_projector(3, 2)], [0.0, 0.0])
    assert worst_case_error_sq(zero, SignedMeasure(3, {1: 0, 2: 0}), 2) == 0


def test_certify_examples():
    c, _ = family_lines_hyperplane(3, F(1, 2))
    rep = certify(c, 1)
    assert rep.verdict == "design" and abs(rep.gap) <= 1e-10
    rep = certify(family_r3_2design(F(3, 2))[0], 2)
    assert rep.verdict == "design"
    assert rep.bound_exact == str((3 + 16 * F(3, 2) + 28 * F(9, 4)) / 15)
    rng = np.random.default_rng(12)
    for _ in range(20):
        assert certify(random_config(rng, 3, 10, [1] * 6 + [2] * 4), 2).verdict == "neither"


def test_cubature_with_unequal_weights():
    c, _ = family_lines_hyperplane(3, F(1, 2))
    # splitting one line into two copies keeps the cubature but breaks weight equality
    pts = c.points + [c.points[0]]
    w = list(c.weights)
    w[0] /= 2
    w.append(w[0])
    rep = certify(Configuration(pts, w), 1)
    assert rep.verdict == "cubature"


def test_certify_invariant_under_conjugation():
    rng = np.random.default_rng(13)
    for build in [lambda: FAMILIES["r3-2design"](F(1, 3))[0], lambda: FAMILIES["r5-2design"]()[0],
                  lambda: random_config(rng, 4, 7)]:
        c = build()
        O = random_orthogonal(c.d, rng)
        a, b = certify(c, 2), certify(c.conjugated(O), 2)
        assert a.verdict == b.verdict
        assert abs(a.ffp - b.ffp) <= 1e-10


def test_equivalent_measure_examples():
    c, sigma = family_lines_hyperplane(3, F(1, 2))
    m = c.induced_masses()
    assert equivalent_measure_check(c, 1, SignedMeasure(3, m))
    # (2, -1) spans the kernel of T(1) on {1, 2} in R^3 ...
    T1 = t_matrix(3, {1, 2}, 1)
    assert T1[(1, 1)] * 2 - T1[(1, 2)] == 0 and T1[(2, 1)] * 2 - T1[(2, 2)] == 0
    # ... but it changes the total mass, which the check refuses
    shifted = SignedMeasure(3, {1: m[1] + 2, 2: m[2] - 1})
    with pytest.raises(ValueError, match="mass"):
        equivalent_measure_check(c, 1, shifted)
    c2, _ = family_r3_2design(F(1, 2))
    m2 = c2.induced_masses()
    assert not equivalent_measure_check(c2, 2, SignedMeasure(3, {1: m2[1] + 1, 2: m2[2] - 1}))


def test_marginals():
    c, _ = family_lines_hyperplane(4, F(1, 3))
    lines = extract_marginal(c, 1)
    assert len(lines) == 4 and set(lines.rank_set()) == {1}
    single = icosahedral_lines()
    assert extract_marginal(single, 1).points == single.points
    c3, _ = family_r3_2design(F(3, 2))
    s = marginal_strength(2, 2)
    assert s == 1
    assert certify(extract_marginal(c3, 1), s).is_cubature
    with pytest.raises(EmptyConfigurationError):
        extract_marginal(c3, 3)


def test_distinct_point_counts_respect_cardinality_bound():
    args = {"lines-hyperplane": (4, F(1, 3)), "r4-1design": (F(1, 2),), "r3-2design": (F(1, 2),),
            "r4-2design": (F(1),), "r5-2design": ()}
    for name, fn in FAMILIES.items():
        c = fn(*args[name])[0]
        merged = merge_coincident(c)
        t = 2 if "2design" in name else 1
        if all(w > 0 for w in merged.weights) and certify(merged, t).is_cubature:
            assert len(distinct_points(merged)) >= min_points_lower_bound(merged.d, set(merged.rank_set()), t)
    c = merge_coincident(family_r3_2design(F(3, 2))[0])
    assert len(c) == 7 == min_points_lower_bound(3, {1, 2}, 2)


def test_empty_configuration_rejected():
    with pytest.raises(EmptyConfigurationError):
        Configuration([], [])
