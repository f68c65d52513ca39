from fractions import Fraction as F

import numpy as np
import pytest

from grassdesigns.families import family_r3_2design, family_r5_2design
from grassdesigns.geometry import validate
from grassdesigns.optimizer import (
    OptimizerSettings, minimize_ffp, minimize_with_restarts, random_configuration,
)
from grassdesigns.potential import certify, ffp
from grassdesigns.zonal import lower_bound

from oracles import fd_check


def test_gradient_finite_differences():
    rng = np.random.default_rng(0)
    for _ in range(100):
        d, t = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        assert fd_check(rng, d, t, int(rng.integers(2, 7))) <= 1e-5


def test_random_configuration_examples():
    c = random_configuration(3, {1: 6, 2: 4}, {1: 1 / 6, 2: 1.5 / 4}, 5)
    assert len(c) == 10 and all(validate(P) == [] for P in c.points)
    assert c.induced_masses() == pytest.approx({1: 1.0, 2: 1.5})
    again = random_configuration(3, {1: 6, 2: 4}, {1: 1 / 6, 2: 1.5 / 4}, 5)
    assert all(np.array_equal(P.mat, Q.mat) for P, Q in zip(c.points, again.points))
    assert len(random_configuration(4, {2: 1}, {2: 1.0}, 0)) == 1
    with pytest.raises(ValueError):
        random_configuration(3, {3: 1}, {3: 1.0}, 0)


def test_two_lines_in_the_plane():
    for seed in range(5):
        start = random_configuration(2, {1: 2}, {1: 0.5}, seed)
        res = minimize_ffp(start, 1, OptimizerSettings(seed=seed))
        assert abs(res.trace[-1] - 0.5) <= 1e-10
        P, Q = res.config.points
        assert abs(np.sum(P.mat * Q.mat)) <= 1e-5


def test_iterates_valid_trace_monotone_and_above_bound():
    seen = []
    start = random_configuration(4, {1: 3, 2: 3}, {1: 1 / 3, 2: 1 / 3}, 3)
    res = minimize_ffp(start, 2, OptimizerSettings(max_iter=300, seed=3),
                       callback=lambda c, f: seen.append(max(len(validate(P, 1e-8)) for P in c.points)))
    assert seen and max(seen) == 0
    assert all(b <= a for a, b in zip(res.trace, res.trace[1:]))
    bound = float(lower_bound(res.config.induced_measure(), t=2))
    assert res.trace[-1] >= bound - 1e-9
    assert ffp(res.config, 2) == pytest.approx(res.trace[-1], rel=1e-12)


@pytest.mark.parametrize("method", ["gd", "cg"])
def test_design_recovery_r3(method):
    best, runs = minimize_with_restarts(3, {1: 6, 2: 4}, {1: 1.0, 2: 1.5}, 2,
                                        OptimizerSettings(seed=2, restarts=2, method=method))
    rep = certify(best.config, 2)
    assert rep.gap <= 1e-8 and rep.verdict == "design"
    assert best.seed in (2, 3) and len(runs) == 2


def test_start_at_design_is_fixed_point():
    for c, t in [(family_r3_2design(F(3, 4))[0], 2), (family_r5_2design()[0], 2)]:
        res = minimize_ffp(c, t)
        assert res.iterations == 0
        assert max(np.abs(P.mat - Q.mat).max() for P, Q in zip(c.points, res.config.points)) <= 1e-10


def test_best_of_restarts_is_lowest_then_earliest():
    best, runs = minimize_with_restarts(3, {1: 2, 2: 1}, {1: 1.0, 2: 0.5}, 2,
                                        OptimizerSettings(seed=7, restarts=3, max_iter=50, hops=0))
    values = [r.trace[-1] for r in runs]
    assert best.trace[-1] == min(values)
    assert best.seed == 7 + values.index(min(values))


def test_settings_validation():
    with pytest.raises(ValueError):
        OptimizerSettings(shrink=1.0)
    with pytest.raises(ValueError):
        OptimizerSettings(grad_tol=0)
    with pytest.raises(ValueError):
        OptimizerSettings(restarts=0)
    with pytest.raises(ValueError):
        OptimizerSettings(method="newton")


def test_deterministic():
    a = minimize_ffp(random_configuration(3, {1: 3, 2: 2}, {1: 0.3, 2: 0.4}, 1), 2, OptimizerSettings(max_iter=200))
    b = minimize_ffp(random_configuration(3, {1: 3, 2: 2}, {1: 0.3, 2: 0.4}, 1), 2, OptimizerSettings(max_iter=200))
    assert a.trace == b.trace
