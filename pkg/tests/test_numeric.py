import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setexpect.errors import CapacityError, DomainError
from setexpect.numeric_expectation import (
    AVaR,
    DensityBand,
    Expectation,
    MaxOfN,
    contains_unit_density,
    e_value,
    extreme_densities,
    extreme_density_matrix,
    geometric_max_expectation,
    geometric_min_expectation,
    monte_carlo_expectation,
    u_value,
)
from setexpect.scenario import RandomScalar, ScenarioSpace

from conftest import random_probs, seeds

HALF = ScenarioSpace.uniform(2)
B01 = RandomScalar(HALF, np.array([0.0, 1.0]))


def _family(draw_kind, rng, space):
    if draw_kind == "expectation":
        return Expectation()
    if draw_kind == "avar":
        return AVaR(float(rng.uniform(0.05, 1.0)))
    if draw_kind == "maxn":
        return MaxOfN(int(rng.integers(1, 5)))
    lo = rng.uniform(0.0, 1.0, size=space.n)
    hi = lo + rng.uniform(0.5, 3.0, size=space.n)
    # make sure the band meets E gamma = 1
    lo = lo * min(1.0, 0.9 / float(space.probs @ lo))
    hi = np.maximum(hi, 1.0)
    return DensityBand(RandomScalar(space, lo), RandomScalar(space, hi))


families = st.sampled_from(["expectation", "avar", "maxn", "band"])


def test_family_validation():
    for bad in (0.0, -0.1, 1.5):
        with pytest.raises(DomainError):
            AVaR(bad)
    with pytest.raises(DomainError):
        MaxOfN(0)
    with pytest.raises(DomainError):
        MaxOfN(1.5)
    with pytest.raises(DomainError):
        DensityBand(RandomScalar(HALF, np.array([2.0, 2.0])), RandomScalar(HALF, np.array([3.0, 3.0])))


def test_e_value_examples():
    assert e_value(AVaR(0.7), B01) == pytest.approx(5 / 7, abs=1e-15)
    assert e_value(MaxOfN(2), B01) == pytest.approx(0.75, abs=1e-15)
    c = RandomScalar(ScenarioSpace.uniform(3), np.full(3, -1.25))
    for M in (Expectation(), AVaR(0.3), MaxOfN(3)):
        assert e_value(M, c) == pytest.approx(-1.25, abs=1e-15)
    assert e_value(AVaR(0.5), RandomScalar(HALF, np.array([0.0, np.inf]))) == np.inf


def test_u_value_examples():
    assert u_value(AVaR(0.7), B01) == pytest.approx(2 / 7, abs=1e-15)
    assert u_value(AVaR(0.5), B01) == pytest.approx(0.0, abs=1e-15)
    c = RandomScalar(HALF, np.array([4.0, 4.0]))
    assert u_value(MaxOfN(4), c) == pytest.approx(4.0, abs=1e-15)
    with pytest.raises(DomainError):
        u_value(AVaR(0.5), RandomScalar(HALF, np.array([0.0, np.inf])))


def test_two_point_closed_form():
    for t, s, a in [(0.0, 1.0, 0.7), (2.0, -1.0, 0.6), (0.3, 0.3, 0.9), (1.0, -2.0, 0.5)]:
        want = max(t, s) - abs(t - s) / (2 * a)
        assert u_value(AVaR(a), RandomScalar(HALF, np.array([t, s]))) == pytest.approx(want, abs=1e-14)


def test_density_band_greedy():
    sp = ScenarioSpace(np.array([0.2, 0.3, 0.5]))
    band = DensityBand(RandomScalar(sp, np.array([0.5, 0.5, 0.5])), RandomScalar(sp, np.array([2.0, 2.0, 2.0])))
    b = RandomScalar(sp, np.array([3.0, 1.0, 2.0]))
    # lower mass 0.5; then fill the best scenario (0) by 0.3, the next (2) by 0.2
    gamma = np.array([2.0, 0.5, 0.9])
    assert e_value(band, b) == pytest.approx(float(sp.probs @ (gamma * b.values)), abs=1e-14)


def test_extreme_density_examples():
    g = extreme_density_matrix(AVaR(0.5), HALF)
    assert sorted(map(tuple, g.tolist())) == [(0.0, 2.0), (2.0, 0.0)]
    assert extreme_density_matrix(Expectation(), ScenarioSpace.uniform(4)).tolist() == [[1.0] * 4]
    g3 = extreme_density_matrix(AVaR(1 / 3), ScenarioSpace.uniform(3))
    assert sorted(map(tuple, np.round(g3, 12).tolist())) == sorted(set(itertools.permutations((3.0, 0.0, 0.0))))
    assert len(extreme_densities(AVaR(0.5), HALF)) == 2


def test_extreme_density_guards():
    with pytest.raises(CapacityError):
        extreme_density_matrix(AVaR(0.5), ScenarioSpace.uniform(13))
    with pytest.raises(CapacityError):
        extreme_density_matrix(MaxOfN(2), ScenarioSpace.uniform(9))


def test_geometric_examples():
    b = RandomScalar(ScenarioSpace.uniform(3), np.array([0.5, -1.0, 2.0]))
    assert geometric_max_expectation(b, 1.0) == pytest.approx(b.mean(), abs=1e-15)
    series = sum(0.5 * 0.5 ** (k - 1) * (1 - 2.0 ** -k) for k in range(1, 200))
    assert geometric_max_expectation(B01, 0.5) == pytest.approx(2 / 3, abs=1e-15)
    assert series == pytest.approx(2 / 3, abs=1e-15)
    c = RandomScalar(HALF, np.array([7.0, 7.0]))
    assert geometric_max_expectation(c, 0.2) == pytest.approx(7.0, abs=1e-14)
    assert geometric_min_expectation(B01, 0.5) == pytest.approx(1 / 3, abs=1e-15)
    with pytest.raises(DomainError):
        geometric_max_expectation(B01, 0.0)
    with pytest.raises(DomainError):
        geometric_max_expectation(B01, 1.5)


def test_max_of_n_monte_carlo():
    est = monte_carlo_expectation(MaxOfN(3), B01, 200_000, seed=3)
    assert abs(est - 7 / 8) <= 3 * np.sqrt(7 / 8 * 1 / 8 / 200_000)
    with pytest.raises(DomainError):
        monte_carlo_expectation(AVaR(0.5), B01, 10)


@given(seeds, st.integers(1, 6), families)
def test_duality_and_oracle(seed, n, kind):
    rng = np.random.default_rng(seed)
    space = ScenarioSpace(random_probs(rng, n))
    M = _family(kind, rng, space)
    b = RandomScalar(space, rng.normal(size=n))
    assert u_value(M, b) == pytest.approx(-e_value(M, -b), abs=1e-12)
    G = extreme_density_matrix(M, space)
    vals = (G * space.probs) @ b.values
    assert e_value(M, b) == pytest.approx(vals.max(), abs=1e-9)
    assert u_value(M, b) == pytest.approx(vals.min(), abs=1e-9)
    np.testing.assert_allclose((G * space.probs).sum(axis=1), 1.0, atol=1e-9)
    if contains_unit_density(M):
        assert u_value(M, b) - 1e-12 <= b.mean() <= e_value(M, b) + 1e-12


@settings(max_examples=1000)
@given(seeds, st.integers(1, 6), families)
def test_subadditivity(seed, n, kind):
    rng = np.random.default_rng(seed)
    space = ScenarioSpace(random_probs(rng, n))
    M = _family(kind, rng, space)
    b1 = RandomScalar(space, rng.normal(size=n))
    b2 = RandomScalar(space, rng.normal(size=n))
    assert e_value(M, b1 + b2) <= e_value(M, b1) + e_value(M, b2) + 1e-12
    assert u_value(M, b1 + b2) >= u_value(M, b1) + u_value(M, b2) - 1e-12


@given(seeds, st.integers(1, 6))
def test_geometric_monotone_and_bounded(seed, n):
    rng = np.random.default_rng(seed)
    b = RandomScalar(ScenarioSpace(random_probs(rng, n)), rng.normal(size=n))
    vals = [geometric_max_expectation(b, lam) for lam in (1.0, 0.7, 0.5, 0.2, 0.05)]
    assert all(x <= y + 1e-12 for x, y in itertools.pairwise(vals))
    assert vals[-1] <= b.values.max() + 1e-12
