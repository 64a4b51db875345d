import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from setexpect.errors import DomainError
from setexpect.geometry import Cone2, ConvexSet2, DirectionGrid, hausdorff, minkowski_sum
from setexpect.random_set import (
    RandomConvexSet,
    Selection,
    conditional_selection_expectation,
    firey_expectation,
    fixed_points,
    from_vector,
    selection_expectation,
    support_rv,
    support_set,
)
from setexpect.scenario import Partition, RandomVector2, ScenarioSpace

from conftest import LOWER, random_body_set, random_lower_set, random_probs, seeds

SQ = ConvexSet2.box(0, 1, 0, 1)
U720 = DirectionGrid.uniform(720).directions


def test_constructor_invariants():
    sp = ScenarioSpace.uniform(2)
    with pytest.raises(DomainError):
        RandomConvexSet(sp, (SQ, ConvexSet2.empty()))
    with pytest.raises(DomainError):
        RandomConvexSet(sp, (SQ, SQ), LOWER)  # squares are not lower sets
    with pytest.raises(DomainError):
        RandomConvexSet(sp, (SQ,))
    with pytest.raises(DomainError):
        RandomConvexSet(sp, (ConvexSet2.whole_plane(),) * 2, Cone2.full())


def test_support_rv_examples():
    sp = ScenarioSpace.uniform(2)
    xi = RandomVector2(sp, np.array([[1.0, 2.0], [-1.0, 0.5]]))
    X = from_vector(xi, LOWER)
    zeta = RandomVector2(sp, np.array([[1.0, 0.0], [0.6, 0.8]]))
    np.testing.assert_allclose(support_rv(X, zeta).values, [1.0, -0.2], atol=1e-15)
    eta = np.array([0.6, 0.8])
    H = RandomConvexSet(sp, (ConvexSet2.halfplane(eta, 1.5), ConvexSet2.halfplane(eta, -2.0)),
                        Cone2.halfplane(eta))
    assert support_rv(H, RandomVector2(sp, np.array([eta, eta]))).values == pytest.approx([1.5, -2.0])
    assert support_rv(H, RandomVector2(sp, np.array([[1.0, 0.0], eta]))).values[0] == math.inf


def test_selection_expectation_examples():
    sp = ScenarioSpace.uniform(2)
    X = RandomConvexSet(sp, (ConvexSet2.point((0, 0)), ConvexSet2.segment((0, 0), (2, 0))))
    assert hausdorff(selection_expectation(X), ConvexSet2.segment((0, 0), (1, 0))) == 0.0
    xi = RandomVector2(sp, np.array([[1.0, 2.0], [3.0, -2.0]]))
    np.testing.assert_allclose(selection_expectation(from_vector(xi)).vertices, [[2.0, 0.0]])
    # half-planes with two distinct non-opposite normals average to the plane
    n1, n2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    H = RandomConvexSet(sp, (ConvexSet2.halfplane(n1, 0.0), ConvexSet2.halfplane(n2, 0.0)))
    assert selection_expectation(H).is_whole_plane


def test_conditional_selection_expectation_examples(rng):
    X = random_body_set(rng, 3)
    one = conditional_selection_expectation(X, Partition.trivial(3))
    E = selection_expectation(X)
    assert all(hausdorff(v, E) <= 1e-12 for v in one.values)
    ident = conditional_selection_expectation(X, Partition.discrete(3))
    assert all(hausdorff(a, b) <= 1e-12 for a, b in zip(ident.values, X.values))
    part = conditional_selection_expectation(X, Partition(((0, 1), (2,))))
    p = X.space.probs
    for u in U720[::7]:
        want = (p[0] * X.values[0].support(u) + p[1] * X.values[1].support(u)) / (p[0] + p[1])
        assert part.values[0].support(u) == pytest.approx(want, abs=1e-12)
        assert part.values[1].support(u) == pytest.approx(want, abs=1e-12)
    assert hausdorff(part.values[2], X.values[2]) == 0.0


def test_firey_examples():
    sp = ScenarioSpace.uniform(2)
    X = RandomConvexSet(sp, (SQ, SQ.scale(3.0)))
    assert hausdorff(firey_expectation(X, 2.0), SQ.scale(math.sqrt(5.0))) <= 1e-9
    assert hausdorff(firey_expectation(X, 1.0), selection_expectation(X)) <= 1e-9
    det = RandomConvexSet(sp, (SQ, SQ))
    assert hausdorff(firey_expectation(det, 3.0), SQ) <= 1e-9
    with pytest.raises(DomainError):
        firey_expectation(RandomConvexSet(sp, (SQ.translate((1, 1)), SQ)), 2.0)
    with pytest.raises(DomainError):
        firey_expectation(X, 0.5)


def test_fixed_points_examples():
    sp = ScenarioSpace.uniform(2)
    X = RandomConvexSet(sp, (ConvexSet2.box(0, 2, 0, 1), ConvexSet2.box(1, 3, 0, 1)))
    assert hausdorff(fixed_points(X), ConvexSet2.box(1, 2, 0, 1)) <= 1e-12
    assert hausdorff(fixed_points(RandomConvexSet(sp, (SQ, SQ))), SQ) <= 1e-12
    assert fixed_points(RandomConvexSet(sp, (SQ, SQ.translate((5, 0))))).is_empty


def test_support_set_examples():
    sp = ScenarioSpace.uniform(2)
    two = RandomConvexSet(sp, (SQ, SQ.translate((2, 0))))
    assert hausdorff(support_set(two), ConvexSet2.box(0, 3, 0, 1)) == 0.0
    assert hausdorff(support_set(RandomConvexSet(sp, (SQ, SQ))), SQ) == 0.0
    pts = RandomConvexSet(sp, (ConvexSet2.point((0, 0)), ConvexSet2.point((1, 2))))
    assert hausdorff(support_set(pts), ConvexSet2.segment((0, 0), (1, 2))) == 0.0


def test_selection_validation():
    sp = ScenarioSpace.uniform(2)
    X = RandomConvexSet(sp, (SQ, SQ))
    Selection(X, RandomVector2(sp, np.array([[0.5, 0.5], [1.0, 1.0]])))
    with pytest.raises(DomainError):
        Selection(X, RandomVector2(sp, np.array([[0.5, 0.5], [1.5, 1.0]])))


@given(seeds, st.integers(1, 4))
def test_linearity_of_selection_expectation(seed, n):
    rng = np.random.default_rng(seed)
    X = random_body_set(rng, n)
    Y = RandomConvexSet(X.space, tuple(ConvexSet2(rng.normal(size=(4, 2))) for _ in range(n)))
    XY = RandomConvexSet(X.space, tuple(minkowski_sum(a, b) for a, b in zip(X.values, Y.values)))
    lhs = selection_expectation(XY)
    rhs = minkowski_sum(selection_expectation(X), selection_expectation(Y))
    assert hausdorff(lhs, rhs) <= 1e-9


@given(seeds, st.integers(1, 4))
def test_support_of_expectation_is_expected_support(seed, n):
    rng = np.random.default_rng(seed)
    X = random_lower_set(rng, n) if seed % 2 else random_body_set(rng, n)
    E = selection_expectation(X)
    H = X.support_matrix(U720)
    with np.errstate(invalid="ignore"):
        expected = np.where(np.isinf(H).any(axis=1), np.inf, H @ X.space.probs)
    got = E.support_many(U720)
    fin = np.isfinite(expected)
    assert np.array_equal(np.isinf(got), ~fin)
    np.testing.assert_allclose(got[fin], expected[fin], atol=1e-9)


@given(seeds, st.integers(2, 4))
def test_fixed_points_inside_expectation_inside_support_set(seed, n):
    rng = np.random.default_rng(seed)
    base = ConvexSet2(rng.normal(size=(5, 2)))
    space = ScenarioSpace(random_probs(rng, n))
    X = RandomConvexSet(space, tuple(minkowski_sum(base, ConvexSet2(0.5 * rng.normal(size=(3, 2)) + 0.3))
                                     for _ in range(n)))
    F = fixed_points(X)
    E = selection_expectation(X)
    assert support_set(X).contains(E, 1e-9)
    if not F.is_empty:
        assert E.contains(F, 1e-9)


@given(seeds, st.integers(1, 4))
def test_selection_expectations_lie_inside(seed, n):
    rng = np.random.default_rng(seed)
    X = random_body_set(rng, n)
    pts = []
    for v in X.values:
        w = rng.dirichlet(np.ones(v.vertices.shape[0]))
        pts.append(w @ v.vertices)
    sel = Selection(X, RandomVector2(X.space, np.array(pts)))
    assert selection_expectation(X).contains_point(sel.vector.mean(), 1e-9)


def _direction_choices(k: int):
    t = 2 * np.pi * np.arange(k) / k
    return np.column_stack([np.cos(t), np.sin(t)])


@given(seeds, st.integers(1, 3))
def test_scenario_wise_support_comparison_implies_inclusion(seed, n):
    """If ``E h(Y, zeta) <= E h(X, zeta)`` for all scenario-wise directions then ``Y <= X``."""
    rng = np.random.default_rng(seed)
    X = random_body_set(rng, n)
    shrink = rng.random() < 0.5
    Y = RandomConvexSet(X.space, tuple(
        ConvexSet2(0.5 * v.vertices + 0.5 * v.vertices.mean(axis=0)) if shrink
        else v.translate(rng.normal(scale=0.3, size=2))
        for v in X.values))
    dirs = _direction_choices(24)
    p = X.space.probs
    hx = np.array([v.support_many(dirs) for v in X.values])
    hy = np.array([v.support_many(dirs) for v in Y.values])
    dominated = all(
        float(p @ (hy[np.arange(n), list(c)] - hx[np.arange(n), list(c)])) <= 1e-12
        for c in itertools.product(range(24), repeat=n)
    )
    if dominated:
        assert all(a.contains(b, 1e-9) for a, b in zip(X.values, Y.values))
