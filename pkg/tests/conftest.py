"""Shared random-instance builders and hypothesis strategies."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from setexpect.geometry import Cone2, ConvexSet2
from setexpect.random_set import RandomConvexSet
from setexpect.scenario import RandomScalar, RandomVector2, ScenarioSpace

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

LOWER = Cone2.lower_quadrant()


def random_probs(rng: np.random.Generator, n: int) -> np.ndarray:
    p = rng.dirichlet(np.full(n, 2.0))
    p = np.maximum(p, 0.02)
    p = p / p.sum()
    p[-1] = 1.0 - p[:-1].sum()
    return p


def random_polygon(rng: np.random.Generator, k: int = 5, spread: float = 1.0, center=(0.0, 0.0)):
    return ConvexSet2(np.asarray(center) + spread * rng.normal(size=(k, 2)))


def random_body_set(rng: np.random.Generator, n: int, k: int = 5) -> RandomConvexSet:
    """Random bounded polygons on ``n`` scenarios with random weights."""
    space = ScenarioSpace(random_probs(rng, n))
    vals = tuple(random_polygon(rng, k, center=rng.normal(size=2)) for _ in range(n))
    return RandomConvexSet(space, vals)


def random_lower_set(rng: np.random.Generator, n: int, k: int = 4, space=None) -> RandomConvexSet:
    """Random lower sets ``conv(points) + R_-^2``."""
    space = space or ScenarioSpace(random_probs(rng, n))
    vals = tuple(ConvexSet2(rng.normal(size=(k, 2)) + rng.normal(size=2), LOWER) for _ in range(space.n))
    return RandomConvexSet(space, vals, LOWER)


def random_vector(rng: np.random.Generator, n: int, space=None) -> RandomVector2:
    space = space or ScenarioSpace(random_probs(rng, n))
    return RandomVector2(space, rng.normal(size=(space.n, 2)))


def random_scalar(rng: np.random.Generator, n: int, space=None) -> RandomScalar:
    space = space or ScenarioSpace(random_probs(rng, n))
    return RandomScalar(space, np.round(rng.normal(size=space.n), 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


coords = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)
points = st.lists(st.tuples(coords, coords), min_size=1, max_size=7)
angles = st.floats(min_value=0.0, max_value=2.0 * np.pi, allow_nan=False)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def polygons(draw):
    return ConvexSet2(np.array(draw(points), dtype=float))


@st.composite
def directions(draw):
    t = draw(angles)
    return np.array([np.cos(t), np.sin(t)])


@st.composite
def pointed_cones(draw):
    kind = draw(st.sampled_from(["zero", "ray", "wedge"]))
    t = draw(angles)
    if kind == "zero":
        return Cone2.zero()
    if kind == "ray":
        return Cone2.ray((np.cos(t), np.sin(t)))
    w = draw(st.floats(min_value=0.05, max_value=np.pi - 0.05))
    return Cone2.wedge((np.cos(t), np.sin(t)), (np.cos(t + w), np.sin(t + w)))


# acceptance reporting -----------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
