"""Random closed convex sets on a finite scenario space and their linear expectations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import (
    Cone2,
    ConvexSet2,
    DirectionGrid,
    cone_intersection,
    convex_hull,
    intersect_halfspaces,
    minkowski_combination,
)
from .geometry.cone import angle_of, rot_ccw
from .scenario import Partition, RandomScalar, RandomVector2, ScenarioSpace


@dataclass(frozen=True, eq=False)
class RandomConvexSet:
    """Scenario-wise non-empty closed convex sets sharing a declared cone.

    ``cone`` is the cone ``C`` the values are assumed to be ``C``-closed
    for; every value's recession cone must contain it.
    """

    space: ScenarioSpace
    values: tuple[ConvexSet2, ...]
    cone: Cone2 = Cone2("zero")

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != self.space.n:
            raise DomainError(f"expected {self.space.n} scenario values, got {len(values)}")
        if self.cone.kind == "full":
            raise DomainError("the declared cone must not be the whole plane")
        for i, v in enumerate(values):
            if not isinstance(v, ConvexSet2):
                raise DomainError(f"scenario {i} is not a convex set")
            if v.is_empty:
                raise DomainError(f"scenario {i} is empty")
            if not v.recession.contains_cone(self.cone, 1e-9):
                raise DomainError(f"scenario {i} is not closed under the declared cone")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.space.n

    def support_values(self, u) -> np.ndarray:
        """``h(X(omega), u)`` for every scenario (may contain +inf)."""
        u = np.asarray(u, dtype=float).reshape(1, 2)
        return np.array([v.support_many(u)[0] for v in self.values])

    def support_matrix(self, directions) -> np.ndarray:
        """Support values, shape ``(len(directions), n)``."""
        U = np.asarray(directions, dtype=float).reshape(-1, 2)
        return np.column_stack([v.support_many(U) for v in self.values])

    def common_recession(self) -> Cone2:
        return cone_intersection(*[v.recession for v in self.values])

    def translate(self, xi: RandomVector2) -> "RandomConvexSet":
        return RandomConvexSet(
            self.space, tuple(v.translate(p) for v, p in zip(self.values, xi.points)), self.cone
        )


def from_vector(xi: RandomVector2, cone: Cone2 | None = None) -> RandomConvexSet:
    """The random set ``xi + C`` (or the singleton ``{xi}`` for the zero cone)."""
    cone = cone or Cone2.zero()
    return RandomConvexSet(
        xi.space, tuple(ConvexSet2.translate_cone(p, cone) for p in xi.points), cone
    )


@dataclass(frozen=True, eq=False)
class Selection:
    """A random vector lying in ``X`` in every scenario."""

    rset: RandomConvexSet
    vector: RandomVector2

    def __post_init__(self):
        if not self.vector.space.same_as(self.rset.space):
            raise DomainError("selection lives on another scenario space")
        for i, (v, p) in enumerate(zip(self.rset.values, self.vector.points)):
            if not v.contains_point(p):
                raise DomainError(f"scenario {i}: point {p.tolist()} is outside the set")


def support_rv(X: RandomConvexSet, zeta: RandomVector2) -> RandomScalar:
    """The random variable ``omega -> h(X(omega), zeta(omega))``."""
    if not zeta.space.same_as(X.space):
        raise DomainError("direction lives on another scenario space")
    vals = [v.support(p) for v, p in zip(X.values, zeta.points)]
    return RandomScalar(X.space, np.array(vals))


def selection_expectation(X: RandomConvexSet) -> ConvexSet2:
    """Weighted Minkowski average of the scenario values."""
    return minkowski_combination(X.values, X.space.probs)


def conditional_selection_expectation(X: RandomConvexSet, part: Partition) -> RandomConvexSet:
    part.validate_for(X.space)
    p = X.space.probs
    out: list[ConvexSet2 | None] = [None] * X.n
    for block in part.blocks:
        idx = list(block)
        w = p[idx] / p[idx].sum()
        avg = minkowski_combination([X.values[i] for i in idx], w)
        for i in idx:
            out[i] = avg
    return RandomConvexSet(X.space, tuple(out), X.cone)


def firey_expectation(X: RandomConvexSet, p: float, grid: DirectionGrid | None = None) -> ConvexSet2:
    """Set with support ``(E h(X,u)^p)^(1/p)``, reconstructed on a direction grid.

    Support values must be nonnegative, which holds exactly when every
    scenario value contains the origin.
    """
    if not p >= 1:
        raise DomainError(f"Firey exponent must be at least 1, got {p}")
    for i, v in enumerate(X.values):
        if not v.contains_point((0.0, 0.0), tol=0.0):
            raise DomainError(f"scenario {i} does not contain the origin: negative support values")
    grid = grid or DirectionGrid.uniform(3600, X.cone.polar())
    H = X.support_matrix(grid.directions)
    probs = X.space.probs
    with np.errstate(invalid="ignore", over="ignore"):
        finite = np.all(np.isfinite(H), axis=1)
        offsets = np.full(H.shape[0], np.inf)
        Hf = np.maximum(H[finite], 0.0)
        offsets[finite] = (Hf**p @ probs) ** (1.0 / p)
    return intersect_halfspaces(grid.directions, offsets)


def fixed_points(X: RandomConvexSet) -> ConvexSet2:
    """Points lying in every scenario value (possibly empty)."""
    normals, offsets = [], []
    for v in X.values:
        N, b = v.halfspaces()
        normals.append(N)
        offsets.append(b)
    return intersect_halfspaces(np.vstack(normals), np.concatenate(offsets))


def support_set(X: RandomConvexSet) -> ConvexSet2:
    """Closed convex hull of the union of all scenario values."""
    return convex_hull(X.values)


def breakpoint_directions(X: RandomConvexSet, restriction: Cone2) -> np.ndarray:
    """Directions where some order relation between scenario supports can change.

    Between two consecutive returned directions every scenario has a fixed
    active vertex and the ranking of the support values is constant, so
    order-based functionals of ``h(X, u)`` are linear in ``u`` on each arc.
    """
    fan = []
    for v in X.values:
        if v.is_whole_plane:
            continue
        N, _ = v.halfspaces()
        fan.extend(N)
    fan.extend(np.array(d) for d in restriction.dirs)
    if restriction.kind == "full":
        fan.extend(np.array(d) for d in ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))
    if not fan:
        return np.zeros((0, 2))
    angles = np.unique(np.round([angle_of(d) for d in fan], 14))
    out = [np.column_stack([np.cos(angles), np.sin(angles)])]
    mids = np.append(angles, angles[0] + 2.0 * math.pi)
    pairs = list(itertools.combinations(range(X.n), 2))
    for t0, t1 in zip(mids[:-1], mids[1:]):
        if t1 - t0 <= 1e-14:
            continue
        tm = 0.5 * (t0 + t1)
        um = np.array([math.cos(tm), math.sin(tm)])
        act = []
        for v in X.values:
            if v.is_whole_plane:
                act.append(None)
            else:
                act.append(v.vertices[int(np.argmax(v.vertices @ um))])
        for i, j in pairs:
            if act[i] is None or act[j] is None:
                continue
            w = act[i] - act[j]
            if math.hypot(w[0], w[1]) <= 1e-15:
                continue
            for c in (rot_ccw(w), -rot_ccw(w)):
                a = (angle_of(c) - t0) % (2.0 * math.pi)
                if 0.0 < a < t1 - t0:
                    out.append((c / math.hypot(c[0], c[1])).reshape(1, 2))
    return np.vstack(out)
