"""Applications: acceptability of set-valued portfolios, depth of a set, outlier flags."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import DomainError
from .geometry import Cone2, ConvexSet2, DirectionGrid
from .random_set import RandomConvexSet
from .scenario import RandomVector2, ScenarioSpace
from .set_expectation import (
    NonlinearSpec,
    parametric_sub,
    parametric_sub_exact,
    parametric_super,
    parametric_super_exact,
    superlinear_reduced_max,
)

log = logging.getLogger(__name__)

PROVENANCES = ("consumption_only", "full_exchange", "cone_exchange")
DEPTH_CONTAINMENT_TOL = 1e-6
EXACT_DEPTH_SCENARIOS = 10


@dataclass(frozen=True, eq=False)
class Portfolio:
    set: RandomConvexSet
    provenance: str
    exchange_cone: Cone2 | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise DomainError(f"unknown provenance {self.provenance!r}")
        cone = self.set.cone
        if self.provenance == "consumption_only" and not cone.equals(Cone2.lower_quadrant()):
            raise DomainError("consumption-only portfolios are lower sets")
        if self.provenance == "full_exchange" and cone.kind != "halfplane":
            raise DomainError("full-exchange portfolios have a half-plane recession cone")
        if self.provenance == "cone_exchange":
            if self.exchange_cone is None or not cone.equals(self.exchange_cone):
                raise DomainError("cone-exchange portfolios are declared with their exchange cone")


def make_portfolio(xi: RandomVector2, mode: str, K: Cone2 | None = None) -> Portfolio:
    """Positions reachable from the terminal wealth ``xi`` under the given exchange rules."""
    if mode == "consumption_only":
        C = Cone2.lower_quadrant()
        values = tuple(ConvexSet2.translate_cone(p, C) for p in xi.points)
        return Portfolio(RandomConvexSet(xi.space, values, C), mode)
    if mode == "full_exchange":
        C = Cone2.halfplane((1.0, 1.0))
        values = tuple(ConvexSet2.halfplane((1.0, 1.0), float(p.sum())) for p in xi.points)
        return Portfolio(RandomConvexSet(xi.space, values, C), mode)
    if mode == "cone_exchange":
        if K is None or K.kind != "wedge" or not K.contains_cone(Cone2.lower_quadrant()):
            raise DomainError("cone exchange needs a wedge containing the lower quadrant")
        values = tuple(ConvexSet2.translate_cone(p, K) for p in xi.points)
        return Portfolio(RandomConvexSet(xi.space, values, K), mode, K)
    raise DomainError(f"unknown provenance {mode!r}")


def is_acceptable(P: Portfolio, spec: NonlinearSpec) -> bool:
    """Whether the origin belongs to the superlinear expectation of the position set."""
    U = superlinear_reduced_max(P.set, spec)
    return (not U.is_empty) and U.contains_point((0.0, 0.0), tol=1e-9)


def risk_set(P: Portfolio, spec: NonlinearSpec) -> ConvexSet2:
    """``-U(X)``: the capital vectors that make the position acceptable."""
    return superlinear_reduced_max(P.set, spec).reflect()


@dataclass(frozen=True, eq=False)
class SampleOfSets:
    observations: tuple[ConvexSet2, ...]

    def __post_init__(self):
        obs = tuple(self.observations)
        if not obs:
            raise DomainError("a sample needs at least one observation")
        rec = obs[0].recession
        for i, o in enumerate(obs):
            if o.is_empty:
                raise DomainError(f"observation {i} is empty")
            if not o.recession.equals(rec, 1e-9):
                raise DomainError(f"observation {i} has a different recession cone")
        if rec.kind == "full":
            raise DomainError("observations must not be the whole plane")
        object.__setattr__(self, "observations", obs)

    def __len__(self) -> int:
        return len(self.observations)


def empirical_resample(sample: SampleOfSets) -> RandomConvexSet:
    """The random set taking each observation with equal probability."""
    n = len(sample)
    space = ScenarioSpace.uniform(n)
    return RandomConvexSet(space, sample.observations, sample.observations[0].recession)


def _families(X: RandomConvexSet, lam: float, grid: DirectionGrid | None, samples: int, seed: int):
    if X.n <= EXACT_DEPTH_SCENARIOS:
        return parametric_super_exact(X, lam), parametric_sub_exact(X, lam)
    return parametric_super(X, lam, samples, seed), parametric_sub(X, lam, grid)


def depth(
    F: ConvexSet2,
    X: RandomConvexSet,
    lambda_tol: float = 1e-3,
    *,
    grid: DirectionGrid | None = None,
    samples: int = 20_000,
    seed: int = 0,
) -> float:
    """Largest ``lambda`` with ``U_lambda(X) <= F <= E_lambda(X)``, to within ``lambda_tol``.

    Both parametric families are monotone in ``lambda``, so the condition
    holds on an interval ``(0, depth]``; it is located on the ladder
    ``1, 1/2, 1/4, ...`` and refined by bisection.
    """
    if not 0.0 < lambda_tol < 1.0:
        raise DomainError(f"lambda_tol must lie in (0, 1), got {lambda_tol}")
    if F.is_empty:
        raise DomainError("depth of the empty set is undefined")

    def holds(lam: float) -> bool:
        sup_set, sub_set = _families(X, lam, grid, samples, seed)
        if not (sup_set.is_empty or F.contains(sup_set, DEPTH_CONTAINMENT_TOL)):
            return False
        return sub_set.contains(F, DEPTH_CONTAINMENT_TOL)

    if holds(1.0):
        return 1.0
    hi = 1.0
    lam = 0.5
    while lam >= lambda_tol:
        if holds(lam):
            lo = lam
            while hi - lo > lambda_tol:
                mid = 0.5 * (lo + hi)
                if holds(mid):
                    lo = mid
                else:
                    hi = mid
            return lo
        hi = lam
        lam *= 0.5
    return 0.0


def flag_outliers(
    sample: SampleOfSets,
    spec: NonlinearSpec,
    threshold: float,
    lambda_tol: float = 1e-3,
    seed: int = 0,
) -> list[int]:
    """Indices whose leave-one-out depth falls below ``threshold``."""
    if threshold <= 0.0 or len(sample) < 2:
        return []
    flagged = []
    obs = sample.observations
    for i in range(len(obs)):
        rest = SampleOfSets(obs[:i] + obs[i + 1:])
        X = empirical_resample(rest)
        grid = spec.grid if spec.grid.restriction.equals(X.cone.polar()) else None
        d = depth(obs[i], X, lambda_tol, grid=grid, seed=seed)
        log.debug("observation %d: leave-one-out depth %.6f", i, d)
        if d < threshold:
            flagged.append(i)
    return flagged
