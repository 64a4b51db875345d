"""Sublinear and superlinear numerical expectations on a finite scenario space.

A numeric expectation is described by a closed convex family of densities
``gamma >= 0`` with ``E gamma = 1``:

    e(beta) = sup_gamma E[gamma beta],    u(beta) = inf_gamma E[gamma beta] = -e(-beta).

The families below have closed-form evaluations; their extreme densities
are enumerated explicitly for the set-valued oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError
from .scenario import RandomScalar, ScenarioSpace, weighted_sum

MAX_EXTREME_SCENARIOS = 12
MAX_PERMUTATION_SCENARIOS = 8


class RepresentingFamily:
    """Base class; subclasses are frozen dataclasses."""

    def e(self, beta: RandomScalar) -> float:
        return e_value(self, beta)

    def u(self, beta: RandomScalar) -> float:
        return u_value(self, beta)


@dataclass(frozen=True)
class Expectation(RepresentingFamily):
    """The singleton family ``{1}``: plain expectation."""


@dataclass(frozen=True)
class AVaR(RepresentingFamily):
    """Densities bounded by ``1/alpha``: average of the upper alpha-tail."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"AVaR level must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class MaxOfN(RepresentingFamily):
    """``e(beta) = E max(beta_1, ..., beta_n)`` over i.i.d. copies."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"MaxOfN needs a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True, eq=False)
class DensityBand(RepresentingFamily):
    """Densities with ``lower <= gamma <= upper`` scenario-wise."""

    lower: RandomScalar
    upper: RandomScalar

    def __post_init__(self):
        if not self.lower.space.same_as(self.upper.space):
            raise DomainError("band bounds live on different scenario spaces")
        lo, hi = self.lower.values, self.upper.values
        if np.any(lo < 0.0) or np.any(lo > hi):
            raise DomainError("need 0 <= lower <= upper")
        p = self.lower.space.probs
        if weighted_sum(p, lo) > 1.0 + 1e-12 or weighted_sum(p, hi) < 1.0 - 1e-12:
            raise DomainError("the band contains no probability density")


def _check_space(M: RepresentingFamily, space: ScenarioSpace) -> None:
    if isinstance(M, DensityBand) and not M.lower.space.same_as(space):
        raise DomainError("density band and argument live on different scenario spaces")


def e_value(M: RepresentingFamily, beta: RandomScalar) -> float:
    """Sublinear expectation of ``beta`` (values in ``(-inf, inf]``)."""
    _check_space(M, beta.space)
    return _e_array(M, beta.space.probs, beta.values)


def u_value(M: RepresentingFamily, beta: RandomScalar) -> float:
    """Superlinear expectation; needs finite values."""
    if not beta.finite:
        raise DomainError("the superlinear expectation needs finite values")
    _check_space(M, beta.space)
    return -_e_array(M, beta.space.probs, -beta.values)


def _e_array(M: RepresentingFamily, p: np.ndarray, v: np.ndarray) -> float:
    if isinstance(M, Expectation):
        return weighted_sum(p, v)
    if isinstance(M, AVaR):
        order = np.argsort(-v, kind="stable")
        mass = p[order]
        cum = np.cumsum(mass)
        take = np.clip(M.alpha - (cum - mass), 0.0, mass)
        return weighted_sum(take, v[order]) / M.alpha
    if isinstance(M, MaxOfN):
        return _distorted(p, v, lambda F: F ** M.n)
    if isinstance(M, DensityBand):
        gamma = _band_density(p, v, M.lower.values, M.upper.values)
        return weighted_sum(p * gamma, v)
    raise DomainError(f"unsupported representing family {type(M).__name__}")


def _distorted(p: np.ndarray, v: np.ndarray, G) -> float:
    """``sum_j v_j (G(F_j) - G(F_{j-1}))`` over distinct values in increasing order."""
    vals, inv = np.unique(v, return_inverse=True)
    mass = np.bincount(inv.ravel(), weights=p, minlength=vals.size)
    F = np.minimum(np.cumsum(mass), 1.0)
    F[-1] = 1.0
    GF = G(F)
    w = np.diff(np.concatenate([[0.0], GF]))
    return weighted_sum(w, vals)


def _band_density(p, v, lo, hi) -> np.ndarray:
    gamma = lo.astype(float).copy()
    rest = 1.0 - float(np.dot(p, lo))
    for i in np.argsort(-v, kind="stable"):
        if rest <= 0.0:
            break
        add = min((hi[i] - lo[i]) * p[i], rest)
        gamma[i] += add / p[i]
        rest -= add
    return gamma


def geometric_max_expectation(beta: RandomScalar, lam: float) -> float:
    """``E max(beta_1..beta_N)`` with ``N`` geometric on {1,2,...}, ``P(N=k)=lam(1-lam)^(k-1)``."""
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda must lie in (0, 1], got {lam}")
    return _distorted(beta.space.probs, beta.values, lambda F: geometric_transform(F, lam))


def geometric_min_expectation(beta: RandomScalar, lam: float) -> float:
    if not beta.finite:
        raise DomainError("the geometric minimum needs finite values")
    return -geometric_max_expectation(-beta, lam)


def geometric_transform(F, lam: float):
    """Distribution function of the maximum: ``lam F / (1 - (1 - lam) F)``."""
    F = np.asarray(F, dtype=float)
    return lam * F / (1.0 - (1.0 - lam) * F)


def contains_unit_density(M: RepresentingFamily) -> bool:
    """Whether the constant density 1 belongs to the family (so u <= E <= e)."""
    if isinstance(M, DensityBand):
        return bool(np.all(M.lower.values <= 1.0) and np.all(M.upper.values >= 1.0))
    return True


def extreme_densities(M: RepresentingFamily, space: ScenarioSpace) -> list[RandomScalar]:
    """Extreme densities of the family as random scalars on ``space``."""
    return [RandomScalar(space, g) for g in extreme_density_matrix(M, space)]


def extreme_density_matrix(M: RepresentingFamily, space: ScenarioSpace) -> np.ndarray:
    """Extreme points of the representing family, shape ``(k, n)``.

    Box families are enumerated through their basic solutions; the
    maximum-of-n family through marginal vectors of its distortion.
    """
    n = space.n
    p = space.probs
    if isinstance(M, Expectation):
        return np.ones((1, n))
    if n > MAX_EXTREME_SCENARIOS:
        raise CapacityError(
            f"extreme densities enumerated for at most {MAX_EXTREME_SCENARIOS} scenarios, got {n}"
        )
    if isinstance(M, AVaR):
        return _box_vertices(p, np.zeros(n), np.full(n, 1.0 / M.alpha))
    if isinstance(M, DensityBand):
        _check_space(M, space)
        return _box_vertices(p, M.lower.values, M.upper.values)
    if isinstance(M, MaxOfN):
        if n > MAX_PERMUTATION_SCENARIOS:
            raise CapacityError(
                f"MaxOfN extreme densities need n! marginal vectors; limit is "
                f"{MAX_PERMUTATION_SCENARIOS} scenarios, got {n}"
            )
        return _marginal_vectors(p, lambda q: 1.0 - (1.0 - q) ** M.n)
    raise DomainError(f"unsupported representing family {type(M).__name__}")


def _box_vertices(p, lo, hi, tol: float = 1e-12) -> np.ndarray:
    n = p.size
    if n == 1:
        return np.ones((1, 1))
    bits = np.array(list(itertools.product((0, 1), repeat=n - 1)), dtype=bool)
    out = []
    for f in range(n):
        others = [i for i in range(n) if i != f]
        vals = np.where(bits, hi[others], lo[others])
        rest = 1.0 - vals @ p[others]
        g = rest / p[f]
        ok = (g >= lo[f] - tol) & (g <= hi[f] + tol)
        if not ok.any():
            continue
        cand = np.empty((int(ok.sum()), n))
        cand[:, others] = vals[ok]
        cand[:, f] = np.clip(g[ok], lo[f], hi[f])
        out.append(cand)
    if not out:
        raise DomainError("the band contains no probability density")
    G = np.vstack(out)
    return np.unique(np.round(G, 12), axis=0)


def _marginal_vectors(p, g) -> np.ndarray:
    n = p.size
    out = []
    for perm in itertools.permutations(range(n)):
        gamma = np.empty(n)
        prev = 0.0
        cum = 0.0
        for i in perm:
            cum += p[i]
            cur = g(min(cum, 1.0))
            gamma[i] = (cur - prev) / p[i]
            prev = cur
        out.append(gamma)
    return np.unique(np.round(np.array(out), 12), axis=0)


def e_from_extremes(gammas: np.ndarray, p: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Vectorised ``max_gamma E[gamma beta]`` for rows of ``values`` (finite)."""
    return np.max(np.atleast_2d(values) @ (gammas * p).T, axis=1)


def u_from_extremes(gammas: np.ndarray, p: np.ndarray, values: np.ndarray) -> np.ndarray:
    return np.min(np.atleast_2d(values) @ (gammas * p).T, axis=1)


def monte_carlo_expectation(
    M: RepresentingFamily, beta: RandomScalar, samples: int, seed: int = 0
) -> float:
    """Sampling estimate for the MaxOfN family (used as an independent check)."""
    if not isinstance(M, MaxOfN):
        raise DomainError("Monte Carlo estimates are provided for MaxOfN only")
    if not beta.finite:
        raise DomainError("Monte Carlo needs finite values")
    rng = np.random.default_rng(seed)
    idx = rng.choice(beta.space.n, size=(samples, M.n), p=beta.space.probs)
    return float(np.mean(np.max(beta.values[idx], axis=1)))
