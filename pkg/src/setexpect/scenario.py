"""Finite probability spaces and scenario-indexed random quantities.

Everything here is immutable: arrays are copied on construction and
flagged read-only.  Extended reals use ``math.inf`` with the convention
``0 * inf = 0`` (see :func:`weighted_sum`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

PROB_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def weighted_sum(weights, values) -> float:
    """Sum of ``w * v`` over entries with ``w > 0``; +inf saturates."""
    w = np.asarray(weights, dtype=float)
    v = np.asarray(values, dtype=float)
    mask = w != 0.0
    if not mask.any():
        return 0.0
    v = v[mask]
    if np.isposinf(v).any():
        return math.inf
    return float(np.dot(w[mask], v))


@dataclass(frozen=True, eq=False)
class ScenarioSpace:
    probs: np.ndarray

    def __post_init__(self):
        p = _frozen(self.probs)
        if p.ndim != 1 or p.size < 1:
            raise DomainError("a scenario space needs at least one scenario")
        if not np.all(np.isfinite(p)) or np.any(p <= 0.0):
            raise DomainError("scenario weights must be strictly positive")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise DomainError(f"probs sum {total:.12g}, expected 1")
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, n: int) -> "ScenarioSpace":
        if n < 1:
            raise DomainError("a scenario space needs at least one scenario")
        # exact halves/quarters stay exact; others are corrected on the last entry
        p = np.full(n, 1.0 / n)
        p[-1] = 1.0 - p[:-1].sum()
        return cls(p)

    @property
    def n(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.n

    def same_as(self, other: "ScenarioSpace") -> bool:
        return self is other or (
            self.n == other.n and bool(np.array_equal(self.probs, other.probs))
        )


@dataclass(frozen=True, eq=False)
class RandomScalar:
    space: ScenarioSpace
    values: np.ndarray

    def __post_init__(self):
        v = _frozen(self.values)
        if v.shape != (self.space.n,):
            raise DomainError(
                f"expected {self.space.n} values, got shape {v.shape}"
            )
        if np.isnan(v).any() or np.isneginf(v).any():
            raise DomainError("random scalars take values in (-inf, inf]")
        object.__setattr__(self, "values", v)

    @property
    def finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def mean(self) -> float:
        return weighted_sum(self.space.probs, self.values)

    def __neg__(self) -> "RandomScalar":
        if not self.finite:
            raise DomainError("cannot negate a random scalar with +inf values")
        return RandomScalar(self.space, -self.values)

    def __add__(self, other) -> "RandomScalar":
        if isinstance(other, RandomScalar):
            _check_space(self.space, other.space)
            return RandomScalar(self.space, self.values + other.values)
        return RandomScalar(self.space, self.values + float(other))

    __radd__ = __add__

    def scaled(self, c: float) -> "RandomScalar":
        if c < 0:
            raise DomainError("only nonnegative scaling keeps values in (-inf, inf]")
        if c == 0:
            return RandomScalar(self.space, np.zeros(self.space.n))
        return RandomScalar(self.space, c * self.values)


@dataclass(frozen=True, eq=False)
class RandomVector2:
    space: ScenarioSpace
    points: np.ndarray

    def __post_init__(self):
        pts = _frozen(self.points)
        if pts.shape != (self.space.n, 2):
            raise DomainError(
                f"expected {self.space.n} planar points, got shape {pts.shape}"
            )
        if not np.all(np.isfinite(pts)):
            raise DomainError("random vector values must be finite")
        object.__setattr__(self, "points", pts)

    def mean(self) -> np.ndarray:
        return self.space.probs @ self.points

    def component(self, i: int) -> RandomScalar:
        return RandomScalar(self.space, self.points[:, i])

    def dot(self, u) -> RandomScalar:
        return RandomScalar(self.space, self.points @ np.asarray(u, dtype=float))

    def __add__(self, a) -> "RandomVector2":
        if isinstance(a, RandomVector2):
            _check_space(self.space, a.space)
            return RandomVector2(self.space, self.points + a.points)
        return RandomVector2(self.space, self.points + np.asarray(a, dtype=float))


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise DomainError("partition blocks must be non-empty")
            if seen.intersection(b):
                raise DomainError("partition blocks must be disjoint")
            seen.update(b)

    def validate_for(self, space: ScenarioSpace) -> None:
        covered = sorted(i for b in self.blocks for i in b)
        if covered != list(range(space.n)):
            raise DomainError("partition blocks must cover every scenario exactly once")

    @classmethod
    def trivial(cls, n: int) -> "Partition":
        return cls((tuple(range(n)),))

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(tuple((i,) for i in range(n)))


def _check_space(a: ScenarioSpace, b: ScenarioSpace) -> None:
    if not a.same_as(b):
        raise DomainError("operands live on different scenario spaces")


def all_partitions(n: int) -> Iterable[Partition]:
    """Enumerate every set partition of ``range(n)`` (Bell number many)."""

    def rec(items: Sequence[int]):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in rec(rest):
            yield [[first], *part]
            for k in range(len(part)):
                yield [*part[:k], [first, *part[k]], *part[k + 1:]]

    for blocks in rec(list(range(n))):
        yield Partition(tuple(tuple(b) for b in blocks))


def quantile(beta: RandomScalar, s: float) -> float:
    """Lower s-quantile of the discrete law of ``beta``."""
    if not 0.0 < s < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {s}")
    if not beta.finite:
        raise DomainError("quantile needs finite values")
    order = np.argsort(beta.values, kind="stable")
    cum = np.cumsum(beta.space.probs[order])
    idx = int(np.searchsorted(cum, s - 1e-14, side="left"))
    idx = min(idx, order.size - 1)
    return float(beta.values[order[idx]])


def conditional_expectation(beta: RandomScalar, part: Partition) -> RandomScalar:
    if not beta.finite:
        raise DomainError("conditional expectation needs finite values")
    part.validate_for(beta.space)
    p = beta.space.probs
    out = np.empty(beta.space.n)
    for block in part.blocks:
        idx = list(block)
        out[idx] = np.dot(p[idx], beta.values[idx]) / p[idx].sum()
    return RandomScalar(beta.space, out)
