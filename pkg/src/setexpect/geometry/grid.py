"""Finite sets of unit directions restricted to a cone of directions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .cone import Cone2, angle_of
from .convex import polar_mask


def _sort_from(dirs: np.ndarray, start_angle: float) -> np.ndarray:
    ang = (np.arctan2(dirs[:, 1], dirs[:, 0]) - start_angle) % (2.0 * math.pi)
    ang = np.where(ang >= 2.0 * math.pi - 1e-12, 0.0, ang)
    order = np.argsort(ang, kind="stable")
    dirs = dirs[order]
    ang = ang[order]
    keep = np.ones(dirs.shape[0], dtype=bool)
    keep[1:] = np.diff(ang) > 1e-13
    return dirs[keep]


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Unit directions inside ``restriction``, sorted counterclockwise.

    For a pointed restriction the boundary rays are always included exactly,
    so support values on the boundary of the admissible cone are not lost.
    """

    directions: np.ndarray
    restriction: Cone2

    def __post_init__(self):
        d = np.array(self.directions, dtype=float).reshape(-1, 2)
        d.setflags(write=False)
        object.__setattr__(self, "directions", d)

    @classmethod
    def uniform(cls, n: int, restriction: Cone2 | None = None) -> "DirectionGrid":
        if n < 1:
            raise DomainError("a direction grid needs at least one direction")
        restriction = restriction or Cone2.full()
        t = 2.0 * math.pi * np.arange(n) / n
        base = np.column_stack([np.cos(t), np.sin(t)])
        return cls._build(base, restriction)

    @classmethod
    def _build(cls, base: np.ndarray, restriction: Cone2) -> "DirectionGrid":
        if restriction.kind == "zero":
            return cls(np.zeros((0, 2)), restriction)
        if restriction.kind in ("ray", "line"):
            return cls(np.array(restriction.dirs), restriction)
        if restriction.kind == "full":
            return cls(_sort_from(base, 0.0), restriction)
        inside = base[_in_cone(restriction, base)]
        edges = np.array(restriction.dirs)
        dirs = np.vstack([edges, inside])
        return cls(_sort_from(dirs, angle_of(restriction.dirs[0])), restriction)

    def refined(self, extra) -> "DirectionGrid":
        """The grid plus the given extra directions that lie in the restriction."""
        E = np.asarray(extra, dtype=float).reshape(-1, 2)
        if E.shape[0] == 0 or self.restriction.kind in ("zero", "ray", "line"):
            return self
        norms = np.hypot(E[:, 0], E[:, 1])
        E = E[norms > 0.0] / norms[norms > 0.0, None]
        E = E[_in_cone(self.restriction, E)]
        dirs = np.vstack([self.directions, E])
        start = 0.0 if self.restriction.kind == "full" else angle_of(self.restriction.dirs[0])
        return DirectionGrid(_sort_from(dirs, start), self.restriction)

    def __len__(self) -> int:
        return int(self.directions.shape[0])


def _in_cone(cone: Cone2, U: np.ndarray) -> np.ndarray:
    """Rows of ``U`` inside ``cone`` (tested through its polar)."""
    return polar_mask(cone.polar(), U)
