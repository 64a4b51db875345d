"""Closed convex cones in the plane.

A cone is one of ``zero``, ``ray``, ``wedge`` (opening strictly between 0
and pi), ``halfplane``, ``line`` or ``full``.  Boundary directions are unit
vectors stored counterclockwise; for ``halfplane`` the cone is the closed
left side of ``dirs[0]`` and ``dirs[1] == -dirs[0]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

ANGLE_TOL = 1e-10
UNIT_TOL = 1e-12

KINDS = ("zero", "ray", "wedge", "halfplane", "line", "full")


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise DomainError("zero vector has no direction")
    return v / n


def rot_ccw(v) -> np.ndarray:
    return np.array([-v[1], v[0]], dtype=float)


def rot_cw(v) -> np.ndarray:
    return np.array([v[1], -v[0]], dtype=float)


def cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def angle_of(v) -> float:
    """Angle of ``v`` in ``[0, 2*pi)``."""
    a = math.atan2(v[1], v[0])
    return a + 2.0 * math.pi if a < 0.0 else a


@dataclass(frozen=True)
class Cone2:
    kind: str
    dirs: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown cone kind {self.kind!r}")
        expected = {"zero": 0, "full": 0, "ray": 1, "wedge": 2, "halfplane": 2, "line": 2}
        if len(self.dirs) != expected[self.kind]:
            raise DomainError(f"{self.kind} cone needs {expected[self.kind]} directions")
        dirs = tuple((float(d[0]), float(d[1])) for d in self.dirs)
        for d in dirs:
            if abs(math.hypot(*d) - 1.0) > 1e-9:
                raise DomainError("cone directions must be unit vectors")
        if self.kind == "wedge":
            c = cross(dirs[0], dirs[1])
            if c <= 0.0 or abs(c) <= ANGLE_TOL:
                raise DomainError("wedge directions must be counterclockwise with opening in (0, pi)")
        if self.kind in ("halfplane", "line"):
            if abs(dirs[0][0] + dirs[1][0]) > 1e-9 or abs(dirs[0][1] + dirs[1][1]) > 1e-9:
                raise DomainError(f"{self.kind} directions must be opposite")
        object.__setattr__(self, "dirs", dirs)

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "Cone2":
        return cls("zero")

    @classmethod
    def full(cls) -> "Cone2":
        return cls("full")

    @classmethod
    def ray(cls, d) -> "Cone2":
        u = unit(d)
        return cls("ray", (tuple(u),))

    @classmethod
    def line(cls, d) -> "Cone2":
        u = unit(d)
        return cls("line", (tuple(u), tuple(-u)))

    @classmethod
    def halfplane(cls, normal) -> "Cone2":
        """The cone ``{x : <normal, x> <= 0}``."""
        d = rot_ccw(unit(normal))
        return cls("halfplane", (tuple(d), tuple(-d)))

    @classmethod
    def wedge(cls, d1, d2) -> "Cone2":
        """Conic hull of two non-opposite directions (order is irrelevant)."""
        a, b = unit(d1), unit(d2)
        c = cross(a, b)
        if abs(c) <= ANGLE_TOL:
            if float(np.dot(a, b)) > 0.0:
                return cls.ray(a)
            raise DomainError("opposite directions span a line, not a wedge")
        if c < 0.0:
            a, b = b, a
        return cls("wedge", (tuple(a), tuple(b)))

    @classmethod
    def lower_quadrant(cls) -> "Cone2":
        return cls("wedge", ((-1.0, 0.0), (0.0, -1.0)))

    @classmethod
    def upper_quadrant(cls) -> "Cone2":
        return cls("wedge", ((1.0, 0.0), (0.0, 1.0)))

    # queries ------------------------------------------------------------

    @property
    def pointed(self) -> bool:
        return self.kind in ("zero", "ray", "wedge")

    @property
    def solid(self) -> bool:
        """True when the cone has non-empty interior."""
        return self.kind in ("wedge", "halfplane", "full")

    def generators(self) -> list[np.ndarray]:
        if self.kind == "zero":
            return []
        if self.kind == "full":
            return [np.array(v) for v in ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))]
        gens = [np.array(d) for d in self.dirs]
        if self.kind == "halfplane":
            gens.insert(1, rot_ccw(gens[0]))
        return gens

    def polar(self) -> "Cone2":
        k = self.kind
        if k == "zero":
            return Cone2.full()
        if k == "full":
            return Cone2.zero()
        d = [np.array(v) for v in self.dirs]
        if k == "ray":
            return Cone2.halfplane(d[0])
        if k == "wedge":
            return Cone2("wedge", (tuple(rot_ccw(d[1])), tuple(rot_cw(d[0]))))
        if k == "halfplane":
            return Cone2.ray(rot_cw(d[0]))
        return Cone2.line(rot_ccw(d[0]))

    def contains(self, r, tol: float = 1e-12) -> bool:
        """Membership of a vector (any length) with relative tolerance."""
        r = np.asarray(r, dtype=float)
        scale = max(1.0, math.hypot(r[0], r[1]))
        for g in self.polar().generators():
            if float(np.dot(g, r)) > tol * scale:
                return False
        if self.kind == "zero":
            return math.hypot(r[0], r[1]) <= tol * scale
        return True

    def support(self, u, tol: float = 1e-12) -> float:
        """0 on the polar cone, +inf elsewhere."""
        return 0.0 if self.polar().contains(u, tol) else math.inf

    def contains_cone(self, other: "Cone2", tol: float = 1e-10) -> bool:
        if self.kind == "full":
            return True
        return all(self.contains(g, tol) for g in other.generators())

    def equals(self, other: "Cone2", tol: float = 1e-10) -> bool:
        return self.contains_cone(other, tol) and other.contains_cone(self, tol)

    def negate(self) -> "Cone2":
        if self.kind in ("zero", "full"):
            return self
        d = [tuple(-np.array(v)) for v in self.dirs]
        if self.kind == "ray":
            return Cone2("ray", (d[0],))
        if self.kind == "wedge":
            return Cone2("wedge", (d[0], d[1]))
        if self.kind == "halfplane":
            return Cone2("halfplane", (d[0], d[1]))
        return Cone2.line(d[0])

    def interior_direction(self) -> np.ndarray | None:
        """A unit vector in the relative interior (None for the zero cone)."""
        if self.kind == "zero":
            return None
        if self.kind == "full":
            return np.array([1.0, 0.0])
        d = [np.array(v) for v in self.dirs]
        if self.kind in ("ray", "line"):
            return d[0]
        if self.kind == "halfplane":
            return rot_ccw(d[0])
        return unit(d[0] + d[1])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "dirs": [list(d) for d in self.dirs]}


def conic_hull(dirs) -> Cone2:
    """Smallest closed convex cone containing the given vectors."""
    V = np.asarray([np.asarray(v, dtype=float) for v in dirs], dtype=float).reshape(-1, 2)
    V = V[np.hypot(V[:, 0], V[:, 1]) > 0.0]
    if V.shape[0] == 0:
        return Cone2.zero()
    ang = np.sort(np.mod(np.arctan2(V[:, 1], V[:, 0]), 2.0 * math.pi))
    keep = np.ones(ang.size, dtype=bool)
    keep[1:] = np.diff(ang) > ANGLE_TOL
    # runs of nearly equal angles collapse onto their first member
    uniq = ang[keep].tolist()
    if len(uniq) > 1 and uniq[0] + 2.0 * math.pi - uniq[-1] <= ANGLE_TOL:
        uniq.pop()
    if len(uniq) == 1:
        return Cone2.ray((math.cos(uniq[0]), math.sin(uniq[0])))
    gaps = [uniq[i + 1] - uniq[i] for i in range(len(uniq) - 1)]
    gaps.append(uniq[0] + 2.0 * math.pi - uniq[-1])
    k = max(range(len(gaps)), key=gaps.__getitem__)
    g = gaps[k]
    start = uniq[(k + 1) % len(uniq)]
    end = uniq[k]
    d_start = np.array([math.cos(start), math.sin(start)])
    d_end = np.array([math.cos(end), math.sin(end)])
    if g > math.pi + ANGLE_TOL:
        return Cone2("wedge", (tuple(d_start), tuple(d_end)))
    if g >= math.pi - ANGLE_TOL:
        if len(uniq) == 2:
            return Cone2.line(d_start)
        return Cone2("halfplane", (tuple(d_start), tuple(-d_start)))
    return Cone2.full()


def polar_cone(c: Cone2) -> Cone2:
    return c.polar()


def cone_sum(*cones: Cone2) -> Cone2:
    """Closed conical hull of a union of cones (their Minkowski sum)."""
    gens = [g for c in cones for g in c.generators()]
    return conic_hull(gens)


def cone_intersection(*cones: Cone2) -> Cone2:
    gens = [g for c in cones for g in c.polar().generators()]
    return conic_hull(gens).polar()
