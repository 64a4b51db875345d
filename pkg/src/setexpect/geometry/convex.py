"""Closed convex subsets of the plane in vertex-plus-cone form.

A non-empty set is stored as ``conv(vertices) + recession``.  The vertex
list is canonical: for a pointed recession cone it holds exactly the
extreme points, counterclockwise; bounded sets start at the lowest (then
leftmost) vertex and unbounded ones start at the vertex whose normal cone
comes first inside the polar of the recession cone.  Sets whose recession
cone contains a line store one (halfplane) or two (strip) base points on
the boundary lines closest to the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .cone import (
    Cone2,
    angle_of,
    cone_intersection,
    cone_sum,
    rot_ccw,
    rot_cw,
    unit,
)

VERTEX_TOL = 1e-12
CONTAINS_TOL = 1e-9


def _scale(points: np.ndarray) -> float:
    if points.size == 0:
        return 1.0
    return 1.0 + float(np.max(np.abs(points)))


def hull_ccw(points, tol: float = VERTEX_TOL) -> np.ndarray:
    """Strictly convex CCW hull of a point cloud, starting lowest-leftmost.

    Points closer than ``tol * scale`` to the line through their hull
    neighbours are dropped, which also merges near-duplicates.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise DomainError("hull of no points")
    eps = tol * _scale(pts)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    if pts.shape[0] == 1:
        return pts.copy()
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()

    def chain(indices):
        h: list[int] = []
        for i in indices:
            px, py = xs[i], ys[i]
            while len(h) >= 2:
                o, a = h[-2], h[-1]
                ox, oy = xs[o], ys[o]
                vx, vy = px - ox, py - oy
                cr = (xs[a] - ox) * vy - (ys[a] - oy) * vx
                if cr <= eps * math.hypot(vx, vy):
                    h.pop()
                else:
                    break
            if h and abs(xs[h[-1]] - px) <= eps and abs(ys[h[-1]] - py) <= eps:
                continue
            h.append(i)
        return h

    n = len(xs)
    lower = chain(range(n))
    upper = chain(range(n - 1, -1, -1))
    idx = lower[:-1] + upper[:-1]
    if not idx:
        idx = [lower[0]]
    hull = pts[idx]
    # cyclic near-duplicate cleanup (only matters for tiny hulls)
    if hull.shape[0] > 1:
        keep = [0]
        for i in range(1, hull.shape[0]):
            if np.max(np.abs(hull[i] - hull[keep[-1]])) > eps:
                keep.append(i)
        if len(keep) > 1 and np.max(np.abs(hull[keep[-1]] - hull[keep[0]])) <= eps:
            keep.pop()
        hull = hull[keep]
    start = int(np.lexsort((hull[:, 0], hull[:, 1]))[0])
    return np.roll(hull, -start, axis=0)


def _normal_cone(hull: np.ndarray, i: int) -> Cone2:
    k = hull.shape[0]
    if k == 1:
        return Cone2.full()
    if k == 2:
        return Cone2.halfplane(hull[1 - i] - hull[i])
    n_prev = rot_cw(hull[i] - hull[i - 1])
    n_next = rot_cw(hull[(i + 1) % k] - hull[i])
    return Cone2.wedge(n_prev, n_next)


def _canonical(points: np.ndarray, rec: Cone2, tol: float) -> np.ndarray:
    if rec.kind == "full":
        return np.zeros((1, 2))
    if rec.kind == "halfplane":
        n = rot_cw(np.array(rec.dirs[0]))
        return (float(np.max(points @ n)) * n).reshape(1, 2)
    if rec.kind == "line":
        n = rot_ccw(np.array(rec.dirs[0]))
        proj = points @ n
        lo, hi = float(proj.min()), float(proj.max())
        if hi - lo <= tol * _scale(points):
            return (0.5 * (lo + hi) * n).reshape(1, 2)
        return np.vstack([lo * n, hi * n])
    hull = hull_ccw(points, tol)
    if rec.kind == "zero":
        return hull
    polar = rec.polar()
    a0 = angle_of(polar.dirs[0])
    kept = []
    for i in range(hull.shape[0]):
        both = cone_intersection(_normal_cone(hull, i), polar)
        if both.solid:
            rel = (angle_of(both.interior_direction()) - a0) % (2.0 * math.pi)
            kept.append((rel, i))
    if not kept:
        # numerically flat input: fall back to the point extreme for the
        # central polar direction
        u = polar.interior_direction()
        kept = [(0.0, int(np.argmax(hull @ u)))]
    kept.sort()
    return hull[[i for _, i in kept]]


@dataclass(frozen=True, eq=False)
class ConvexSet2:
    """Closed convex set ``conv(vertices) + recession`` (or the empty set)."""

    vertices: np.ndarray
    recession: Cone2 = Cone2("zero")
    is_empty: bool = False

    def __post_init__(self):
        if self.is_empty:
            v = np.zeros((0, 2))
        else:
            pts = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
            if pts.shape[0] == 0:
                raise DomainError("a non-empty convex set needs at least one point")
            if not np.all(np.isfinite(pts)):
                raise DomainError("vertices must be finite")
            v = _canonical(pts, self.recession, VERTEX_TOL)
        v = np.array(v, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    # constructors -------------------------------------------------------

    @classmethod
    def from_points(cls, points, recession: Cone2 | None = None) -> "ConvexSet2":
        return cls(np.asarray(points, dtype=float), recession or Cone2.zero())

    @classmethod
    def empty(cls) -> "ConvexSet2":
        return cls(np.zeros((0, 2)), Cone2.zero(), True)

    @classmethod
    def whole_plane(cls) -> "ConvexSet2":
        return cls(np.zeros((1, 2)), Cone2.full())

    @classmethod
    def point(cls, p) -> "ConvexSet2":
        return cls(np.asarray(p, dtype=float).reshape(1, 2), Cone2.zero())

    @classmethod
    def segment(cls, a, b) -> "ConvexSet2":
        return cls(np.array([a, b], dtype=float), Cone2.zero())

    @classmethod
    def box(cls, xlo, xhi, ylo, yhi) -> "ConvexSet2":
        if xlo > xhi or ylo > yhi:
            raise DomainError("box bounds are inverted")
        pts = [(xlo, ylo), (xhi, ylo), (xhi, yhi), (xlo, yhi)]
        return cls(np.array(pts, dtype=float), Cone2.zero())

    @classmethod
    def halfplane(cls, normal, offset: float) -> "ConvexSet2":
        """``{x : <normal, x> <= offset}``."""
        nrm = np.asarray(normal, dtype=float)
        length = math.hypot(nrm[0], nrm[1])
        n = unit(nrm)
        return cls((offset / length * n).reshape(1, 2), Cone2.halfplane(n))

    @classmethod
    def translate_cone(cls, x, cone: Cone2) -> "ConvexSet2":
        return cls(np.asarray(x, dtype=float).reshape(1, 2), cone)

    # basic queries ------------------------------------------------------

    @property
    def bounded(self) -> bool:
        return self.is_empty or self.recession.kind == "zero"

    @property
    def is_whole_plane(self) -> bool:
        return (not self.is_empty) and self.recession.kind == "full"

    @property
    def extent(self) -> float:
        """A length scale used for absolute tolerances."""
        return _scale(self.vertices)

    def __repr__(self) -> str:
        if self.is_empty:
            return "ConvexSet2(empty)"
        return f"ConvexSet2(vertices={self.vertices.tolist()}, recession={self.recession.kind})"

    def support(self, u) -> float:
        u = np.asarray(u, dtype=float)
        return float(self.support_many(u.reshape(1, 2))[0])

    def support_many(self, directions) -> np.ndarray:
        """Support values for each row of ``directions`` (+inf off the polar)."""
        U = np.asarray(directions, dtype=float).reshape(-1, 2)
        if self.is_empty:
            raise DomainError("support of the empty set is -inf by convention; branch on emptiness first")
        vals = np.max(U @ self.vertices.T, axis=1)
        mask = polar_mask(self.recession, U)
        return np.where(mask, vals, math.inf)

    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        """An exact H-representation ``{x : N x <= b}`` (unit normals)."""
        if self.is_empty:
            raise DomainError("the empty set has no halfspace description here")
        rec = self.recession
        if rec.kind == "full":
            return np.zeros((0, 2)), np.zeros(0)
        V = self.vertices
        polar = rec.polar()
        cands: list[np.ndarray] = [np.array(d) for d in polar.dirs]
        if rec.kind == "line":
            n = rot_ccw(np.array(rec.dirs[0]))
            cands = [n, -n]
        elif rec.kind != "halfplane":
            k = V.shape[0]
            if rec.kind == "zero" and k > 2:
                pairs = [(i, (i + 1) % k) for i in range(k)]
            else:
                pairs = [(i, i + 1) for i in range(k - 1)]
            for i, j in pairs:
                e = V[j] - V[i]
                if math.hypot(e[0], e[1]) > 0.0:
                    cands.append(unit(rot_cw(e)))
            if k == 2:
                e = unit(V[1] - V[0])
                cands += [rot_ccw(e), e, -e]
            cands += [np.array(v) for v in ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))]
            cands += [-g for g in rec.generators()]
        N = np.array(cands, dtype=float).reshape(-1, 2)
        N = N[polar_mask(rec, N)]
        N = _dedupe_directions(N)
        b = np.max(N @ V.T, axis=1)
        return N, b

    def contains_point(self, p, tol: float = CONTAINS_TOL) -> bool:
        if self.is_empty:
            return False
        N, b = self.halfspaces()
        if N.shape[0] == 0:
            return True
        p = np.asarray(p, dtype=float)
        eps = tol * max(self.extent, _scale(p.reshape(1, 2)))
        return bool(np.all(N @ p <= b + eps))

    def contains(self, other: "ConvexSet2", tol: float = CONTAINS_TOL) -> bool:
        """Whether ``other`` is a subset, up to an absolute support tolerance.

        Checked on 720 uniform directions plus the facet normals of both
        sets; the facet normals alone already make the test exact.
        """
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        if not self.recession.contains_cone(other.recession, 1e-9):
            return False
        if self.is_whole_plane:
            return True
        NA, _ = self.halfspaces()
        NB, _ = other.halfspaces()
        U = np.vstack([NA, NB, _VERIFY_GRID])
        U = U[polar_mask(self.recession, U)]
        return bool(np.all(other.support_many(U) <= self.support_many(U) + tol))

    # transformations ----------------------------------------------------

    def translate(self, a) -> "ConvexSet2":
        if self.is_empty:
            return self
        return ConvexSet2(self.vertices + np.asarray(a, dtype=float), self.recession)

    def scale(self, c: float) -> "ConvexSet2":
        if not c > 0:
            raise DomainError(f"scale factor must be positive, got {c}")
        if self.is_empty:
            return self
        return ConvexSet2(c * self.vertices, self.recession)

    def reflect(self) -> "ConvexSet2":
        if self.is_empty:
            return self
        return ConvexSet2(-self.vertices, self.recession.negate())

    def to_dict(self) -> dict:
        if self.is_empty:
            return {"empty": True}
        return {"vertices": self.vertices.tolist(), "cone": self.recession.to_dict()}


_VERIFY_GRID = np.column_stack(
    [np.cos(np.arange(720) * math.pi / 360.0), np.sin(np.arange(720) * math.pi / 360.0)]
)


def polar_mask(rec: Cone2, U: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rows of ``U`` lying in the polar of ``rec``."""
    U = np.asarray(U, dtype=float).reshape(-1, 2)
    norms = np.hypot(U[:, 0], U[:, 1])
    slack = tol * np.maximum(norms, 1.0)
    if rec.kind == "zero":
        return np.ones(U.shape[0], dtype=bool)
    if rec.kind == "full":
        return norms <= slack
    mask = np.ones(U.shape[0], dtype=bool)
    for g in rec.generators():
        mask &= U @ g <= slack
    return mask


def _dedupe_directions(N: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    if N.shape[0] == 0:
        return N
    ang = np.arctan2(N[:, 1], N[:, 0])
    order = np.argsort(ang, kind="stable")
    keep = [order[0]]
    for i in order[1:]:
        if np.max(np.abs(N[i] - N[keep[-1]])) > tol:
            keep.append(i)
    if len(keep) > 1 and np.max(np.abs(N[keep[-1]] - N[keep[0]])) <= tol:
        keep.pop()
    return N[keep]


def _polygon_sum(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Vertices of conv(P) + conv(Q) for point lists in convex position."""
    if P.shape[0] * Q.shape[0] <= 4096:
        return (P[:, None, :] + Q[None, :, :]).reshape(-1, 2)

    def edges(V):
        start = int(np.lexsort((V[:, 0], V[:, 1]))[0])
        V = np.roll(V, -start, axis=0)
        E = np.roll(V, -1, axis=0) - V
        ang = np.arctan2(E[:, 1], E[:, 0])
        ang = np.where(ang < 0.0, ang + 2.0 * math.pi, ang)
        return V[0], E, ang

    p0, EP, aP = edges(P)
    q0, EQ, aQ = edges(Q)
    E = np.vstack([EP, EQ])
    order = np.argsort(np.concatenate([aP, aQ]), kind="stable")
    pts = p0 + q0 + np.vstack([np.zeros((1, 2)), np.cumsum(E[order], axis=0)[:-1]])
    return pts


def minkowski_sum(a: ConvexSet2, b: ConvexSet2) -> ConvexSet2:
    if a.is_empty or b.is_empty:
        return ConvexSet2.empty()
    rec = cone_sum(a.recession, b.recession)
    if not rec.pointed:
        pts = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, 2)
        return ConvexSet2(pts, rec)
    return ConvexSet2(_polygon_sum(a.vertices, b.vertices), rec)


def minkowski_combination(sets, weights) -> ConvexSet2:
    """``sum_i w_i * A_i`` for nonnegative weights (zero weights are skipped)."""
    out = None
    for s, w in zip(sets, weights):
        w = float(w)
        if w < 0:
            raise DomainError("combination weights must be nonnegative")
        if w == 0.0:
            continue
        term = s.scale(w)
        out = term if out is None else minkowski_sum(out, term)
    if out is None:
        return ConvexSet2.point((0.0, 0.0))
    return out


def convex_hull(sets) -> ConvexSet2:
    """Closed convex hull of a union of convex sets (empty ones ignored)."""
    sets = [s for s in sets if not s.is_empty]
    if not sets:
        return ConvexSet2.empty()
    rec = cone_sum(*[s.recession for s in sets])
    pts = np.vstack([s.vertices for s in sets])
    return ConvexSet2(pts, rec)


def _arc_breaks(a: ConvexSet2, b: ConvexSet2, polar: Cone2) -> list[float]:
    Na, _ = a.halfspaces()
    Nb, _ = b.halfspaces()
    dirs = [*Na, *Nb, *[np.array(d) for d in polar.dirs]]
    if polar.kind == "full":
        dirs += [np.array(v) for v in ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))]
    angles = sorted({round(angle_of(d), 15) for d in dirs})
    return angles


def hausdorff(a: ConvexSet2, b: ConvexSet2) -> float:
    """Exact Hausdorff distance via the support-function sup over unit directions."""
    if a.is_empty or b.is_empty:
        raise DomainError("Hausdorff distance needs non-empty sets")
    if not a.recession.equals(b.recession, 1e-9):
        raise DomainError("Hausdorff distance needs identical recession cones")
    polar = a.recession.polar()
    if polar.kind == "zero":
        return 0.0
    if polar.kind in ("ray", "line"):
        U = np.array(polar.dirs)
        return float(np.max(np.abs(a.support_many(U) - b.support_many(U))))
    angles = _arc_breaks(a, b, polar)
    if polar.kind == "full":
        segs = [(angles[i], angles[(i + 1) % len(angles)]) for i in range(len(angles))]
        segs[-1] = (segs[-1][0], segs[-1][1] + 2.0 * math.pi)
    else:
        a0 = angle_of(polar.dirs[0])
        span = math.pi if polar.kind == "halfplane" else math.acos(
            max(-1.0, min(1.0, float(np.dot(polar.dirs[0], polar.dirs[1]))))
        )
        marks = {0.0, span}
        for t in angles:
            r = (t - a0) % (2.0 * math.pi)
            if r >= 2.0 * math.pi - 1e-12:
                r = 0.0
            if r <= span:
                marks.add(r)
        rel = sorted(marks)
        segs = [(a0 + rel[i], a0 + rel[i + 1]) for i in range(len(rel) - 1)]
    best = 0.0
    for t0, t1 in segs:
        if t1 - t0 <= 0.0:
            continue
        tm = 0.5 * (t0 + t1)
        um = np.array([math.cos(tm), math.sin(tm)])
        va = a.vertices[int(np.argmax(a.vertices @ um))]
        vb = b.vertices[int(np.argmax(b.vertices @ um))]
        w = va - vb
        for t in (t0, t1):
            best = max(best, abs(w[0] * math.cos(t) + w[1] * math.sin(t)))
        wn = math.hypot(w[0], w[1])
        if wn > 0.0:
            for s in (w, -w):
                ts = angle_of(s)
                rel = (ts - t0) % (2.0 * math.pi)
                if rel <= t1 - t0:
                    best = max(best, wn)
    return best
