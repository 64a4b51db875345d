"""Intersections of finitely many closed half-planes."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .cone import Cone2, conic_hull
from .convex import ConvexSet2


@dataclass(frozen=True)
class HalfSpace2:
    """``{x : <normal, x> <= offset}``; an infinite offset is the whole plane."""

    normal: tuple[float, float]
    offset: float

    def __post_init__(self):
        n = (float(self.normal[0]), float(self.normal[1]))
        length = math.hypot(*n)
        if length == 0.0:
            raise DomainError("half-plane normal must be nonzero")
        if math.isnan(self.offset) or self.offset == -math.inf:
            raise DomainError("half-plane offset must be a real number or +inf")
        # store a unit normal; the set itself is unchanged
        object.__setattr__(self, "normal", (n[0] / length, n[1] / length))
        object.__setattr__(self, "offset", float(self.offset) / length)

    def contains(self, p, tol: float = 1e-9) -> bool:
        return float(np.dot(self.normal, p)) <= self.offset + tol


def intersect_halfspaces(normals, offsets=None, tol: float = 1e-12) -> ConvexSet2:
    """Intersection of ``{x : <n_k, x> <= b_k}`` as a canonical convex set.

    Accepts either a list of :class:`HalfSpace2` or parallel arrays of
    normals and offsets.  Offsets equal to ``+inf`` are ignored; no
    constraints at all give the plane.  The recession cone is computed
    exactly from the normals, so unbounded and lower-dimensional results
    are handled without clipping artefacts.
    """
    if offsets is None:
        hs = list(normals)
        normals = [h.normal for h in hs]
        offsets = [h.offset for h in hs]
    N = np.asarray(normals, dtype=float).reshape(-1, 2)
    b = np.asarray(offsets, dtype=float).reshape(-1)
    if N.shape[0] != b.shape[0]:
        raise DomainError("normals and offsets differ in length")
    if np.isnan(b).any() or np.isnan(N).any():
        raise DomainError("half-plane data contains NaN")
    if np.isneginf(b).any():
        return ConvexSet2.empty()
    keep = np.isfinite(b)
    N, b = N[keep], b[keep]
    norms = np.hypot(N[:, 0], N[:, 1])
    zero = norms == 0.0
    if np.any(b[zero] < 0.0):
        return ConvexSet2.empty()
    N, b, norms = N[~zero], b[~zero], norms[~zero]
    if N.shape[0] == 0:
        return ConvexSet2.whole_plane()
    N = N / norms[:, None]
    b = b / norms
    scale = 1.0 + float(np.max(np.abs(b)))
    eps = tol * scale

    gen = conic_hull(N)
    rec = gen.polar()
    if rec.kind == "halfplane":
        n0 = np.array(gen.dirs[0])
        return ConvexSet2((float(b.min()) * n0).reshape(1, 2), Cone2.halfplane(n0))
    if rec.kind == "line":
        n0 = np.array(gen.dirs[0])
        pos = N @ n0 > 0.0
        hi = float(b[pos].min())
        lo = float((-b[~pos]).max())
        if lo > hi + eps:
            return ConvexSet2.empty()
        if lo > hi:
            lo = hi = 0.5 * (lo + hi)
        return ConvexSet2(np.vstack([lo * n0, hi * n0]), rec)

    box = 1e4 * scale
    for _ in range(4):
        verts = _clip(N, b, eps, box)
        if verts is None:
            return ConvexSet2.empty()
        if verts.shape[0] == 0:
            raise RuntimeError("half-plane intersection lost every finite vertex")
        if float(np.max(np.abs(verts))) < 0.25 * box:
            break
        box *= 1e3
    out = ConvexSet2(verts, rec)
    # sanity: every canonical vertex must satisfy every constraint
    viol = float(np.max(out.vertices @ N.T - b[None, :]))
    if viol > 1e-7 * max(scale, out.extent):
        return ConvexSet2.empty()
    return out


def _clip(N: np.ndarray, b: np.ndarray, eps: float, box: float):
    """Sorted-angle deque clipping; returns finite vertices or None if empty.

    Each constraint is a directed line with the feasible side on its left.
    Four far box lines make the working region bounded; only vertices
    formed by two genuine constraints are returned.
    """
    BN = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    allN = np.vstack([N, BN])
    allb = np.concatenate([b, np.full(4, box)])
    real = np.concatenate([np.ones(N.shape[0], dtype=bool), np.zeros(4, dtype=bool)])
    D = np.column_stack([-allN[:, 1], allN[:, 0]])
    ang = np.arctan2(D[:, 1], D[:, 0])
    order = np.lexsort((allb, ang))

    # merge (nearly) parallel constraints, keeping the tightest offset; angles a
    # few ulps apart may sort either way, so the group minimum is taken explicitly
    groups: list[int] = []
    last = None
    for i in order.tolist():
        if last is not None and ang[i] - last <= 1e-13:
            if allb[i] < allb[groups[-1]]:
                groups[-1] = i
            continue
        last = ang[i]
        groups.append(i)
    lines = []
    for i in groups:
        nx, ny = allN[i]
        lines.append((allb[i] * nx, allb[i] * ny, -ny, nx, nx, ny, allb[i], bool(real[i])))
    if len(lines) > 1 and ang[order[0]] + 2.0 * math.pi - last <= 1e-13:
        # first and last share a direction across the branch cut
        first, lst = lines[0], lines[-1]
        lines = lines[1:-1] + [first if first[6] <= lst[6] else lst]

    def inter(l1, l2):
        cr = l1[2] * l2[3] - l1[3] * l2[2]
        wx, wy = l2[0] - l1[0], l2[1] - l1[1]
        t = (wx * l2[3] - wy * l2[2]) / cr
        return (l1[0] + t * l1[2], l1[1] + t * l1[3])

    def out(l, p):
        return l[4] * p[0] + l[5] * p[1] - l[6] > eps

    dq: deque = deque()
    for h in lines:
        while len(dq) > 1 and out(h, inter(dq[-1], dq[-2])):
            dq.pop()
        while len(dq) > 1 and out(h, inter(dq[0], dq[1])):
            dq.popleft()
        if dq:
            top = dq[-1]
            cr = h[2] * top[3] - h[3] * top[2]
            if abs(cr) <= 1e-15:
                if h[2] * top[2] + h[3] * top[3] < 0.0:
                    # opposite neighbours with everything between them popped
                    return None
                if out(h, (top[0], top[1])):
                    dq.pop()
                else:
                    continue
        dq.append(h)
    while len(dq) > 2 and out(dq[0], inter(dq[-1], dq[-2])):
        dq.pop()
    while len(dq) > 2 and out(dq[-1], inter(dq[0], dq[1])):
        dq.popleft()
    if len(dq) < 3:
        return None
    L = list(dq)
    pts = []
    for i in range(len(L)):
        l1, l2 = L[i], L[(i + 1) % len(L)]
        if l1[7] and l2[7]:
            cr = l1[2] * l2[3] - l1[3] * l2[2]
            if abs(cr) <= 1e-15:
                continue
            pts.append(inter(l1, l2))
    return np.array(pts, dtype=float).reshape(-1, 2)
