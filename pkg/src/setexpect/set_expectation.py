"""Set-valued nonlinear expectations of planar random convex sets.

The sublinear expectation ``E`` and the reduced maximal superlinear
expectation ``U`` are built from their support functions: for each
direction ``u`` in the polar of the declared cone the scalar expectation
of ``h(X, u)`` gives one half-plane, and the result is the intersection.
The direction grid is augmented with every direction at which the
ordering of the scenario supports can change, so for order-based
families (AVaR, MaxOfN, expectation) the reconstruction is exact.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import CapacityError, DomainError
from .geometry import (
    Cone2,
    ConvexSet2,
    DirectionGrid,
    convex_hull,
    intersect_halfspaces,
    minkowski_combination,
)
from .geometry.cone import rot_cw
from .numeric_expectation import (
    AVaR,
    RepresentingFamily,
    _distorted,
    _e_array,
    extreme_density_matrix,
    geometric_transform,
)
from .random_set import (
    RandomConvexSet,
    breakpoint_directions,
    from_vector,
    selection_expectation,
)
from .scenario import RandomScalar, RandomVector2, ScenarioSpace

log = logging.getLogger(__name__)

DEFAULT_GRID = 3600
ORACLE_MAX_SCENARIOS = 6
SUBSET_MAX_SCENARIOS = 12


@dataclass(frozen=True, eq=False)
class NonlinearSpec:
    """Representing family, direction grid and declared cone ``C``.

    ``per_direction`` optionally maps unit directions to families; a grid
    direction uses the family of the nearest key (largest inner product).
    """

    family: RepresentingFamily
    grid: DirectionGrid
    cone: Cone2
    per_direction: tuple[tuple[tuple[float, float], RepresentingFamily], ...] | None = None

    def __post_init__(self):
        if self.cone.kind == "full":
            raise DomainError("the declared cone must not be the whole plane")
        if not self.grid.restriction.equals(self.cone.polar()):
            raise DomainError("grid restriction must equal the polar of the declared cone")
        if self.per_direction is not None:
            items = []
            for key, fam in self.per_direction:
                k = np.asarray(key, dtype=float)
                nk = math.hypot(k[0], k[1])
                if nk == 0.0:
                    raise DomainError("per-direction keys must be nonzero")
                items.append(((k[0] / nk, k[1] / nk), fam))
            if not items:
                raise DomainError("per-direction map is empty")
            object.__setattr__(self, "per_direction", tuple(items))

    def family_at(self, u) -> RepresentingFamily:
        if self.per_direction is None:
            return self.family
        u = np.asarray(u, dtype=float)
        keys = np.array([k for k, _ in self.per_direction])
        return self.per_direction[int(np.argmax(keys @ u))][1]


def make_spec(
    family: RepresentingFamily,
    cone: Cone2 | None = None,
    grid_size: int = DEFAULT_GRID,
    per_direction=None,
) -> NonlinearSpec:
    cone = cone or Cone2.zero()
    grid = DirectionGrid.uniform(grid_size, cone.polar())
    pd = tuple(per_direction.items()) if isinstance(per_direction, dict) else per_direction
    return NonlinearSpec(family, grid, cone, pd)


def _check_cone(X: RandomConvexSet, spec: NonlinearSpec) -> None:
    if not X.cone.equals(spec.cone, 1e-9):
        raise DomainError(
            f"random set declared cone ({X.cone.kind}) differs from the spec cone ({spec.cone.kind})"
        )


def _directions(X: RandomConvexSet, spec: NonlinearSpec) -> np.ndarray:
    extra = breakpoint_directions(X, spec.grid.restriction)
    return spec.grid.refined(extra).directions


def _scalar_offsets(X, spec, U, H, upper: bool) -> np.ndarray:
    p = X.space.probs
    out = np.empty(U.shape[0])
    for k in range(U.shape[0]):
        fam = spec.family_at(U[k])
        h = H[k]
        if upper:
            out[k] = _e_array(fam, p, h)
        else:
            out[k] = -_e_array(fam, p, -h)
    return out


def sublinear(X: RandomConvexSet, spec: NonlinearSpec) -> ConvexSet2:
    """Minimal sublinear expectation: support ``e_u(h(X, u))`` reconstructed by half-planes."""
    _check_cone(X, spec)
    U = _directions(X, spec)
    H = X.support_matrix(U)
    offsets = _scalar_offsets(X, spec, U, H, upper=True)
    if not np.isfinite(offsets).any():
        log.warning("sublinear expectation: every support offset is +inf; result is the whole plane")
        return ConvexSet2.whole_plane()
    return intersect_halfspaces(U, offsets)


def superlinear_reduced_max(X: RandomConvexSet, spec: NonlinearSpec) -> ConvexSet2:
    """Reduced maximal superlinear expectation: the largest set with support ``<= u_v(h(X, v))``.

    A direction where every scenario support is infinite imposes nothing.
    A direction where only some are infinite has no finite superlinear
    value and is rejected.
    """
    _check_cone(X, spec)
    U = _directions(X, spec)
    H = X.support_matrix(U)
    inf_rows = np.isinf(H)
    partial = inf_rows.any(axis=1) & ~inf_rows.all(axis=1)
    if partial.any():
        u = U[int(np.argmax(partial))]
        raise DomainError(
            f"support is +inf in some but not all scenarios at direction {u.tolist()}; "
            "the set is not closed under the declared cone as assumed"
        )
    offsets = np.full(U.shape[0], math.inf)
    fin = ~inf_rows.any(axis=1)
    offsets[fin] = _scalar_offsets(X, spec, U[fin], H[fin], upper=False)
    return intersect_halfspaces(U, offsets)


def _weighted_sets(X: RandomConvexSet, gammas: np.ndarray) -> list[ConvexSet2]:
    p = X.space.probs
    return [minkowski_combination(X.values, p * g) for g in gammas]


def _oracle_guard(X: RandomConvexSet, spec: NonlinearSpec, name: str) -> np.ndarray:
    if X.n > ORACLE_MAX_SCENARIOS:
        raise CapacityError(f"{name} enumerates densities for at most {ORACLE_MAX_SCENARIOS} scenarios")
    if spec.per_direction is not None:
        raise DomainError(f"{name} needs a single representing family")
    _check_cone(X, spec)
    return extreme_density_matrix(spec.family, X.space)


def sublinear_union_oracle(X: RandomConvexSet, spec: NonlinearSpec) -> ConvexSet2:
    """Hull of ``E(gamma X)`` over the extreme densities."""
    gammas = _oracle_guard(X, spec, "sublinear_union_oracle")
    return convex_hull(_weighted_sets(X, gammas))


def superlinear_intersection_oracle(X: RandomConvexSet, spec: NonlinearSpec) -> ConvexSet2:
    """Intersection of ``E(gamma X)`` over the extreme densities."""
    gammas = _oracle_guard(X, spec, "superlinear_intersection_oracle")
    return intersect_all(_weighted_sets(X, gammas))


def intersect_all(sets) -> ConvexSet2:
    """Intersection of convex sets (empty if any is empty)."""
    normals, offsets = [np.zeros((0, 2))], [np.zeros(0)]
    for s in sets:
        if s.is_empty:
            return ConvexSet2.empty()
        N, b = s.halfspaces()
        normals.append(N)
        offsets.append(b)
    return intersect_halfspaces(np.vstack(normals), np.concatenate(offsets))


def _u_scalar(spec: NonlinearSpec, u, values: np.ndarray, probs: np.ndarray) -> float:
    return -_e_array(spec.family_at(u), probs, -np.asarray(values, dtype=float))


def superlinear_cone_translate(xi: RandomVector2, K: Cone2, spec: NonlinearSpec) -> ConvexSet2:
    """Reduced maximal superlinear expectation of ``xi + K``.

    For a wedge ``K`` and a single family the result is ``x + K`` with
    ``x`` fixed by the two boundary normals of the polar cone: the map
    ``v -> u(<xi, v>)`` is concave on the polar wedge, so its largest
    linear minorant is the chord between the two boundary values.
    """
    if K.kind == "full":
        raise DomainError("K must not be the whole plane")
    probs = xi.space.probs
    if K.kind == "wedge" and spec.per_direction is None:
        G = np.array(K.polar().dirs)
        t = np.array([_u_scalar(spec, g, xi.points @ g, probs) for g in G])
        x = np.linalg.solve(G, t)
        return ConvexSet2.translate_cone(x, K)
    if spec.grid.restriction.equals(K.polar()):
        grid = spec.grid
    else:
        grid = DirectionGrid.uniform(max(len(spec.grid), 3), K.polar())
    U = grid.directions
    offsets = np.array([_u_scalar(spec, u, xi.points @ u, probs) for u in U])
    return intersect_halfspaces(U, offsets)


# ----------------------------------------------------------------------
# minimal superlinear extension (primal form over selections)


@dataclass(frozen=True)
class _Piece:
    base: tuple[float, float]
    direction: tuple[float, float]
    length: float  # math.inf for rays, 0 for a single point


def _boundary_pieces(F: ConvexSet2) -> list[_Piece]:
    V = F.vertices
    k = V.shape[0]
    pieces: list[_Piece] = []
    if F.recession.kind == "zero":
        if k == 1:
            return [_Piece(tuple(V[0]), (0.0, 0.0), 0.0)]
        pairs = [(i, (i + 1) % k) for i in range(k)] if k > 2 else [(0, 1)]
    else:
        pairs = [(i, i + 1) for i in range(k - 1)]
    for i, j in pairs:
        pieces.append(_Piece(tuple(V[i]), tuple(V[j] - V[i]), 1.0))
    if F.recession.kind != "zero":
        gens = [np.array(d) for d in F.recession.dirs]
        ends = {0, k - 1}
        for i in sorted(ends):
            for g in gens:
                pieces.append(_Piece(tuple(V[i]), tuple(g), math.inf))
    return pieces


def _sample_piece(piece: _Piece, resolution: int, ray_length: float) -> np.ndarray:
    b = np.array(piece.base)
    d = np.array(piece.direction)
    if piece.length == 0.0:
        return b.reshape(1, 2)
    top = piece.length if math.isfinite(piece.length) else ray_length
    t = np.linspace(0.0, top, resolution)
    return b + t[:, None] * d


class _LowerSearch:
    """Support oracle for the minimal superlinear extension over boundary selections."""

    def __init__(self, X: RandomConvexSet, spec: NonlinearSpec):
        self.X = X
        self.p = X.space.probs
        self.G = np.array(spec.cone.polar().dirs)  # rows g1, g2
        self.Ginv = np.linalg.inv(self.G)
        self.gammas = extreme_density_matrix(spec.family, X.space)
        self.W = self.gammas * self.p  # (k, n)
        self.pieces = [_boundary_pieces(v) for v in X.values]

    def u_pair(self, points: np.ndarray) -> np.ndarray:
        """``(u(<eta, g1>), u(<eta, g2>))`` for selections given as ``(..., n, 2)``."""
        proj = points @ self.G.T  # (..., n, 2)
        vals = np.einsum("...nj,kn->...kj", proj, self.W)
        return vals.min(axis=-2)

    def point_of(self, points: np.ndarray) -> np.ndarray:
        return self.u_pair(points) @ self.Ginv.T

    def lp(self, v: np.ndarray, combo: tuple[int, ...]):
        """Best selection on the given boundary pieces for direction ``v``."""
        c = self.Ginv.T @ v  # v = c1 g1 + c2 g2
        c = np.maximum(c, 0.0)
        n = self.X.n
        pcs = [self.pieces[w][i] for w, i in enumerate(combo)]
        B = np.array([pc.base for pc in pcs])  # (n, 2)
        D = np.array([pc.direction for pc in pcs])
        bproj = B @ self.G.T  # (n, 2)
        dproj = D @ self.G.T
        k = self.W.shape[0]
        A = np.zeros((2 * k, 2 + n))
        rhs = np.zeros(2 * k)
        for j in range(2):
            rows = slice(j * k, (j + 1) * k)
            A[rows, j] = 1.0
            A[rows, 2:] = -self.W * dproj[:, j]
            rhs[rows] = self.W @ bproj[:, j]
        bounds = [(None, None), (None, None)] + [
            (0.0, None if math.isinf(pc.length) else pc.length) for pc in pcs
        ]
        res = linprog(-np.concatenate([c, np.zeros(n)]), A_ub=A, b_ub=rhs, bounds=bounds, method="highs")
        if res.status != 0:
            raise RuntimeError(f"selection search LP failed: {res.message}")
        s = res.x[2:]
        eta = B + s[:, None] * D
        return self.point_of(eta[None])[0]


def superlinear_min_lower(X: RandomConvexSet, spec: NonlinearSpec, resolution: int = 400) -> ConvexSet2:
    """Minimal superlinear extension: closed hull of ``U(eta + C)`` over selections ``eta``.

    ``C`` must be a wedge, so that ``U(eta + C) = x(eta) + C`` with ``x``
    fixed by the two boundary normals of the polar cone.  All scenario
    values must share one pointed recession cone ``R`` (containing ``C``);
    then every point of ``X`` is a boundary point plus an element of ``C``
    and, by monotonicity, only boundary selections matter.  Candidate
    combinations of boundary pieces are pre-screened on ``resolution``
    samples per piece and optimised exactly by linear programming,
    direction by direction over the polar of ``R``, until the support
    polygon closes up.
    """
    if int(resolution) != resolution or resolution < 2:
        raise DomainError(f"resolution must be an integer >= 2, got {resolution}")
    resolution = int(resolution)
    _check_cone(X, spec)
    if spec.cone.kind != "wedge":
        raise DomainError("the minimal superlinear extension is implemented for wedge cones")
    if spec.per_direction is not None:
        raise DomainError("the minimal superlinear extension needs a single representing family")
    R = X.values[0].recession
    if not R.pointed:
        raise DomainError("scenario values must have a pointed recession cone")
    for i, v in enumerate(X.values):
        if not v.recession.equals(R, 1e-9):
            raise DomainError(f"scenario {i} has a different recession cone from scenario 0")
    search = _LowerSearch(X, spec)
    combos, seeds = _candidate_combos(search, resolution, R)
    scale = 1.0 + max(float(np.max(np.abs(v.vertices))) for v in X.values)
    tol = 1e-11 * scale

    def oracle(v):
        best, best_val = None, -math.inf
        for combo in combos:
            x = search.lp(v, combo)
            val = float(x @ v)
            if val > best_val:
                best, best_val = x, val
        return best

    r1, r2 = (np.array(d) for d in R.polar().dirs)
    points = [oracle(r1), oracle(r2)]

    def recover(va, pa, vb, pb, depth):
        e = pb - pa
        if depth > 40 or math.hypot(e[0], e[1]) <= tol:
            return []
        n = rot_cw(e)
        n = n / math.hypot(n[0], n[1])
        # the normal must lie strictly between va and vb
        if float(va[0] * n[1] - va[1] * n[0]) <= 0.0 or float(n[0] * vb[1] - n[1] * vb[0]) <= 0.0:
            return []
        q = oracle(n)
        if float(q @ n) <= max(float(pa @ n), float(pb @ n)) + tol:
            return []
        return recover(va, pa, n, q, depth + 1) + [q] + recover(n, q, vb, pb, depth + 1)

    points[1:1] = recover(r1, points[0], r2, points[1], 0)
    pts = np.vstack([np.array(points), seeds]) if seeds.size else np.array(points)
    return ConvexSet2(pts, R)


def _candidate_combos(search: _LowerSearch, resolution: int, R: Cone2, cap: int = 400_000):
    """Piece combinations worth optimising, plus the best sampled points."""
    sizes = [len(ps) for ps in search.pieces]
    total_pieces = math.prod(sizes)
    if total_pieces <= 64:
        return list(itertools.product(*[range(s) for s in sizes])), np.zeros((0, 2))
    scale = 1.0 + max(float(np.max(np.abs(v.vertices))) for v in search.X.values)
    samples, owners = [], []
    for ps in search.pieces:
        pts, own = [], []
        for i, pc in enumerate(ps):
            s = _sample_piece(pc, resolution, 2.0 * scale)
            pts.append(s)
            own.append(np.full(s.shape[0], i))
        samples.append(np.vstack(pts))
        owners.append(np.concatenate(own))
    m = [s.shape[0] for s in samples]
    if math.prod(m) > cap:
        if total_pieces <= 4096:
            return list(itertools.product(*[range(s) for s in sizes])), np.zeros((0, 2))
        raise CapacityError(
            f"boundary search needs {math.prod(m)} sample combinations (limit {cap}); lower the resolution"
        )
    idx = np.stack(np.meshgrid(*[np.arange(k) for k in m], indexing="ij"), axis=-1).reshape(-1, len(m))
    eta = np.stack([samples[w][idx[:, w]] for w in range(len(m))], axis=1)  # (M, n, 2)
    xs = search.point_of(eta)
    r1, r2 = (np.array(d) for d in R.polar().dirs)
    t = np.linspace(0.0, 1.0, 181)
    probes = (1.0 - t)[:, None] * r1 + t[:, None] * r2
    probes /= np.hypot(probes[:, 0], probes[:, 1])[:, None]
    win = np.unique(np.argmax(xs @ probes.T, axis=0))
    combos = {tuple(int(owners[w][idx[r, w]]) for w in range(len(m))) for r in win}
    return sorted(combos), xs[win]


def example62(a, pi: float, pi_prime: float, alpha: float, resolution: int = 400):
    """Two-point lower-set example with cone ``K`` spanned by ``(-pi', 1)`` and ``(1, -pi)``.

    ``X = xi + K`` is treated as a random lower set (declared cone the
    lower quadrant) with ``xi`` equal to ``0`` or ``a`` with probability
    one half each, and AVaR at level ``alpha``.  Returns the pair
    ``(reduced maximal U, minimal extension)``; the first is ``x + K``.
    """
    if not (pi > 1 and pi_prime > 1):
        raise DomainError("pi and pi' must exceed 1")
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    K = example62_cone(pi, pi_prime)
    space = ScenarioSpace(np.array([0.5, 0.5]))
    xi = RandomVector2(space, np.array([[0.0, 0.0], np.asarray(a, dtype=float)]))
    spec = make_spec(AVaR(alpha), Cone2.lower_quadrant())
    X = RandomConvexSet(
        space, tuple(ConvexSet2.translate_cone(p, K) for p in xi.points), Cone2.lower_quadrant()
    )
    return superlinear_cone_translate(xi, K, spec), superlinear_min_lower(X, spec, resolution)


def example62_cone(pi: float, pi_prime: float) -> Cone2:
    return Cone2.wedge((-pi_prime, 1.0), (1.0, -pi))


def vector_sublinear(xi: RandomVector2, spec: NonlinearSpec) -> np.ndarray:
    """Componentwise sublinear expectation ``(e(xi_1), e(xi_2))``."""
    if not spec.cone.equals(Cone2.lower_quadrant(), 1e-12):
        raise DomainError("vector_sublinear needs the lower-quadrant cone")
    p = xi.space.probs
    out = []
    for i, u in enumerate(((1.0, 0.0), (0.0, 1.0))):
        out.append(_e_array(spec.family_at(np.array(u)), p, xi.points[:, i]))
    return np.array(out)


def zonoid_region(xi: RandomVector2, alpha: float, grid_size: int = DEFAULT_GRID) -> ConvexSet2:
    """Zonoid-trimmed region ``{E(gamma xi): gamma in P_alpha}``."""
    fam = AVaR(alpha)
    if xi.space.n <= 12:
        gammas = extreme_density_matrix(fam, xi.space)
        pts = (gammas * xi.space.probs) @ xi.points
        return ConvexSet2(pts, Cone2.zero())
    return sublinear(from_vector(xi), make_spec(fam, Cone2.zero(), grid_size))


def lift_expectation(beta: RandomScalar) -> ConvexSet2:
    """Zonotope of points ``(E gamma', E(gamma' beta))`` with ``gamma'`` in ``[0, 1]`` scenario-wise."""
    if not beta.finite:
        raise DomainError("the lift expectation needs finite values")
    segs = [ConvexSet2.segment((0.0, 0.0), (1.0, b)) for b in beta.values]
    return minkowski_combination(segs, beta.space.probs)


def lift_slice(Z: ConvexSet2, alpha: float) -> tuple[float, float]:
    """``alpha^{-1} {x : (alpha, x) in Z}`` as an interval."""
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    N, b = Z.halfspaces()
    lo, hi = -math.inf, math.inf
    for (nx, ny), bb in zip(N, b):
        rest = bb - nx * alpha
        if abs(ny) <= 1e-15:
            if rest < -1e-12:
                raise DomainError("the slice is empty")
            continue
        if ny > 0:
            hi = min(hi, rest / ny)
        else:
            lo = max(lo, rest / ny)
    if lo > hi + 1e-12:
        raise DomainError("the slice is empty")
    return lo / alpha, hi / alpha


# ----------------------------------------------------------------------
# parametric families driven by a geometric number of draws


def _check_lambda(lam: float) -> None:
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda must lie in (0, 1], got {lam}")


def geometric_subset_probabilities(probs: np.ndarray, lam: float) -> np.ndarray:
    """Law of the set of distinct scenarios met in ``N`` draws, ``N`` geometric(``lam``).

    Entry ``mask`` of the result is ``P(S = mask)`` for the bitmask of a
    subset.  Uses ``P(S within B) = G(p(B))`` and Moebius inversion.
    """
    _check_lambda(lam)
    n = len(probs)
    if n > SUBSET_MAX_SCENARIOS:
        raise CapacityError(f"subset enumeration is limited to {SUBSET_MAX_SCENARIOS} scenarios")
    masks = np.arange(1 << n)
    pB = np.zeros(1 << n)
    for i in range(n):
        pB += np.where(masks & (1 << i), probs[i], 0.0)
    f = geometric_transform(np.minimum(pB, 1.0), lam)
    f[0] = 0.0
    for i in range(n):
        bit = 1 << i
        has = (masks & bit) != 0
        f[has] = f[has] - f[masks[has] ^ bit]
    f[0] = 0.0
    return np.maximum(f, 0.0)


def _subset_members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask & (1 << i)]


def parametric_sub(X: RandomConvexSet, lam: float, grid: DirectionGrid | None = None) -> ConvexSet2:
    """``E(co(X_1 u ... u X_N))`` via its support function ``E max h(X_i, u)``."""
    _check_lambda(lam)
    grid = grid or DirectionGrid.uniform(DEFAULT_GRID, X.cone.polar())
    U = grid.refined(breakpoint_directions(X, grid.restriction)).directions
    H = X.support_matrix(U)
    p = X.space.probs
    offsets = np.array([_distorted(p, h, lambda F: geometric_transform(F, lam)) for h in H])
    if not np.isfinite(offsets).any():
        return ConvexSet2.whole_plane()
    return intersect_halfspaces(U, offsets)


def parametric_sub_exact(X: RandomConvexSet, lam: float) -> ConvexSet2:
    """Same set as :func:`parametric_sub`, by enumerating the subsets of distinct draws."""
    w = geometric_subset_probabilities(X.space.probs, lam)
    sets, weights = [], []
    for mask in np.nonzero(w > 0.0)[0]:
        members = _subset_members(int(mask), X.n)
        sets.append(convex_hull([X.values[i] for i in members]))
        weights.append(w[mask])
    weights = np.array(weights) / np.sum(weights)
    return minkowski_combination(sets, weights)


def parametric_super_exact(X: RandomConvexSet, lam: float) -> ConvexSet2:
    """``E(X_1 n ... n X_N)``; empty once some reachable intersection is empty."""
    w = geometric_subset_probabilities(X.space.probs, lam)
    sets, weights = [], []
    for mask in np.nonzero(w > 0.0)[0]:
        inter = intersect_all([X.values[i] for i in _subset_members(int(mask), X.n)])
        if inter.is_empty:
            log.info("parametric_super_exact: draws %s have empty intersection", _subset_members(int(mask), X.n))
            return ConvexSet2.empty()
        sets.append(inter)
        weights.append(w[mask])
    weights = np.array(weights) / np.sum(weights)
    return minkowski_combination(sets, weights)


def draw_subsets(probs: np.ndarray, lam: float, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo draws of the distinct-scenario bitmask; returns (masks, counts)."""
    _check_lambda(lam)
    if samples < 1:
        raise DomainError("need at least one Monte Carlo sample")
    n = len(probs)
    if n > 62:
        raise CapacityError("Monte Carlo bitmasks support at most 62 scenarios")
    rng = np.random.default_rng(seed)
    N = rng.geometric(lam, size=samples)
    idx = rng.choice(n, size=int(N.sum()), p=probs)
    bits = np.left_shift(np.int64(1), idx.astype(np.int64))
    starts = np.concatenate([[0], np.cumsum(N)[:-1]])
    masks = np.bitwise_or.reduceat(bits, starts)
    return np.unique(masks, return_counts=True)


def parametric_super(X: RandomConvexSet, lam: float, samples: int = 100_000, seed: int = 0) -> ConvexSet2:
    """Monte Carlo version of ``E(X_1 n ... n X_N)`` with a fixed seed."""
    masks, counts = draw_subsets(X.space.probs, lam, samples, seed)
    sets = []
    for mask in masks:
        members = _subset_members(int(mask), X.n)
        inter = intersect_all([X.values[i] for i in members])
        if inter.is_empty:
            log.warning(
                "parametric_super: sampled draws %s have empty intersection; result is empty", members
            )
            return ConvexSet2.empty()
        sets.append(inter)
    return minkowski_combination(sets, counts / counts.sum())


__all__ = [
    "NonlinearSpec",
    "example62",
    "example62_cone",
    "geometric_subset_probabilities",
    "intersect_all",
    "lift_expectation",
    "lift_slice",
    "make_spec",
    "parametric_sub",
    "parametric_sub_exact",
    "parametric_super",
    "parametric_super_exact",
    "selection_expectation",
    "sublinear",
    "sublinear_union_oracle",
    "superlinear_cone_translate",
    "superlinear_intersection_oracle",
    "superlinear_min_lower",
    "superlinear_reduced_max",
    "vector_sublinear",
    "zonoid_region",
]
