import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from setexpect.errors import DomainError
from setexpect.geometry import (
    Cone2,
    ConvexSet2,
    DirectionGrid,
    HalfSpace2,
    cone_intersection,
    cone_sum,
    conic_hull,
    convex_hull,
    hausdorff,
    intersect_halfspaces,
    minkowski_combination,
    minkowski_sum,
    polar_cone,
)

from conftest import LOWER, directions, pointed_cones, polygons

SQ = ConvexSet2.box(0, 1, 0, 1)
SQ2 = ConvexSet2.box(0, 2, 0, 2)
R2 = math.sqrt(2.0)


# cones ----------------------------------------------------------------


def test_cone_constructors_and_validation():
    with pytest.raises(DomainError):
        Cone2("wedge", ((1.0, 0.0), (-1.0, 0.0)))
    with pytest.raises(DomainError):
        Cone2("ray", ((2.0, 0.0),))
    assert Cone2.wedge((1, 0), (1, 0)).kind == "ray"
    w = Cone2.wedge((0, 1), (1, 0))  # order is normalised to counterclockwise
    assert w.contains((1, 1)) and not w.contains((-1, 1))


def test_polar_examples():
    assert polar_cone(LOWER).equals(Cone2.upper_quadrant())
    assert polar_cone(Cone2.zero()).kind == "full"
    p = polar_cone(Cone2.ray((1, 0)))
    assert p.kind == "halfplane"
    assert p.contains((-1, 5)) and p.contains((0, -1)) and not p.contains((0.1, 1))


@given(pointed_cones())
def test_double_polar(c):
    assert polar_cone(polar_cone(c)).equals(c, 1e-9)


def test_double_polar_halfplane_and_line():
    for c in (Cone2.halfplane((1, 2)), Cone2.line((1, 1))):
        assert polar_cone(polar_cone(c)).equals(c, 1e-12)


def test_conic_hull_sum_and_intersection():
    assert conic_hull([(1, 0), (0, 1), (-1, 0)]).kind == "halfplane"
    assert conic_hull([(1, 0), (-1, 0)]).kind == "line"
    assert conic_hull([(1, 0), (0, 1), (-1, -0.5), (0.5, -1)]).kind == "full"
    assert cone_sum(Cone2.ray((1, 0)), Cone2.ray((0, 1))).equals(Cone2.upper_quadrant())
    assert cone_intersection(LOWER, Cone2.upper_quadrant()).kind == "zero"
    assert cone_intersection(LOWER, Cone2.halfplane((1, 1))).equals(LOWER)


# support ----------------------------------------------------------------


def test_support_examples():
    assert SQ.support((0, 1)) == 1.0
    A = ConvexSet2.translate_cone((1, 2), LOWER)
    assert A.support(np.array([1, 1]) / R2) == pytest.approx(3 / R2, abs=1e-15)
    assert A.support(np.array([1, -1]) / R2) == math.inf


def test_support_of_empty_set_is_an_error():
    with pytest.raises(DomainError):
        ConvexSet2.empty().support((1, 0))


@given(polygons(), directions(), directions(), st.floats(0.1, 10.0))
def test_support_sublinear_and_homogeneous(A, u, v, c):
    assert A.support(u + v) <= A.support(u) + A.support(v) + 1e-9
    assert A.support(c * u) == pytest.approx(c * A.support(u), abs=1e-9)


# Minkowski arithmetic -----------------------------------------------------


def test_minkowski_examples():
    assert hausdorff(minkowski_sum(SQ, SQ), SQ2) == 0.0
    a = ConvexSet2.translate_cone((1, 0), LOWER)
    b = ConvexSet2.translate_cone((0, 1), LOWER)
    s = minkowski_sum(a, b)
    assert s.recession.equals(LOWER)
    np.testing.assert_array_equal(s.vertices, [[1.0, 1.0]])
    assert minkowski_sum(SQ, ConvexSet2.empty()).is_empty


def test_minkowski_recession_is_conic_hull():
    s = minkowski_sum(ConvexSet2.translate_cone((0, 0), Cone2.ray((1, 0))),
                      ConvexSet2.translate_cone((0, 0), Cone2.ray((0, 1))))
    assert s.recession.equals(Cone2.upper_quadrant())


@given(polygons(), polygons(), directions())
def test_support_additive(A, B, u):
    assert minkowski_sum(A, B).support(u) == pytest.approx(A.support(u) + B.support(u), abs=1e-9)


def test_minkowski_combination_many_vertices():
    t = np.linspace(0, 2 * np.pi, 90, endpoint=False)
    circ = ConvexSet2(np.column_stack([np.cos(t), np.sin(t)]))
    sq = ConvexSet2.box(-1, 1, -1, 1)
    m = minkowski_combination([circ, sq], [0.25, 0.75])
    for u in DirectionGrid.uniform(97).directions:
        assert m.support(u) == pytest.approx(0.25 * circ.support(u) + 0.75 * sq.support(u), abs=1e-12)


def test_scale_examples():
    assert hausdorff(SQ.scale(2.0), SQ2) == 0.0
    assert hausdorff(SQ.scale(1.0), SQ) == 0.0
    h = ConvexSet2.translate_cone((2, 2), LOWER).scale(0.5)
    np.testing.assert_array_equal(h.vertices, [[1.0, 1.0]])
    assert h.recession.equals(LOWER)
    with pytest.raises(DomainError):
        SQ.scale(0.0)
    with pytest.raises(DomainError):
        SQ.scale(-1.0)


# half-plane intersection ------------------------------------------------------


def test_intersect_halfspaces_examples():
    hs = [HalfSpace2((1, 0), 1), HalfSpace2((-1, 0), 0), HalfSpace2((0, 1), 1), HalfSpace2((0, -1), 0)]
    assert hausdorff(intersect_halfspaces(hs), SQ) <= 1e-15
    assert intersect_halfspaces([HalfSpace2((1, 0), 0), HalfSpace2((-1, 0), -1)]).is_empty


def test_intersect_halfspaces_grid_reconstruction():
    U = DirectionGrid.uniform(3600).directions
    rec = intersect_halfspaces(U, SQ.support_many(U))
    assert hausdorff(rec, SQ) <= 1e-3


def test_intersect_halfspaces_unbounded_and_degenerate():
    assert intersect_halfspaces([(1, 0)], [2.0]).recession.kind == "halfplane"
    strip = intersect_halfspaces([(1, 0), (-1, 0)], [1.0, 1.0])
    assert strip.recession.kind == "line"
    assert intersect_halfspaces([(1, 0), (-1, 0)], [1.0, -1.0]).vertices.shape[0] == 1
    corner = intersect_halfspaces([(1, 0), (0, 1)], [1.0, 2.0])
    assert corner.recession.equals(LOWER)
    np.testing.assert_allclose(corner.vertices, [[1.0, 2.0]])
    assert intersect_halfspaces([(1, 0)], [math.inf]).is_whole_plane


def test_halfspace_validation():
    with pytest.raises(DomainError):
        HalfSpace2((0, 0), 1.0)
    with pytest.raises(DomainError):
        HalfSpace2((1, 0), -math.inf)
    assert HalfSpace2((2, 0), 2.0).offset == 1.0


def test_nearly_parallel_constraints_keep_the_tightest():
    # two normals a few ulps apart: the looser one sorts first by angle
    t = -1.0464771925378065
    n_loose = (math.cos(t), math.sin(t))
    n_tight = (math.cos(t + 3e-15), math.sin(t + 3e-15))
    N = [n_loose, n_tight, (1, 0), (0, 1), (-1, 0), (0, -1)]
    b = [1.0042, 1.002969, 2.0, 2.0, 2.0, 2.0]
    out = intersect_halfspaces(N, b)
    assert not out.is_empty
    assert out.support(n_tight) == pytest.approx(1.002969, abs=1e-9)


@given(polygons())
def test_halfspace_round_trip(A):
    N, b = A.halfspaces()
    assume(N.shape[0] > 0)
    assert hausdorff(intersect_halfspaces(N, b), A) <= 1e-9


# containment and distance ------------------------------------------------------


def test_contains_examples():
    assert SQ2.contains(SQ)
    assert not SQ.contains(SQ2)
    assert SQ.contains(ConvexSet2.empty())
    assert not ConvexSet2.empty().contains(SQ)
    assert ConvexSet2.translate_cone((0, 0), LOWER).contains(ConvexSet2.translate_cone((-1, 0), LOWER))
    assert not SQ.contains(ConvexSet2.translate_cone((0, 0), LOWER))


def test_hausdorff_examples():
    assert hausdorff(SQ, SQ2) == pytest.approx(R2, abs=1e-15)
    assert hausdorff(SQ, SQ) == 0.0
    a = ConvexSet2.translate_cone((0, 0), LOWER)
    b = ConvexSet2.translate_cone((1, 0), LOWER)
    assert hausdorff(a, b) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        hausdorff(a, SQ)
    with pytest.raises(DomainError):
        hausdorff(SQ, ConvexSet2.empty())


@given(polygons(), polygons())
def test_hausdorff_zero_iff_mutual_containment(A, B):
    if hausdorff(A, B) == 0.0:
        assert A.contains(B, 0.0) and B.contains(A, 0.0)
    if A.contains(B, 0.0) and B.contains(A, 0.0):
        assert hausdorff(A, B) <= 1e-12


@given(polygons(), polygons())
def test_hausdorff_matches_support_grid(A, B):
    U = DirectionGrid.uniform(720).directions
    grid = float(np.max(np.abs(A.support_many(U) - B.support_many(U))))
    assert grid <= hausdorff(A, B) + 1e-12


def test_convex_hull_examples():
    seg = convex_hull([ConvexSet2.point((0, 0)), ConvexSet2.point((1, 1))])
    assert hausdorff(seg, ConvexSet2.segment((0, 0), (1, 1))) == 0.0
    two = convex_hull([SQ, SQ.translate((2, 0))])
    assert hausdorff(two, ConvexSet2.box(0, 3, 0, 1)) == 0.0
    assert len(two.vertices) == 4
    assert hausdorff(convex_hull([SQ]), SQ) == 0.0


def test_convex_hull_recession():
    h = convex_hull([ConvexSet2.translate_cone((0, 0), Cone2.ray((1, 0))),
                     ConvexSet2.translate_cone((0, 5), Cone2.ray((0, -1)))])
    assert h.recession.equals(Cone2.wedge((0, -1), (1, 0)))


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=12), pointed_cones())
def test_canonical_form_is_consistent(pts, cone):
    A = ConvexSet2(np.array(pts), cone)
    V = A.vertices
    # no duplicated vertices and every vertex is a genuine support point
    assert len({tuple(v) for v in V.tolist()}) == V.shape[0]
    for g in cone.generators():
        for v in V:
            assert A.contains_point(v + 3.0 * g, tol=1e-9)


def test_direction_grid():
    g = DirectionGrid.uniform(3600, Cone2.upper_quadrant())
    U = g.directions
    assert np.all(U >= -1e-15)
    assert any(np.allclose(u, (1, 0)) for u in U) and any(np.allclose(u, (0, 1)) for u in U)
    assert len(DirectionGrid.uniform(3, Cone2.full())) == 3
    with pytest.raises(DomainError):
        DirectionGrid.uniform(0)
