import math

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from oracles import VisibilityOracle, diameter_all_pairs, enclosing_disk_enumeration, orient_exact, shoelace, square_side_sampled
from polypart.generate import comb, random_polygon, rect, spiral, star
from polypart.kernel.arrangement import face_areas_inside, overlay
from polypart.kernel.cycles import union_ring
from polypart.kernel.enclosing import circular_hull, min_enclosing_disk
from polypart.kernel.hull import convex_hull, min_square_over_rotations, straight_diameter
from polypart.kernel.paths import geodesic_diameter, shortest_path
from polypart.kernel.polygon import (InvalidPolygon, Location, is_convex, perimeter, point_in_polygon,
                                     polygon_area, reflex_vertices, snap_ring, validate_polygon)
from polypart.kernel.predicates import orient, orient_many
from polypart.kernel.triangulate import triangulate

coord = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)

L_SHAPE = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]


# -- predicates -------------------------------------------------------------------

@given(point, point, point)
@example((0.0, 0.0), (0.0, 1.1216476221466769e-107), (9.343098870671517e-248, 0.0))  # products underflow
def test_orient_matches_rational_arithmetic(a, b, c):
    assert orient(a, b, c) == orient_exact(a, b, c)


@given(point, point, point)
def test_orient_antisymmetric(a, b, c):
    assert orient(a, b, c) == -orient(b, a, c) == orient(b, c, a)


def test_orient_near_degenerate():
    # classic failure of naive float evaluation: points nearly on a line
    a = (0.5, 0.5)
    b = (12.0, 12.0)
    for k in range(200):
        c = (24.0 + k * 2.0**-48, 24.0)
        assert orient(a, b, c) == orient_exact(a, b, c)


def test_orient_many_matches_scalar():
    rng = np.random.default_rng(1)
    P = rng.normal(size=(500, 6))
    P[::3, 4:] = P[::3, :2] + 0.5 * (P[::3, 2:4] - P[::3, :2])  # exact midpoints, mostly collinear
    got = orient_many(P[:, 0], P[:, 1], P[:, 2], P[:, 3], P[:, 4], P[:, 5])
    want = [orient_exact(r[0:2], r[2:4], r[4:6]) for r in P]
    assert list(got) == want


# -- polygons ---------------------------------------------------------------------

def test_area_and_perimeter():
    assert polygon_area(rect(3, 2)) == 6.0
    assert perimeter(rect(3, 2)) == 10.0
    assert polygon_area(rect(3, 2)[::-1]) == -6.0


def test_validate_rejects_bowtie_with_location():
    with pytest.raises(InvalidPolygon) as err:
        validate_polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert err.value.location == (0.5, 0.5)


def test_validate_orientation_and_duplicates():
    cw = [(0, 0), (0, 1), (1, 1), (1, 0)]
    with pytest.raises(InvalidPolygon):
        validate_polygon(cw)
    assert polygon_area(validate_polygon(cw, reorient=True)) == 1.0
    assert len(validate_polygon([(0, 0), (1, 0), (1, 0), (1, 1), (0, 1), (0, 0)])) == 4
    with pytest.raises(InvalidPolygon):
        validate_polygon([(0, 0), (1, 0), (2, 0)])
    with pytest.raises(InvalidPolygon):
        validate_polygon([(0, 0), (1, 0), (math.nan, 1)])


def test_validate_rejects_touching_vertex():
    # vertex (1, 0) of the notch touches the bottom edge
    ring = [(0, 0), (2, 0), (2, 2), (1, 0.0), (0, 2)]
    with pytest.raises(InvalidPolygon):
        validate_polygon(ring)


def test_point_in_polygon():
    assert point_in_polygon(L_SHAPE, (0.5, 0.5)) is Location.INSIDE
    assert point_in_polygon(L_SHAPE, (1.5, 1.5)) is Location.OUTSIDE
    assert point_in_polygon(L_SHAPE, (1.0, 1.5)) is Location.BOUNDARY
    assert point_in_polygon(L_SHAPE, (2.0, 0.0)) is Location.BOUNDARY


def test_snap_ring():
    r = snap_ring([(0.1, 0.2)])
    assert r[0][0] * 2**30 == round(r[0][0] * 2**30)
    assert abs(r[0][0] - 0.1) <= 2**-31


def test_generators():
    assert len(rect(3, 1)) == 4
    validate_polygon(random_polygon(100, 7))
    assert len(reflex_vertices(spiral(40))) >= 15
    validate_polygon(comb(20))
    validate_polygon(star(12, seed=3))
    assert random_polygon(30, 5) == random_polygon(30, 5)


# -- triangulation ----------------------------------------------------------------

@pytest.mark.parametrize("ring", [L_SHAPE, spiral(40), comb(30), star(16, seed=1), random_polygon(80, 2)])
def test_triangulation_tiles_polygon(ring):
    tri = triangulate(ring)
    assert len(tri.triangles) == len(ring) - 2
    areas = [shoelace(tri.corners(t)) for t in range(len(tri.triangles))]
    assert min(areas) > 0
    assert math.isclose(math.fsum(areas), polygon_area(ring), rel_tol=1e-12)
    # dual graph of a polygon triangulation is a tree
    assert len(tri.dual_edges()) == len(tri.triangles) - 1


# -- hulls and enclosing shapes ---------------------------------------------------

@settings(max_examples=60)
@given(st.lists(point, min_size=1, max_size=40))
def test_convex_hull_contains_points(pts):
    hull = convex_hull(pts)
    if len(hull) >= 3:
        assert is_convex(hull)
        for p in pts:
            assert point_in_polygon(hull, p) is not Location.OUTSIDE


@settings(max_examples=60)
@given(st.lists(point, min_size=2, max_size=40))
@example([(0.0, 0.0), (0.0, -3.0), (3.0, -1.0), (7.685699288998482e-237, 0.0)])  # near-zero hull edge
def test_straight_diameter_all_pairs(pts):
    assert straight_diameter(pts) == diameter_all_pairs(pts)


def test_min_enclosing_disk_against_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(50):
        pts = [tuple(p) for p in rng.normal(size=(int(rng.integers(2, 12)), 2))]
        c, r = enclosing_disk_enumeration(pts)
        d = min_enclosing_disk(pts)
        assert abs(d.radius - r) <= 1e-12 * max(1.0, r)
        assert all(d.contains(p, 1e-12) for p in pts)


def test_min_square_over_rotations_against_sampling():
    rng = np.random.default_rng(4)
    for _ in range(30):
        pts = [tuple(p) for p in rng.normal(size=(8, 2))]
        phi, side, sq = min_square_over_rotations(pts)
        assert side <= square_side_sampled(pts) + 1e-12
        assert side >= square_side_sampled(pts) - 1e-6
        assert all(sq.contains(p, 1e-9) for p in pts)
    # a unit square rotated by half a radian still needs side 1
    c, s = math.cos(0.5), math.sin(0.5)
    pts = [(x * c - y * s, x * s + y * c) for x, y in rect(1, 1)]
    assert math.isclose(min_square_over_rotations(pts)[1], 1.0, rel_tol=1e-12)


def test_circular_hull():
    pts = [(0.0, 0.0), (1.0, 0.0), (0.5, 0.6)]
    ch = circular_hull(pts, 1.0)
    assert ch.feasible
    assert all(ch.contains(p) for p in pts)
    assert not circular_hull(pts, 0.4).feasible


# -- shortest paths ---------------------------------------------------------------

def _interior_points(ring, k, seed):
    import shapely

    poly = shapely.Polygon(ring)
    rng = np.random.default_rng(seed)
    x0, y0, x1, y1 = poly.bounds
    out = []
    while len(out) < k:
        p = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
        if poly.contains(shapely.Point(p)):
            out.append(p)
    return out


@pytest.mark.parametrize("ring", [L_SHAPE, spiral(30), comb(22), random_polygon(40, 11)])
def test_shortest_path_matches_visibility_graph(ring):
    oracle = VisibilityOracle(ring)
    pts = _interior_points(ring, 6, 5) + ring[:3]
    for s in pts[:4]:
        for t in pts[4:]:
            sp = shortest_path(ring, s, t)
            assert abs(sp.length - oracle.distance(s, t)) <= 1e-9 * max(1.0, sp.length)
            assert sp.waypoints[0] == s and sp.waypoints[-1] == t
            got = math.fsum(math.dist(a, b) for a, b in zip(sp.waypoints, sp.waypoints[1:]))
            assert abs(got - sp.length) <= 1e-12 * max(1.0, got)
            reflex = {ring[i] for i in reflex_vertices(ring)}
            assert all(w in reflex for w in sp.waypoints[1:-1])


def test_geodesic_diameter_l_shape():
    want = VisibilityOracle(L_SHAPE).diameter()
    assert abs(geodesic_diameter(L_SHAPE) - want) <= 1e-12
    assert abs(geodesic_diameter(L_SHAPE, method="funnel") - want) <= 1e-12
    assert math.isclose(geodesic_diameter(rect(3, 4)), 5.0)


def test_geodesic_diameter_weakly_simple_spike():
    # unit square with a zero-width spike of length 2 on its right side
    ring = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (3.0, 0.5), (1.0, 0.5), (1.0, 1.0), (0.0, 1.0)]
    assert math.isclose(geodesic_diameter(ring), math.sqrt(1.25) + 2.0, rel_tol=1e-12)


# -- arrangement and cycles -------------------------------------------------------

def test_overlay_euler_and_areas():
    a = rect(2, 2)
    b = [(1.0, 1.0), (3.0, 1.0), (3.0, 3.0), (1.0, 3.0)]
    sub = overlay([a, b], grid=([0.5, 1.5], [0.25]))
    assert sub.euler_ok()
    assert math.isclose(face_areas_inside(sub, 0), 4.0)
    assert math.isclose(face_areas_inside(sub, 1), 4.0)
    both = math.fsum(sub.faces[f].area for f in sub.bounded_faces() if sub.faces[f].mask == 3)
    assert math.isclose(both, 1.0)


def test_union_ring_of_two_squares():
    pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (2.0, 0.0), (2.0, 1.0)]
    ring = union_ring(pts, [[0, 1, 2, 3], [1, 4, 5, 2]])
    out = [pts[i] for i in ring]
    assert math.isclose(polygon_area(out), 2.0)
    assert len(out) == 6
