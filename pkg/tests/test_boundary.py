import math

import numpy as np
import pytest
import shapely

from corpus import maximality_violations
from oracles import VisibilityOracle
from polypart.boundary import (BLOWUP, SHORTEST_PATH, TRIVIAL, BoundaryPosition, BoundaryWalker,
                               estimate_boundary_count, feasible, greedy_boundary, max_interval, measure_chain,
                               phase2_aligned, phase2_straight, trivial_length)
from polypart.generate import random_polygon, rect, scale_to_area, spiral, star
from polypart.kernel.hull import straight_diameter
from polypart.kernel.polygon import polygon_area, reflex_vertices
from polypart.model import Kind, SizeConstraint
from polypart.verify import check_partition, check_size, piece_region

ALL = list(Kind)


@pytest.mark.parametrize("kind", ALL)
def test_trivial_length_is_tight(kind):
    ring = rect(10, 10)
    w = BoundaryWalker(ring, SizeConstraint(kind))
    L = trivial_length(kind, 1.0)
    assert w.feasible_arc(0.0, L)
    assert not w.feasible_arc(0.0, L * (1 + 1e-8))


def test_trivial_length_values():
    assert trivial_length(Kind.ALIGNED_SQUARE, 1.0, (1.0, 1.0)) == pytest.approx(math.sqrt(2))
    assert trivial_length(Kind.ALIGNED_SQUARE, 1.0) == 1.0
    assert trivial_length(Kind.ROTATED_SQUARE, 1.0) == pytest.approx(math.sqrt(2))
    assert trivial_length(Kind.DISK, 1.0) == 2.0
    assert trivial_length(Kind.STRAIGHT_DIAMETER, 1.0) == 1.0
    assert trivial_length(Kind.GEODESIC_DIAMETER, 1.0) == 1.0
    assert trivial_length(Kind.PERIMETER, 1.0) == 0.5


@pytest.mark.parametrize("kind", ALL)
def test_intervals_tile_and_are_maximal(kind):
    area = {Kind.PERIMETER: 0.2, Kind.GEODESIC_DIAMETER: 3.0}.get(kind, 20.0)
    for ring in (scale_to_area(random_polygon(25, 4), area), scale_to_area(spiral(30), area)):
        bp = greedy_boundary(SizeConstraint(kind), ring)
        ivs = bp.intervals
        assert ivs[0].start_arc == 0.0
        for u, v in zip(ivs, ivs[1:]):
            assert u.end_arc == v.start_arc
        w = BoundaryWalker(ring, SizeConstraint(kind))
        assert math.isclose(ivs[-1].end_arc, w.perimeter, rel_tol=1e-12)
        assert math.isclose(math.fsum(i.length for i in ivs), w.perimeter, rel_tol=1e-9)
        assert maximality_violations(bp) == []
        assert estimate_boundary_count(SizeConstraint(kind), ring) == len(bp.pieces)
        for p in bp.pieces:
            assert check_size(kind, p.geometry)[1]
        rep = check_partition(ring, [p.geometry for p in bp.pieces], tol_area=math.inf)
        assert rep.max_pairwise_overlap <= 1e-9 * polygon_area(ring)
        assert rep.outside_area <= 1e-9 * polygon_area(ring)
        assert not rep.malformed


def test_unit_square_aligned_single_piece():
    bp = greedy_boundary(SizeConstraint(Kind.ALIGNED_SQUARE), rect(1, 1))
    assert len(bp.pieces) == 1
    assert math.isclose(polygon_area(bp.pieces[0].geometry), 1.0)
    iv = max_interval(SizeConstraint(Kind.ALIGNED_SQUARE), rect(1, 1), BoundaryPosition(0, 0.0))
    assert math.isclose(iv.length, 4.0)


def test_small_circle_disk_single_piece():
    ring = [(0.45 * math.cos(2 * math.pi * k / 64), 0.45 * math.sin(2 * math.pi * k / 64)) for k in range(64)]
    assert len(greedy_boundary(SizeConstraint(Kind.DISK), ring).pieces) == 1


def test_thin_rectangle_straight_diameter_count():
    bp = greedy_boundary(SizeConstraint(Kind.STRAIGHT_DIAMETER), rect(5, 1))
    # a 6 x 2 grid of (5/6) x (1/2) cells has diameter < 1, so OPT <= 12
    U = 12
    assert math.hypot(5 / 6, 1 / 2) < 1
    assert 12 <= len(bp.pieces) <= 2 * U - 1


def test_perimeter_first_interval_on_rectangle():
    iv = max_interval(SizeConstraint(Kind.PERIMETER), rect(3, 1), BoundaryPosition(0, 0.0))
    assert iv.start_arc == 0.0
    assert abs(iv.end_arc - 0.5) <= 1e-9 * 8


def test_feasible_examples():
    big = rect(5, 5)
    assert feasible(SizeConstraint(Kind.ALIGNED_SQUARE), [(0.0, 0.9), (0.0, 0.0), (0.9, 0.0)], big)
    ring = rect(3, 1)
    assert not feasible(SizeConstraint(Kind.DISK), [(0.0, 0.0), (2.001, 0.0)], ring)
    assert feasible(SizeConstraint(Kind.DISK), [(0.0, 0.0), (1.999, 0.0)], ring)
    with pytest.raises(ValueError):
        feasible(SizeConstraint(Kind.DISK), [(0.5, 0.5), (1.0, 0.0)], ring)


def test_geodesic_on_convex_matches_straight_diameter():
    ring = [(0.4 * math.cos(math.pi * k / 3), 0.4 * math.sin(math.pi * k / 3)) for k in range(6)]
    c = SizeConstraint(Kind.GEODESIC_DIAMETER)
    for k in range(2, 7):
        chain = [ring[i % 6] for i in range(k)]
        assert feasible(c, chain, ring) == (straight_diameter(chain) <= 1.0)


def _phase2_cases(kind):
    ring = scale_to_area(random_polygon(40, 9), 30.0)
    bp = greedy_boundary(SizeConstraint(kind), ring)
    w = BoundaryWalker(ring, SizeConstraint(kind))
    for iv in bp.intervals[:-1]:
        if iv.trivial or len(iv.chain) < 3:
            continue
        i = w.edge_of(iv.end_arc)
        if iv.end_arc - w.cum[i] <= w.eps or w.cum[i + 1] - iv.end_arc <= w.eps:
            continue  # ends at a corner
        a, b = w.R[i], w.R[(i + 1) % w.n]
        yield iv, a, b, (iv.end_arc - w.cum[i]) / w.lengths[i], w


def test_phase2_aligned_four_candidate_cross_check():
    n = 0
    for iv, a, b, t, w in _phase2_cases(Kind.ALIGNED_SQUARE):
        assert abs(phase2_aligned(iv.chain[:-1], a, b, 1.0) - t) * math.dist(a, b) <= 2 * w.eps
        n += 1
    assert n > 3


def test_phase2_straight_farthest_source_cross_check():
    n = 0
    for iv, a, b, t, w in _phase2_cases(Kind.STRAIGHT_DIAMETER):
        assert abs(phase2_straight(iv.chain[:-1], a, b, 1.0) - t) * math.dist(a, b) <= 2 * w.eps
        n += 1
    assert n > 3


def test_perimeter_measure_monotone_along_edge():
    ring = scale_to_area(spiral(30), 0.3)
    w = BoundaryWalker(ring, SizeConstraint(Kind.PERIMETER))
    vals = [w.measure(w.chain(0.0, e)) for e in np.linspace(1e-3, w.perimeter * 0.3, 200)]
    assert all(y >= x - 1e-12 for x, y in zip(vals, vals[1:]))


@pytest.mark.parametrize("kind", [Kind.GEODESIC_DIAMETER, Kind.PERIMETER])
def test_geodesic_pieces_follow_shortest_paths(kind):
    ring = scale_to_area(spiral(30), 3.0 if kind is Kind.GEODESIC_DIAMETER else 0.2)
    bp = greedy_boundary(SizeConstraint(kind), ring)
    oracle = VisibilityOracle(ring)
    reflex = {ring[i] for i in reflex_vertices(ring)}
    for p in bp.pieces:
        assert p.construction in (SHORTEST_PATH, TRIVIAL)
        chain = p.interval.chain
        g = p.geometry
        assert g[:len(chain)] == chain
        back = [chain[-1]] + g[len(chain):] + [chain[0]]
        assert all(q in reflex for q in back[1:-1])
        length = math.fsum(math.dist(u, v) for u, v in zip(back, back[1:]))
        if len(bp.pieces) > 1:
            assert abs(length - oracle.distance(chain[0], chain[-1])) <= 1e-9 * max(1.0, length)


def test_full_boundary_geodesic_piece_is_polygon():
    ring = star(10, inner=0.5)
    ring = scale_to_area(ring, 0.01)
    bp = greedy_boundary(SizeConstraint(Kind.PERIMETER, bound=10.0), ring)
    assert len(bp.pieces) == 1
    assert math.isclose(polygon_area(bp.pieces[0].geometry), polygon_area(ring), rel_tol=1e-12)


def test_blowup_convex_first_piece_is_hull_cap():
    ring = [(3 * math.cos(2 * math.pi * k / 9), 3 * math.sin(2 * math.pi * k / 9)) for k in range(9)]
    bp = greedy_boundary(SizeConstraint(Kind.DISK), ring)
    first = bp.pieces[0]
    assert first.construction in (BLOWUP, TRIVIAL)
    cap = shapely.Polygon(ring).intersection(shapely.MultiPoint(first.interval.chain).convex_hull)
    assert math.isclose(piece_region(first.geometry).area, cap.area, rel_tol=1e-9, abs_tol=1e-12)


def test_blowup_on_spiral_keeps_one_component():
    ring = scale_to_area(spiral(40), 40.0)
    for kind in (Kind.ALIGNED_SQUARE, Kind.DISK, Kind.STRAIGHT_DIAMETER):
        bp = greedy_boundary(SizeConstraint(kind), ring)
        for p in bp.pieces:
            assert isinstance(piece_region(p.geometry), shapely.Polygon)


def test_bound_scales():
    ring = scale_to_area(random_polygon(20, 1), 10.0)
    small = greedy_boundary(SizeConstraint(Kind.DISK, 0.5), ring)
    for p in small.pieces:
        assert check_size(Kind.DISK, p.geometry, 0.5)[1]
    assert len(small.pieces) >= len(greedy_boundary(SizeConstraint(Kind.DISK), ring).pieces)


def test_measure_chain_requires_walker_for_geodesic():
    with pytest.raises(ValueError):
        measure_chain(Kind.PERIMETER, [(0.0, 0.0), (1.0, 0.0)])
