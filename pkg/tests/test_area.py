import math

import numpy as np
import pytest
import shapely

from oracles import shoelace
from polypart.area import BOUNDARY_EDGE, WALL_EDGE, area_partition, cut_triangle, reconcile_areas, steiner_triangulate
from polypart.generate import comb, random_polygon, rect, spiral
from polypart.kernel.polygon import InvalidPolygon, polygon_area
from polypart.verify import check_partition, piece_region


@pytest.mark.parametrize("ring", [rect(1, 1), spiral(30), comb(18), random_polygon(25, 3)])
def test_steiner_counts_and_cycle(ring):
    n = len(ring)
    st = steiner_triangulate(ring)
    assert len(st.triangles) == 6 * n - 12
    assert st.steiner_count == 3 * n - 5
    T = len(st.triangles)
    for i, t in enumerate(st.triangles):
        nxt = st.triangles[(i + 1) % T]
        # the walk leaves through apex-end and enters the next triangle through its apex-start
        assert {t.apex, t.end} == {nxt.apex, nxt.start}
        assert t.kind in (BOUNDARY_EDGE, WALL_EDGE)
    assert math.isclose(math.fsum(abs(st.area(t)) for t in st.triangles), polygon_area(ring), rel_tol=1e-12)
    # every polygon edge is the free edge of exactly two triangles (one per half)
    on_boundary = sum(t.kind == BOUNDARY_EDGE for t in st.triangles)
    assert on_boundary == 2 * n


def test_cut_triangle_area():
    c = cut_triangle((0.0, 0.0), (2.0, 0.0), (0.0, 2.0), 0.5)
    assert math.isclose(abs(shoelace(c.near)), 0.5)
    assert math.isclose(abs(shoelace(c.far)), 1.5)
    with pytest.raises(ValueError):
        cut_triangle((0.0, 0.0), (2.0, 0.0), (0.0, 2.0), 2.5)


def test_unit_square_halves():
    part = area_partition(rect(1, 1), [0.5, 0.5])
    assert len(part) == 2
    assert [p.area for p in part.pieces] == [0.5, 0.5]


def test_single_piece_is_polygon():
    ring = spiral(24)
    part = area_partition(ring, [polygon_area(ring)])
    assert len(part) == 1
    assert math.isclose(part.pieces[0].area, polygon_area(ring), rel_tol=1e-12)
    assert check_partition(ring, [p.vertices for p in part.pieces]).coverage_ok


def test_pieces_exact_and_connected():
    rng = np.random.default_rng(8)
    for s in range(15):
        ring = random_polygon(int(rng.integers(5, 60)), s)
        A = polygon_area(ring)
        w = rng.random(int(rng.integers(1, 20))) + 0.05
        areas = list(w / w.sum() * A)
        part = area_partition(ring, areas)
        assert len(part) == len(areas)
        for p, a in zip(part.pieces, reconcile_areas(areas, A)):
            assert abs(p.area - a) <= 1e-9 * a
            assert isinstance(piece_region(p.vertices), shapely.Polygon)  # one component
        rep = check_partition(ring, [p.vertices for p in part.pieces])
        assert rep.coverage_ok, rep.to_dict()


def test_target_hit_on_triangle_boundary():
    # the first triangle of a square's cycle has area 1/24; asking for exactly that
    # makes the cut land on the shared edge
    st = steiner_triangulate(rect(1, 1))
    first = abs(st.area(st.triangles[0]))
    part = area_partition(rect(1, 1), [first, 1.0 - first])
    assert math.isclose(part.pieces[0].area, first, rel_tol=1e-12)
    assert check_partition(rect(1, 1), [p.vertices for p in part.pieces]).coverage_ok


def test_area_errors():
    with pytest.raises(ValueError):
        area_partition(rect(1, 1), [0.5, 0.4])
    with pytest.raises(ValueError):
        area_partition(rect(1, 1), [1.5, -0.5])
    with pytest.raises(ValueError):
        area_partition(rect(1, 1), [])
    with pytest.raises(InvalidPolygon):
        area_partition([(0, 0), (1, 1), (1, 0), (0, 1)], [1.0])
