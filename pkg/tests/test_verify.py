import json
import math

import pytest

from oracles import VisibilityOracle
from polypart.boundary import greedy_boundary
from polypart.generate import random_polygon, rect, scale_to_area
from polypart.interior import interior_partition
from polypart.model import Kind, Piece, SizeConstraint
from polypart.verify import (BoundCheck, check_partition, check_size, check_structure, lower_bound, measure,
                             piece_region, verify_pieces)

L_PIECE = [(0.0, 0.0), (0.6, 0.0), (0.6, 0.2), (0.2, 0.2), (0.2, 0.6), (0.0, 0.6)]


def test_polygon_as_single_piece():
    ring = random_polygon(30, 1)
    rep = check_partition(ring, [ring])
    assert rep.covered_area_residual == 0.0
    assert rep.max_pairwise_overlap == 0.0
    assert rep.coverage_ok


def test_duplicate_pieces_overlap():
    ring = random_polygon(12, 2)
    rep = check_partition(ring, [ring, ring])
    assert math.isclose(rep.max_pairwise_overlap, abs(rep.polygon_area), rel_tol=1e-9)
    assert not rep.coverage_ok


def test_gap_and_outside_detected():
    sq = rect(1, 1)
    half = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (0.0, 0.5)]
    assert not check_partition(sq, [half]).coverage_ok
    shifted = [(0.5, 0.0), (1.5, 0.0), (1.5, 1.0), (0.5, 1.0)]
    rep = check_partition(sq, [[(0.0, 0.0), (0.5, 0.0), (0.5, 1.0), (0.0, 1.0)], shifted])
    assert math.isclose(rep.outside_area, 0.5)


def test_weakly_simple_piece_region():
    # square with a spike: same region as the square
    ring = [(0.0, 0.0), (1.0, 0.0), (1.0, 0.5), (2.0, 0.5), (1.0, 0.5), (1.0, 1.0), (0.0, 1.0)]
    assert math.isclose(piece_region(ring).area, 1.0)
    # two squares joined at a vertex by a zero-width bridge
    ring = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (1.0, 2.0), (1.0, 1.0), (0.0, 1.0)]
    assert math.isclose(piece_region(ring).area, 2.0)
    with pytest.raises(ValueError):
        piece_region(rect(1, 1)[::-1])


def test_malformed_piece_reported():
    sq = rect(1, 1)
    rep = check_partition(sq, [sq[::-1]])
    assert rep.malformed and not rep.coverage_ok


def test_check_size_examples():
    cell = rect(math.sqrt(2), math.sqrt(2))
    r, ok = check_size(Kind.DISK, cell)
    assert math.isclose(r, 1.0, rel_tol=1e-15) and ok
    side, ok = check_size(Kind.ALIGNED_SQUARE, rect(1.01, 0.1))
    assert math.isclose(side, 1.01) and not ok
    assert check_size(Kind.ALIGNED_SQUARE, rect(1.0 + 5e-7, 0.1))[1]
    assert math.isclose(measure(Kind.PERIMETER, rect(0.25, 0.25)), 1.0)
    assert math.isclose(measure(Kind.STRAIGHT_DIAMETER, rect(3, 4)), 5.0)
    # a segment of length sqrt(2) is the diagonal of a unit square
    assert math.isclose(measure(Kind.ROTATED_SQUARE, [(0.0, 0.0), (1.0, 1.0)]), 1.0, rel_tol=1e-12)
    assert math.isclose(measure(Kind.ROTATED_SQUARE, rect(1, 1)), 1.0, rel_tol=1e-12)


def test_geodesic_measure_matches_oracle():
    assert abs(measure(Kind.GEODESIC_DIAMETER, L_PIECE) - VisibilityOracle(L_PIECE).diameter()) <= 1e-9


def test_lower_bounds():
    sq10 = rect(10, 10)
    assert lower_bound(Kind.DISK, sq10) == 32
    assert lower_bound(Kind.ALIGNED_SQUARE, sq10) == 100
    assert lower_bound(Kind.ROTATED_SQUARE, sq10) == 100
    assert lower_bound(Kind.STRAIGHT_DIAMETER, sq10) == math.ceil(400 / math.pi)
    assert lower_bound(Kind.PERIMETER, rect(1, 1)) == 13
    assert lower_bound("geodesic-diameter", rect(1, 1)) == 2


def test_structure_checks_with_upper_bound():
    ring = rect(4, 3)
    bp = greedy_boundary(SizeConstraint(Kind.ALIGNED_SQUARE), ring)
    ip = interior_partition(bp)
    checks = {c.name: c for c in check_structure(bp, ip, Kind.ALIGNED_SQUARE, upper_bound=12)}
    assert checks["total <= 13 U"].passed
    assert checks["boundary <= 2U - 1"].passed
    # a single boundary piece skips the IBI count check
    bp1 = greedy_boundary(SizeConstraint(Kind.ALIGNED_SQUARE), rect(1, 1))
    names = [c.name for c in check_structure(bp1, interior_partition(bp1), Kind.ALIGNED_SQUARE)]
    assert "ibis <= 3|Q_b| - 6" not in names


def test_report_serializes():
    ring = scale_to_area(random_polygon(15, 4), 10.0)
    bp = greedy_boundary(SizeConstraint(Kind.DISK), ring)
    pieces = bp.as_pieces() + interior_partition(bp).all_pieces()
    rep = verify_pieces(ring, pieces, Kind.DISK)
    rep.bound_checks.append(BoundCheck("dummy", 1.0, 2.0, True))
    d = json.loads(json.dumps(rep.to_dict()))
    assert d["passed"] is True
    assert set(d) >= {"covered_area_residual", "max_pairwise_overlap", "counts", "lower_bound", "bound_checks"}
    assert sum(d["counts"].values()) == len(pieces)


def test_oversized_piece_fails_report():
    ring = rect(2, 1)
    rep = verify_pieces(ring, [Piece(ring, "boundary")], Kind.ALIGNED_SQUARE)
    assert rep.coverage_ok and not rep.sizes_ok and not rep.passed


def test_kind_names_accepted():
    ring = rect(2, 1)
    assert measure("aligned-square", ring) == measure(Kind.ALIGNED_SQUARE, ring)
    assert not verify_pieces(ring, [Piece(ring, "boundary")], "aligned-square").sizes_ok
    rep = verify_pieces(ring, [Piece(ring, "area")], "area")
    assert rep.passed and not rep.sizes
