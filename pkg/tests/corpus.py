"""Deterministic polygon corpus shared by the acceptance and unit tests."""

from __future__ import annotations

import numpy as np

from polypart.boundary import BoundaryWalker
from polypart.generate import comb, random_polygon, scale_to_area, spiral, star
from polypart.model import Kind

# area range per kind; geodesic and perimeter cells are tiny, so their polygons
# stay small to keep piece counts (and runtime) desk-scale
AREA_RANGE = {
    Kind.ALIGNED_SQUARE: (1.0, 200.0),
    Kind.ROTATED_SQUARE: (1.0, 200.0),
    Kind.DISK: (1.0, 200.0),
    Kind.STRAIGHT_DIAMETER: (1.0, 200.0),
    Kind.GEODESIC_DIAMETER: (0.5, 5.0),
    Kind.PERIMETER: (0.02, 0.3),
}


def shapes(count: int, seed: int = 2024, n_range: tuple[int, int] = (8, 40)) -> list[list[tuple[float, float]]]:
    """Mostly random polygons, with spirals, combs and stars mixed in."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        r = i % 10
        if r == 7:
            ring = spiral(max(n, 12))
        elif r == 8:
            ring = comb(max(3, n // 4))
        elif r == 9:
            ring = star(max(5, n // 2), seed=int(rng.integers(1 << 30)))
        else:
            ring = random_polygon(n, int(rng.integers(1 << 30)))
        out.append(ring)
    return out


def corpus(kind: Kind, count: int = 100, seed: int = 2024) -> list[list[tuple[float, float]]]:
    rng = np.random.default_rng(seed + 1)
    lo, hi = AREA_RANGE[kind]
    return [scale_to_area(ring, float(np.exp(rng.uniform(np.log(lo), np.log(hi)))))
            for ring in shapes(count, seed)]


def maximality_violations(bp) -> list:
    """Non-final intervals that are infeasible or stay feasible 10 eps further on."""
    w = BoundaryWalker(bp.polygon, bp.constraint)
    bad = []
    for iv in bp.intervals[:-1]:
        a, b = iv.start_arc, iv.end_arc
        if not w.feasible_arc(a, b) or w.feasible_arc(a, b + 10 * w.eps):
            bad.append((a, b))
    return bad
