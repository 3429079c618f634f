"""Polygon measures, validation and point classification.

A ring is a list of ``(x, y)`` tuples, closed implicitly. Simple input
polygons are counterclockwise; pieces may be weakly simple, meaning vertices
may repeat and edges may overlap (zero-width spikes are allowed).
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Sequence

import numpy as np

from .predicates import Point, on_segment, orient, orient_many

Ring = list[Point]

SNAP = 2.0**-30


class InvalidPolygon(ValueError):
    """Input geometry violates a polygon invariant.

    ``location`` carries the offending coordinates when there is one
    (e.g. the first self-intersection found).
    """

    def __init__(self, message: str, location: Point | None = None):
        super().__init__(message)
        self.location = location


class Location(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def polygon_area(ring: Sequence[Point]) -> float:
    """Signed shoelace area; positive for counterclockwise rings."""
    n = len(ring)
    if n < 3:
        return 0.0
    x0, y0 = ring[0]
    terms = []
    for i in range(1, n - 1):
        (x1, y1), (x2, y2) = ring[i], ring[i + 1]
        terms.append((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
    return math.fsum(terms) / 2.0


def perimeter(ring: Sequence[Point]) -> float:
    """Length of the closed boundary walk; spikes count twice."""
    n = len(ring)
    if n < 2:
        return 0.0
    return math.fsum(math.dist(ring[i], ring[(i + 1) % n]) for i in range(n))


def chain_length(chain: Sequence[Point]) -> float:
    return math.fsum(math.dist(chain[i], chain[i + 1]) for i in range(len(chain) - 1))


def bbox(points: Sequence[Point]) -> tuple[float, float, float, float]:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return min(xs), min(ys), max(xs), max(ys)


def snap_point(p: Point, grid: float = SNAP) -> Point:
    return (round(p[0] / grid) * grid, round(p[1] / grid) * grid)


def snap_ring(ring: Sequence[Point], grid: float = SNAP) -> Ring:
    return [snap_point(p, grid) for p in ring]


def remove_duplicates(ring: Sequence[Point]) -> Ring:
    """Drop consecutive repeated vertices (including last == first)."""
    out: Ring = []
    for p in ring:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def is_convex(ring: Sequence[Point]) -> bool:
    """Counterclockwise ring without right turns (collinear vertices allowed)."""
    n = len(ring)
    if n < 3:
        return True
    for i in range(n):
        if orient(ring[i - 1], ring[i], ring[(i + 1) % n]) < 0:
            return False
    return polygon_area(ring) > 0


def point_in_polygon(ring: Sequence[Point], p: Point) -> Location:
    """Crossing-number classification with exact boundary detection."""
    n = len(ring)
    px, py = p
    inside = False
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        if (min(a[0], b[0]) <= px <= max(a[0], b[0])
                and min(a[1], b[1]) <= py <= max(a[1], b[1])
                and on_segment(p, a, b)):
            return Location.BOUNDARY
        if (a[1] > py) != (b[1] > py):
            # edge straddles the horizontal line through p
            o = orient(a, b, p)
            if (o > 0) == (b[1] > a[1]):
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def first_self_intersection(ring: Sequence[Point]) -> tuple[int, int, Point] | None:
    """Return ``(i, j, point)`` for the first pair of conflicting edges, else None.

    Edges i and j conflict when non-adjacent edges share a point or adjacent
    edges overlap beyond their common vertex.
    """
    n = len(ring)
    pts = np.asarray(ring, dtype=float)
    ax, ay = pts[:, 0], pts[:, 1]
    bx, by = np.roll(ax, -1), np.roll(ay, -1)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        c = ring[(i + 2) % n]
        # adjacent edge folding back onto this one
        if orient(a, b, c) == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
            return i, (i + 1) % n, b
        js = np.arange(i + 2, n)
        if i == 0:
            js = js[js != n - 1]
        if js.size == 0:
            continue
        # bbox prefilter
        lo_x, hi_x = min(a[0], b[0]), max(a[0], b[0])
        lo_y, hi_y = min(a[1], b[1]), max(a[1], b[1])
        cand = js[(np.minimum(ax[js], bx[js]) <= hi_x) & (np.maximum(ax[js], bx[js]) >= lo_x)
                  & (np.minimum(ay[js], by[js]) <= hi_y) & (np.maximum(ay[js], by[js]) >= lo_y)]
        if cand.size == 0:
            continue
        o1 = orient_many(a[0], a[1], b[0], b[1], ax[cand], ay[cand])
        o2 = orient_many(a[0], a[1], b[0], b[1], bx[cand], by[cand])
        o3 = orient_many(ax[cand], ay[cand], bx[cand], by[cand], a[0], a[1])
        o4 = orient_many(ax[cand], ay[cand], bx[cand], by[cand], b[0], b[1])
        proper = (o1 * o2 < 0) & (o3 * o4 < 0)
        touch = (o1 == 0) | (o2 == 0) | (o3 == 0) | (o4 == 0)
        for k in np.nonzero(proper | touch)[0]:
            j = int(cand[k])
            c, d = ring[j], ring[(j + 1) % n]
            if proper[k]:
                return i, j, _line_intersection(a, b, c, d)
            for q in (c, d):
                if on_segment(q, a, b):
                    return i, j, q
            for q in (a, b):
                if on_segment(q, c, d):
                    return i, j, q
    return None


def _line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point:
    r = (b[0] - a[0], b[1] - a[1])
    s = (d[0] - c[0], d[1] - c[1])
    den = r[0] * s[1] - r[1] * s[0]
    t = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / den
    return (a[0] + t * r[0], a[1] + t * r[1])


def is_simple(ring: Sequence[Point]) -> bool:
    return len(ring) >= 3 and first_self_intersection(ring) is None


def validate_polygon(ring: Sequence[Point], *, reorient: bool = False) -> Ring:
    """Check the simple-polygon invariants and return a clean CCW ring.

    Raises :class:`InvalidPolygon`. With ``reorient`` a clockwise ring is
    reversed instead of rejected.
    """
    pts = [(float(x), float(y)) for x, y in ring]
    for p in pts:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise InvalidPolygon("non-finite coordinate", p)
    pts = remove_duplicates(pts)
    if len(pts) < 3:
        raise InvalidPolygon("polygon needs at least 3 distinct vertices")
    hit = first_self_intersection(pts)
    if hit is not None:
        i, j, p = hit
        raise InvalidPolygon(f"edges {i} and {j} intersect at ({p[0]!r}, {p[1]!r})", p)
    area = polygon_area(pts)
    if area == 0:
        raise InvalidPolygon("polygon has zero area")
    if area < 0:
        if not reorient:
            raise InvalidPolygon("polygon is clockwise")
        pts.reverse()
    return pts


def lexmin_index(ring: Sequence[Point]) -> int:
    return min(range(len(ring)), key=lambda i: (ring[i][0], ring[i][1]))


def reflex_vertices(ring: Sequence[Point]) -> list[int]:
    n = len(ring)
    return [i for i in range(n) if orient(ring[i - 1], ring[i], ring[(i + 1) % n]) < 0]
