"""Ear-clipping triangulation of simple polygons."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .polygon import InvalidPolygon, first_self_intersection, polygon_area
from .predicates import Point, orient

Tri = tuple[int, int, int]


@dataclass
class Triangulation:
    """Triangles as CCW vertex-index triples into ``points``.

    ``neighbors[t][k]`` is the triangle across the edge opposite corner k
    (edge ``(tri[(k+1)%3], tri[(k+2)%3])``), or -1 on the polygon boundary.
    """

    points: list[Point]
    triangles: list[Tri]
    neighbors: list[list[int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.neighbors:
            self.neighbors = dual_adjacency(self.triangles)

    def dual_edges(self) -> list[tuple[int, int]]:
        return sorted({(min(t, u), max(t, u)) for t, nb in enumerate(self.neighbors)
                       for u in nb if u >= 0})

    def corners(self, t: int) -> tuple[Point, Point, Point]:
        a, b, c = self.triangles[t]
        return self.points[a], self.points[b], self.points[c]


def dual_adjacency(triangles: Sequence[Tri]) -> list[list[int]]:
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    nbrs = [[-1, -1, -1] for _ in triangles]
    for t, tri in enumerate(triangles):
        for k in range(3):
            u, v = tri[(k + 1) % 3], tri[(k + 2) % 3]
            other = owner.pop((v, u), None)
            if other is not None:
                s, kk = other
                nbrs[t][k] = s
                nbrs[s][kk] = t
            else:
                owner[(u, v)] = (t, k)
    return nbrs


def _in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool:
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


def ear_clip(ring: Sequence[Point]) -> list[Tri]:
    """Triangulate a CCW simple ring; returns index triples (no Steiner points).

    Vertices with a straight angle are kept and receive diagonals like any
    other vertex, so the output always has ``len(ring) - 2`` triangles.
    """
    n = len(ring)
    if n < 3:
        raise InvalidPolygon("need at least 3 vertices")
    if n == 3:
        return [(0, 1, 2)]
    pts = list(ring)
    prev = [(i - 1) % n for i in range(n)]
    nxt = [(i + 1) % n for i in range(n)]

    def convex(i: int) -> bool:
        return orient(pts[prev[i]], pts[i], pts[nxt[i]]) > 0

    blocking = {i for i in range(n) if not convex(i)}

    def is_ear(i: int) -> bool:
        ia, ic = prev[i], nxt[i]
        a, b, c = pts[ia], pts[i], pts[ic]
        if orient(a, b, c) <= 0:
            return False
        lo_x = min(a[0], b[0], c[0])
        hi_x = max(a[0], b[0], c[0])
        lo_y = min(a[1], b[1], c[1])
        hi_y = max(a[1], b[1], c[1])
        for j in blocking:
            if j == ia or j == ic or j == i:
                continue
            px, py = pts[j]
            if px < lo_x or px > hi_x or py < lo_y or py > hi_y:
                continue
            if _in_closed_triangle(pts[j], a, b, c):
                return False
        return True

    tris: list[Tri] = []
    remaining = n
    i = 0
    stall = 0
    while remaining > 3:
        if is_ear(i):
            ia, ic = prev[i], nxt[i]
            tris.append((ia, i, ic))
            nxt[ia] = ic
            prev[ic] = ia
            blocking.discard(i)
            remaining -= 1
            for j in (ia, ic):
                if j in blocking and convex(j):
                    blocking.discard(j)
            i = ia
            stall = 0
        else:
            i = nxt[i]
            stall += 1
            if stall > remaining:
                raise InvalidPolygon("ear clipping stalled; polygon is not simple")
    tris.append((prev[i], i, nxt[i]))
    return tris


def triangulate(ring: Sequence[Point], *, check: bool = True) -> Triangulation:
    """Triangulate a simple CCW polygon and build its dual tree.

    With ``check`` the ring is first tested for self-intersections and the
    first one is reported through :class:`InvalidPolygon`.
    """
    pts = [(float(x), float(y)) for x, y in ring]
    if check:
        hit = first_self_intersection(pts)
        if hit is not None:
            i, j, p = hit
            raise InvalidPolygon(f"edges {i} and {j} intersect at ({p[0]!r}, {p[1]!r})", p)
        if polygon_area(pts) <= 0:
            raise InvalidPolygon("polygon must be counterclockwise")
    return Triangulation(pts, ear_clip(pts))
