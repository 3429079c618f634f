"""Exact partition of a simple polygon into pieces of prescribed areas.

Every triangle of an ordinary triangulation is split by its three medians into
six equal-area triangles. Each of these touches exactly one polygon corner, so
listing, corner by corner, the fan of small triangles around that corner
gives a cyclic sequence in which consecutive triangles share an edge. Walking
the sequence and cutting greedily yields pieces that are contiguous runs of
(possibly cut) triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .kernel.cycles import splice, trace_directed
from .kernel.polygon import InvalidPolygon, lexmin_index, polygon_area, validate_polygon
from .kernel.predicates import Point, orient
from .model import AREA, Partition, Piece

BOUNDARY_EDGE = "boundary-edge"
WALL_EDGE = "wall-edge"


@dataclass(frozen=True)
class CycleTriangle:
    """Triangle ``(apex, start, end)`` of the Hamiltonian cycle.

    The walk enters through edge apex-start and leaves through apex-end;
    start -> end is the free edge, on which every cut ends.
    """

    apex: int
    start: int
    end: int
    kind: str  # BOUNDARY_EDGE if the free edge lies on the polygon boundary
    corner: int  # polygon vertex the triangle touches


@dataclass
class SteinerTriangulation:
    points: list[Point]
    n_corners: int  # points[:n_corners] are the polygon vertices
    triangles: list[CycleTriangle]
    wall_edges: list[tuple[int, int]]

    @property
    def steiner_count(self) -> int:
        return len(self.points) - self.n_corners

    def area(self, t: CycleTriangle) -> float:
        return _tri_area(self.points[t.apex], self.points[t.start], self.points[t.end])


def _tri_area(a: Point, b: Point, c: Point) -> float:
    return ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2.0


def steiner_triangulate(poly: Sequence[Point]) -> SteinerTriangulation:
    """Median refinement of an ear-clipping triangulation, ordered along the cycle."""
    from .kernel.triangulate import triangulate

    ring = validate_polygon(poly)
    n = len(ring)
    tri = triangulate(ring, check=False)
    points = list(ring)
    mid: dict[tuple[int, int], int] = {}

    def midpoint(u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        k = mid.get(key)
        if k is None:
            (ax, ay), (bx, by) = points[u], points[v]
            k = len(points)
            points.append(((ax + bx) / 2, (ay + by) / 2))
            mid[key] = k
        return k

    centroid = []
    for a, b, c in tri.triangles:
        (ax, ay), (bx, by), (cx, cy) = points[a], points[b], points[c]
        centroid.append(len(points))
        points.append(((ax + bx + cx) / 3, (ay + by + cy) / 3))
    for a, b, c in tri.triangles:
        midpoint(a, b)
        midpoint(b, c)
        midpoint(c, a)

    # base triangles at each corner, keyed by the corner's CCW successor in the
    # triangle: triangle (v, p, q) spans the angle from v->p to v->q
    by_q: dict[tuple[int, int], int] = {}
    for t, (a, b, c) in enumerate(tri.triangles):
        for v, p, q in ((a, b, c), (b, c, a), (c, a, b)):
            by_q[(v, q)] = t
    triangles: list[CycleTriangle] = []
    wall: set[tuple[int, int]] = set()
    for v in range(n):
        prev = (v - 1) % n
        nxt = (v + 1) % n
        # rays from v in clockwise order, from the edge to prev to the edge to next
        rays = [midpoint(v, prev)]
        q = prev
        while q != nxt:
            t = by_q[(v, q)]
            a, b, c = tri.triangles[t]
            p = {a: b, b: c, c: a}[v]
            rays.append(centroid[t])
            rays.append(midpoint(v, p))
            q = p
        m = len(rays) - 1
        for j in range(m):
            if j == 0:
                triangles.append(CycleTriangle(rays[1], rays[0], v, BOUNDARY_EDGE, v))
            elif j == m - 1:
                triangles.append(CycleTriangle(rays[m - 1], v, rays[m], BOUNDARY_EDGE, v))
            else:
                triangles.append(CycleTriangle(v, rays[j], rays[j + 1], WALL_EDGE, v))
    for t, (a, b, c) in enumerate(tri.triangles):
        for u, w in ((a, b), (b, c), (c, a)):
            if (w - u) % n not in (1, n - 1):
                m = mid[(u, w) if u < w else (w, u)]
                wall.add((centroid[t], m) if centroid[t] < m else (m, centroid[t]))
    return SteinerTriangulation(points, n, triangles, sorted(wall))


@dataclass(frozen=True)
class Cut:
    point: Point
    t: float
    near: list[Point]
    far: list[Point]

    @property
    def segment(self) -> tuple[Point, Point]:
        return self.near[0], self.point


def cut_triangle(apex: Point, start: Point, end: Point, target_area: float) -> Cut:
    """Cut from ``apex`` to the free edge start -> end so the part next to the
    entry edge apex-start has area ``target_area``.

    Area grows linearly along the free edge, so the cut point is
    ``start + t (end - start)`` with ``t = target / area``.
    """
    area = abs(_tri_area(apex, start, end))
    if target_area < 0 or target_area > area * (1 + 1e-12):
        raise ValueError(f"target area {target_area!r} outside [0, {area!r}]")
    t = 0.0 if area == 0 else min(1.0, target_area / area)
    x = (start[0] + t * (end[0] - start[0]), start[1] + t * (end[1] - start[1]))
    if t == 0.0:
        x = start
    elif t == 1.0:
        x = end
    return Cut(x, t, [apex, start, x], [apex, x, end])


def reconcile_areas(areas: Sequence[float], total: float, rel: float = 1e-9) -> list[float]:
    areas = [float(a) for a in areas]
    if not areas:
        raise ValueError("at least one area is required")
    for a in areas:
        if not a > 0 or not math.isfinite(a):
            raise ValueError(f"areas must be positive, got {a!r}")
        if a < 1e-12 * total:
            raise ValueError(f"area {a!r} is below 1e-12 of the polygon area")
    s = math.fsum(areas)
    residual = s - total
    if abs(residual) > rel * total:
        raise ValueError(f"areas sum to {s!r} but the polygon has area {total!r} (residual {residual!r})")
    areas[-1] -= residual
    if areas[-1] <= 0:
        raise ValueError("last area vanishes after reconciliation")
    return areas


def _start_index(st: SteinerTriangulation, ring: Sequence[Point]) -> int:
    corner = lexmin_index(ring)
    return next(i for i, t in enumerate(st.triangles) if t.corner == corner)


def area_partition(poly: Sequence[Point], areas: Sequence[float]) -> Partition:
    """Partition ``poly`` into ``len(areas)`` connected pieces of the given areas."""
    ring = validate_polygon(poly)
    total = polygon_area(ring)
    want = reconcile_areas(areas, total)
    st = steiner_triangulate(ring)
    T = len(st.triangles)
    s0 = _start_index(st, ring)
    order = [st.triangles[(s0 + i) % T] for i in range(T)]
    pts = list(st.points)

    # piece runs: (triangle, t0, t1) in walk order
    runs: list[list[tuple[CycleTriangle, float, float]]] = [[] for _ in want]
    cuts: dict[tuple[int, int], list[int]] = {}  # free edge -> cut point ids
    k = 0
    need = want[0]
    for tri in order:
        area = abs(st.area(tri))
        t0 = 0.0
        while k < len(want) - 1 and area * (1.0 - t0) >= need:
            # piece k ends inside this triangle
            t1 = min(1.0, t0 + need / area) if area > 0 else t0
            runs[k].append((tri, t0, t1))
            c = cut_triangle(pts[tri.apex], pts[tri.start], pts[tri.end], t1 * area)
            if 0.0 < t1 < 1.0:
                pid = len(pts)
                pts.append(c.point)
                key = (tri.start, tri.end) if tri.start < tri.end else (tri.end, tri.start)
                cuts.setdefault(key, []).append(pid)
            k += 1
            need = want[k]
            t0 = t1
        runs[k].append((tri, t0, 1.0))
        need -= area * (1.0 - t0)

    pieces = []
    for i, run in enumerate(runs):
        verts = _run_ring(st, pts, run, cuts)
        pieces.append(Piece(verts, AREA, {"target_area": want[i]}))
    meta = {"steiner_triangles": T, "steiner_points": st.steiner_count, "start_triangle": s0}
    return Partition("area", pieces, meta)


def _run_ring(st: SteinerTriangulation, pts: list[Point], run, cuts) -> list[Point]:
    """Boundary of a run of (partial) cycle triangles, with free edges split at
    every cut point lying on them so that shared edges cancel exactly."""
    edges: dict[tuple[int, int], int] = {}

    def split_free(a: int, b: int) -> list[int]:
        key = (a, b) if a < b else (b, a)
        ids = cuts.get(key)
        if not ids:
            return [a, b]
        (ax, ay), (bx, by) = pts[a], pts[b]
        inner = sorted(ids, key=lambda p: (pts[p][0] - ax) * (bx - ax) + (pts[p][1] - ay) * (by - ay))
        return [a] + inner + [b]

    def add(u: int, v: int) -> None:
        if u == v:
            return
        if edges.get((v, u), 0) > 0:
            edges[(v, u)] -= 1
        else:
            edges[(u, v)] = edges.get((u, v), 0) + 1

    for tri, t0, t1 in run:
        if t1 <= t0:
            continue
        chain = split_free(tri.start, tri.end)
        # restrict the free edge chain to [t0, t1]
        (sx, sy), (ex, ey) = pts[tri.start], pts[tri.end]
        L2 = (ex - sx) ** 2 + (ey - sy) ** 2

        def param(p: int) -> float:
            return ((pts[p][0] - sx) * (ex - sx) + (pts[p][1] - sy) * (ey - sy)) / L2

        lo = _point_at(chain, param, t0)
        hi = _point_at(chain, param, t1)
        sub = [c for c in chain if param(c) > param(lo) and param(c) < param(hi)]
        free = [lo] + sub + [hi]
        # boundary of (apex, lo, ..., hi), counterclockwise by construction
        ring = [tri.apex] + free
        if orient(pts[tri.apex], pts[tri.start], pts[tri.end]) < 0:
            ring = ring[::-1]
        for u, v in zip(ring, ring[1:] + ring[:1]):
            add(u, v)
    half = [e for e, c in edges.items() for _ in range(c)]
    return _trace(pts, half)


def _point_at(chain: list[int], param, t: float) -> int:
    for c in chain:
        if abs(param(c) - t) <= 1e-15:
            return c
    best = min(chain, key=lambda c: abs(param(c) - t))
    if abs(param(best) - t) <= 1e-12:
        return best
    raise InvalidPolygon("cut point missing from free edge")


def _trace(pts: list[Point], half: list[tuple[int, int]]) -> list[Point]:
    ids = splice(trace_directed(pts, half))
    return [pts[i] for i in ids]
