"""Geodesic shortest paths inside polygons.

Simple polygons use the funnel algorithm over an ear-clipping triangulation.
Weakly simple rings (repeated vertices, zero-width spikes) use a visibility
graph on the vertex cycle: coincident vertices are distinct nodes joined at
zero cost and grazing contact with the boundary does not block a sight line.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hull import straight_diameter
from .polygon import InvalidPolygon, is_convex, is_simple, polygon_area
from .predicates import Point, orient, orient_many
from .triangulate import Triangulation, triangulate


class PointOutside(ValueError):
    """A query point lies outside the polygon beyond the containment tolerance."""


@dataclass(frozen=True)
class ShortestPath:
    waypoints: tuple[Point, ...]
    length: float

    @classmethod
    def through(cls, pts: Sequence[Point]) -> "ShortestPath":
        pts = tuple(pts)
        return cls(pts, math.fsum(math.dist(pts[i], pts[i + 1]) for i in range(len(pts) - 1)))


def _drop_straight(points: list[Point]) -> list[Point]:
    """Remove repeated points and waypoints where the path goes straight on."""
    out: list[Point] = []
    for p in points:
        if out and out[-1] == p:
            continue
        while len(out) >= 2 and orient(out[-2], out[-1], p) == 0 and (
                (out[-1][0] - out[-2][0]) * (p[0] - out[-1][0])
                + (out[-1][1] - out[-2][1]) * (p[1] - out[-1][1]) > 0):
            out.pop()
        out.append(p)
    return out


class PolygonPaths:
    """Shortest-path queries in one simple polygon (triangulation is cached)."""

    def __init__(self, ring: Sequence[Point], tri: Triangulation | None = None, *, tol: float = 1e-9):
        self.ring = [(float(x), float(y)) for x, y in ring]
        self.tri = tri if tri is not None else triangulate(self.ring)
        pts = np.asarray(self.tri.points, dtype=float)
        idx = np.asarray(self.tri.triangles, dtype=int)
        corners = pts[idx]  # (T, 3, 2)
        self._lo = corners.min(axis=1)
        self._hi = corners.max(axis=1)
        span = float(np.ptp(pts, axis=0).max()) or 1.0
        self.tol = tol * span
        self._root_tree()

    def _root_tree(self) -> None:
        nt = len(self.tri.triangles)
        parent = [-1] * nt
        depth = [0] * nt
        seen = [False] * nt
        seen[0] = True
        order = [0]
        for t in order:
            for u in self.tri.neighbors[t]:
                if u >= 0 and not seen[u]:
                    seen[u] = True
                    parent[u] = t
                    depth[u] = depth[t] + 1
                    order.append(u)
        self._parent = parent
        self._depth = depth

    def locate(self, p: Point) -> int:
        """Index of a triangle whose closure contains p."""
        x, y = p
        cand = np.nonzero((self._lo[:, 0] <= x) & (self._hi[:, 0] >= x)
                          & (self._lo[:, 1] <= y) & (self._hi[:, 1] >= y))[0]
        for t in cand:
            a, b, c = self.tri.corners(int(t))
            if orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0:
                return int(t)
        # tolerate points a rounding error outside (e.g. interpolated on an edge)
        best, best_d = -1, math.inf
        near = np.nonzero((self._lo[:, 0] - self.tol <= x) & (self._hi[:, 0] + self.tol >= x)
                          & (self._lo[:, 1] - self.tol <= y) & (self._hi[:, 1] + self.tol >= y))[0]
        for t in near:
            d = _point_triangle_distance(p, *self.tri.corners(int(t)))
            if d < best_d:
                best, best_d = int(t), d
        if best >= 0 and best_d <= self.tol:
            return best
        raise PointOutside(f"point {p!r} is outside the polygon")

    def triangle_path(self, t1: int, t2: int) -> list[int]:
        left, right = [t1], [t2]
        a, b = t1, t2
        while self._depth[a] > self._depth[b]:
            a = self._parent[a]
            left.append(a)
        while self._depth[b] > self._depth[a]:
            b = self._parent[b]
            right.append(b)
        while a != b:
            a = self._parent[a]
            b = self._parent[b]
            left.append(a)
            right.append(b)
        right.pop()  # common ancestor already in left
        return left + right[::-1]

    def _portals(self, tris: list[int]) -> list[tuple[Point, Point]]:
        portals = []
        for t, u in zip(tris, tris[1:]):
            nb = self.tri.neighbors[t]
            k = nb.index(u)
            tri = self.tri.triangles[t]
            a = self.tri.points[tri[(k + 1) % 3]]
            b = self.tri.points[tri[(k + 2) % 3]]
            # crossing edge a->b out of t: b is on the left, a on the right
            portals.append((b, a))
        return portals

    def shortest_path(self, s: Point, t: Point) -> ShortestPath:
        s = (float(s[0]), float(s[1]))
        t = (float(t[0]), float(t[1]))
        if s == t:
            return ShortestPath((s, t), 0.0)
        ts, tt = self.locate(s), self.locate(t)
        if ts == tt:
            return ShortestPath.through([s, t])
        tris = self.triangle_path(ts, tt)
        pts = funnel(s, t, self._portals(tris))
        return ShortestPath.through(_drop_straight(pts))

    def distance(self, s: Point, t: Point) -> float:
        return self.shortest_path(s, t).length

    def tree(self, source: Point) -> dict[int, tuple[Point, float]]:
        """Shortest-path tree to every polygon corner: index -> (predecessor, distance)."""
        out = {}
        for i, c in enumerate(self.ring):
            path = self.shortest_path(source, c)
            pred = path.waypoints[-2] if len(path.waypoints) >= 2 else source
            out[i] = (pred, path.length)
        return out


def _point_triangle_distance(p: Point, a: Point, b: Point, c: Point) -> float:
    if orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0:
        return 0.0
    return min(_point_segment_distance(p, a, b), _point_segment_distance(p, b, c),
               _point_segment_distance(p, c, a))


def _point_segment_distance(p: Point, a: Point, b: Point) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    if L2 == 0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2))
    return math.dist(p, (a[0] + t * dx, a[1] + t * dy))


def funnel(s: Point, t: Point, portals: list[tuple[Point, Point]]) -> list[Point]:
    """String-pull through a sequence of (left, right) portals from s to t."""
    ports = [(s, s)] + portals + [(t, t)]
    path = [s]
    apex = left = right = s
    apex_i = left_i = right_i = 0
    i = 1
    while i < len(ports):
        pl, pr = ports[i]
        # tighten the right side
        if orient(apex, right, pr) >= 0:
            if apex == right or orient(apex, left, pr) < 0:
                right, right_i = pr, i
            else:
                path.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        # tighten the left side
        if orient(apex, left, pl) <= 0:
            if apex == left or orient(apex, right, pl) > 0:
                left, left_i = pl, i
            else:
                path.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    if path[-1] != t:
        path.append(t)
    return path


def shortest_path(ring: Sequence[Point], s: Point, t: Point) -> ShortestPath:
    """Geodesic from s to t inside a simple polygon."""
    return PolygonPaths(ring).shortest_path(s, t)


def shortest_path_tree(ring: Sequence[Point], source: Point) -> dict[int, tuple[Point, float]]:
    """Predecessor and geodesic distance for every corner, from ``source``."""
    return PolygonPaths(ring).tree(source)


# --- weakly simple rings: visibility graph on the vertex cycle ---------------

def _locate_many(ring: Sequence[Point], qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    """Vectorised point location: 1 inside, 0 on boundary, -1 outside."""
    pts = np.asarray(ring, dtype=float)
    ax, ay = pts[:, 0], pts[:, 1]
    bx, by = np.roll(ax, -1), np.roll(ay, -1)
    QX, QY = qx[:, None], qy[:, None]
    o = orient_many(ax[None, :], ay[None, :], bx[None, :], by[None, :], QX, QY)
    within = ((np.minimum(ax, bx) <= QX) & (QX <= np.maximum(ax, bx))
              & (np.minimum(ay, by) <= QY) & (QY <= np.maximum(ay, by)))
    on_edge = ((o == 0) & within).any(axis=1)
    straddle = (ay[None, :] > QY) != (by[None, :] > QY)
    up = by[None, :] > ay[None, :]
    crosses = straddle & ((o > 0) == up)
    inside = (crosses.sum(axis=1) % 2) == 1
    return np.where(on_edge, 0, np.where(inside, 1, -1))


def visibility_matrix(ring: Sequence[Point]) -> np.ndarray:
    """Euclidean weights of closure-visible vertex pairs (inf where blocked).

    Only pairs with no other vertex strictly inside the sight segment are
    linked; collinear chains route through their intermediate vertices.
    """
    pts = np.asarray(ring, dtype=float)
    n = len(pts)
    W = np.full((n, n), np.inf)
    np.fill_diagonal(W, 0.0)
    ax, ay = pts[:, 0], pts[:, 1]
    bx, by = np.roll(ax, -1), np.roll(ay, -1)
    for u in range(n):
        vs = np.arange(u + 1, n)
        if vs.size == 0:
            continue
        ux, uy = ax[u], ay[u]
        vx, vy = ax[vs], ay[vs]
        same = (vx == ux) & (vy == uy)
        # proper crossings against every edge: shape (targets, edges)
        o1 = orient_many(ux, uy, vx[:, None], vy[:, None], ax[None, :], ay[None, :])
        o2 = orient_many(ux, uy, vx[:, None], vy[:, None], bx[None, :], by[None, :])
        o3 = orient_many(ax[None, :], ay[None, :], bx[None, :], by[None, :], ux, uy)
        o4 = orient_many(ax[None, :], ay[None, :], bx[None, :], by[None, :], vx[:, None], vy[:, None])
        blocked = ((o1 * o2 < 0) & (o3 * o4 < 0)).any(axis=1)
        # a vertex strictly inside the open segment (distinct from both ends)
        dotu = (ax[None, :] - ux) * (vx[:, None] - ux) + (ay[None, :] - uy) * (vy[:, None] - uy)
        dotv = (ax[None, :] - vx[:, None]) * (ux - vx[:, None]) + (ay[None, :] - vy[:, None]) * (uy - vy[:, None])
        interior = (o1 == 0) & (dotu > 0) & (dotv > 0)
        blocked |= interior.any(axis=1)
        ok = ~blocked & ~same
        if ok.any():
            mx = (ux + vx[ok]) / 2
            my = (uy + vy[ok]) / 2
            loc = _locate_many(ring, mx, my)
            idx = vs[ok][loc >= 0]
            d = np.hypot(ax[idx] - ux, ay[idx] - uy)
            W[u, idx] = d
            W[idx, u] = d
        W[u, vs[same]] = 0.0
        W[vs[same], u] = 0.0
    # ring edges lie in the closure by definition
    nxt = np.roll(np.arange(n), -1)
    d = np.hypot(bx - ax, by - ay)
    W[np.arange(n), nxt] = d
    W[nxt, np.arange(n)] = d
    np.fill_diagonal(W, 0.0)
    return W


def all_pairs_geodesic(ring: Sequence[Point]) -> np.ndarray:
    """Floyd-Warshall over the visibility graph of the vertex cycle."""
    D = visibility_matrix(ring)
    for k in range(len(D)):
        D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
    return D


def geodesic_tree(ring: Sequence[Point], source: int, W: np.ndarray | None = None) -> tuple[list[int], np.ndarray]:
    """Dijkstra over the visibility graph: (predecessor index list, distances)."""
    if W is None:
        W = visibility_matrix(ring)
    n = len(W)
    dist = np.full(n, np.inf)
    pred = [-1] * n
    dist[source] = 0.0
    done = np.zeros(n, dtype=bool)
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        nbrs = np.nonzero(np.isfinite(W[u]) & ~done)[0]
        for v in nbrs:
            nd = d + W[u, v]
            # ties go to the lower predecessor index for determinism
            if nd < dist[v] - 1e-15 * max(1.0, nd):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, int(v)))
    return pred, dist


def geodesic_diameter(ring: Sequence[Point], method: str = "auto") -> float:
    """Largest geodesic distance between two points of the (weakly simple) polygon.

    The maximum is attained at a pair of corners. Convex rings reduce to the
    straight diameter; ``method="funnel"`` runs one funnel-based shortest-path
    tree per corner and requires a simple ring; otherwise the visibility graph
    of the vertex cycle is used.
    """
    pts = [(float(x), float(y)) for x, y in ring]
    if len(pts) <= 2:
        return math.dist(pts[0], pts[-1]) if pts else 0.0
    if method == "auto" and is_convex(pts):
        return straight_diameter(pts)
    if method == "funnel":
        if not is_simple(pts) or polygon_area(pts) <= 0:
            raise InvalidPolygon("funnel method needs a simple counterclockwise ring")
        pp = PolygonPaths(pts)
        best = 0.0
        for i, p in enumerate(pts):
            for j in range(i + 1, len(pts)):
                best = max(best, pp.distance(p, pts[j]))
        return best
    D = all_pairs_geodesic(pts)
    return float(D.max())
