"""Planar overlay of polygonal rings and chains as a doubly-connected edge list.

Segments are noded (split at crossings, at vertices lying on them and at
collinear overlaps), vertices closer than a small tolerance are merged, and
coincident edges collapse into one edge that remembers which closed rings
run along it. Every face then carries a bit mask of the rings containing it,
obtained by toggling masks across edges from the unbounded face.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .polygon import InvalidPolygon, point_in_polygon, Location
from .predicates import Point, orient_many


@dataclass
class Face:
    outer: int | None  # a half-edge on the outer boundary (None for the unbounded face)
    inner: list[int] = field(default_factory=list)
    area: float = 0.0
    mask: int = 0


class Subdivision:
    """Half-edges ``2e`` (u -> v) and ``2e + 1`` (v -> u) for each edge ``e``.

    A half-edge has its face on the left; bounded outer cycles are
    counterclockwise.
    """

    def __init__(self, points: list[Point], edges: list[tuple[int, int]], masks: list[int]):
        self.points = points
        self.edges = edges
        self.edge_mask = masks
        nh = 2 * len(edges)
        self.origin = [0] * nh
        for e, (u, v) in enumerate(edges):
            self.origin[2 * e] = u
            self.origin[2 * e + 1] = v
        self._build_rotation()
        self._build_faces()

    # -- construction -----------------------------------------------------
    def _build_rotation(self) -> None:
        out: list[list[int]] = [[] for _ in self.points]
        for h in range(len(self.origin)):
            out[self.origin[h]].append(h)
        pts = self.points
        for v, hs in enumerate(out):
            px, py = pts[v]
            hs.sort(key=lambda h: math.atan2(pts[self.target(h)][1] - py, pts[self.target(h)][0] - px))
        self.out = out
        pos = [0] * len(self.origin)
        for hs in out:
            for k, h in enumerate(hs):
                pos[h] = k
        self._pos = pos
        nxt = [0] * len(self.origin)
        for h in range(len(self.origin)):
            t = h ^ 1
            v = self.origin[t]
            ring = out[v]
            nxt[h] = ring[pos[t] - 1]
        self.next = nxt

    def _build_faces(self) -> None:
        nh = len(self.origin)
        cyc = [-1] * nh
        cycles: list[list[int]] = []
        for h in range(nh):
            if cyc[h] >= 0:
                continue
            c = len(cycles)
            hs = []
            g = h
            while cyc[g] < 0:
                cyc[g] = c
                hs.append(g)
                g = self.next[g]
            cycles.append(hs)
        areas = [self._cycle_area(hs) for hs in cycles]
        faces = [Face(None)]
        cycle_face = [-1] * len(cycles)
        for c, a in enumerate(areas):
            if a > 0:
                cycle_face[c] = len(faces)
                faces.append(Face(cycles[c][0], area=a))
        holes = [c for c, a in enumerate(areas) if a <= 0]
        if holes:
            bounded = [c for c, a in enumerate(areas) if a > 0]
            rings = {c: [self.points[self.origin[h]] for h in cycles[c]] for c in bounded}
            boxes = {c: _bbox(r) for c, r in rings.items()}
            for c in holes:
                verts = [self.points[self.origin[h]] for h in cycles[c]]
                probe = min(verts)
                best, best_area = 0, math.inf
                for b in bounded:
                    x0, y0, x1, y1 = boxes[b]
                    if not (x0 <= probe[0] <= x1 and y0 <= probe[1] <= y1) or areas[b] >= best_area:
                        continue
                    if point_in_polygon(rings[b], probe) == Location.INSIDE:
                        best, best_area = cycle_face[b], areas[b]
                cycle_face[c] = best
                faces[best].inner.append(cycles[c][0])
                faces[best].area += areas[c]
        self.faces = faces
        self.half_face = [cycle_face[cyc[h]] for h in range(nh)]
        self.cycles = cycles
        self._label_faces()

    def _cycle_area(self, hs: list[int]) -> float:
        pts = self.points
        x0, y0 = pts[self.origin[hs[0]]]
        terms = []
        for h in hs:
            (ax, ay), (bx, by) = pts[self.origin[h]], pts[self.origin[h ^ 1]]
            terms.append((ax - x0) * (by - y0) - (bx - x0) * (ay - y0))
        return math.fsum(terms) / 2.0

    def _label_faces(self) -> None:
        nf = len(self.faces)
        seen = [False] * nf
        seen[0] = True
        self.faces[0].mask = 0
        stack = [0]
        while stack:
            f = stack.pop()
            for h in self.face_half_edges(f):
                g = self.half_face[h ^ 1]
                if not seen[g]:
                    seen[g] = True
                    self.faces[g].mask = self.faces[f].mask ^ self.edge_mask[h >> 1]
                    stack.append(g)

    # -- queries ----------------------------------------------------------
    def target(self, h: int) -> int:
        return self.origin[h ^ 1]

    def cycle(self, h: int) -> list[int]:
        hs = [h]
        g = self.next[h]
        while g != h:
            hs.append(g)
            g = self.next[g]
        return hs

    def face_half_edges(self, f: int) -> list[int]:
        face = self.faces[f]
        hs = [] if face.outer is None else self.cycle(face.outer)
        for h in face.inner:
            hs.extend(self.cycle(h))
        return hs

    def face_ring(self, f: int) -> list[Point]:
        face = self.faces[f]
        if face.outer is None:
            return []
        return [self.points[self.origin[h]] for h in self.cycle(face.outer)]

    def bounded_faces(self) -> range:
        return range(1, len(self.faces))

    def faces_inside(self, bit: int) -> list[int]:
        return [f for f in self.bounded_faces() if (self.faces[f].mask >> bit) & 1]

    def neighbors(self, f: int) -> set[int]:
        return {self.half_face[h ^ 1] for h in self.face_half_edges(f)} - {f}

    def components(self) -> int:
        parent = list(range(len(self.points)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        used = {u for e in self.edges for u in e}
        return len({find(u) for u in used})

    def euler_ok(self) -> bool:
        used = {u for e in self.edges for u in e}
        V, E, F = len(used), len(self.edges), len(self.faces)
        return V - E + F == 1 + self.components()

    def interior_point(self, f: int) -> Point:
        """A point strictly inside bounded face f."""
        hs = self.face_half_edges(f)
        pts = self.points
        seg = np.array([[*pts[self.origin[h]], *pts[self.origin[h ^ 1]]] for h in hs], dtype=float)
        lens = np.hypot(seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1])
        for k in np.argsort(-lens):
            ax, ay, bx, by = seg[k]
            L = lens[k]
            if L == 0:
                continue
            mx, my = (ax + bx) / 2, (ay + by) / 2
            nx, ny = -(by - ay) / L, (bx - ax) / L
            # first hit of the ray m + s n (s > 0) with the face boundary
            dx, dy = seg[:, 2] - seg[:, 0], seg[:, 3] - seg[:, 1]
            den = nx * dy - ny * dx
            with np.errstate(divide="ignore", invalid="ignore"):
                s = ((seg[:, 0] - mx) * dy - (seg[:, 1] - my) * dx) / den
                u = ((seg[:, 0] - mx) * ny - (seg[:, 1] - my) * nx) / den
            ok = (np.abs(den) > 0) & (s > 1e-12 * L) & (u >= 0) & (u <= 1)
            ok[k] = False
            if not ok.any():
                continue
            smin = float(s[ok].min())
            p = (float(mx + nx * smin / 2), float(my + ny * smin / 2))
            if self._face_contains(f, p):
                return p
        raise InvalidPolygon("could not place a point inside a face")

    def _face_contains(self, f: int, p: Point) -> bool:
        face = self.faces[f]
        ring = [self.points[self.origin[h]] for h in self.cycle(face.outer)]
        if point_in_polygon(ring, p) != Location.INSIDE:
            return False
        for h in face.inner:
            hole = [self.points[self.origin[g]] for g in self.cycle(h)]
            if point_in_polygon(hole, p) != Location.OUTSIDE:
                return False
        return True


def _bbox(ring: Sequence[Point]) -> tuple[float, float, float, float]:
    xs = [p[0] for p in ring]
    ys = [p[1] for p in ring]
    return min(xs), min(ys), max(xs), max(ys)


class _Clusters:
    """Merge points closer than ``tol`` (hash grid + union by first come)."""

    def __init__(self, tol: float):
        self.tol = tol
        self.cell = tol * 4 if tol > 0 else 1.0
        self.points: list[Point] = []
        self.grid: dict[tuple[int, int], list[int]] = {}
        self.exact: dict[Point, int] = {}

    def add(self, p: Point) -> int:
        hit = self.exact.get(p)
        if hit is not None:
            return hit
        if self.tol > 0:
            gx, gy = math.floor(p[0] / self.cell), math.floor(p[1] / self.cell)
            for ix in (gx - 1, gx, gx + 1):
                for iy in (gy - 1, gy, gy + 1):
                    for k in self.grid.get((ix, iy), ()):
                        q = self.points[k]
                        if abs(q[0] - p[0]) <= self.tol and abs(q[1] - p[1]) <= self.tol:
                            self.exact[p] = k
                            return k
        k = len(self.points)
        self.points.append(p)
        self.exact[p] = k
        if self.tol > 0:
            self.grid.setdefault((gx, gy), []).append(k)
        return k


def overlay(rings: Sequence[Sequence[Point]] = (), chains: Sequence[Sequence[Point]] = (),
            grid: tuple[Sequence[float], Sequence[float]] | None = None,
            *, tol: float = 1e-11) -> Subdivision:
    """Arrangement of closed ``rings`` (bit k of a face mask = inside ring k),
    open ``chains`` and optional axis-parallel grid lines ``(xs, ys)``.

    ``tol`` is relative to the bounding-box size of the input.
    """
    segs: list[tuple[Point, Point, int]] = []  # ring index or -1
    for k, ring in enumerate(rings):
        n = len(ring)
        for i in range(n):
            a, b = ring[i], ring[(i + 1) % n]
            if a != b:
                segs.append(((float(a[0]), float(a[1])), (float(b[0]), float(b[1])), k))
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            if a != b:
                segs.append(((float(a[0]), float(a[1])), (float(b[0]), float(b[1])), -1))
    if not segs:
        return Subdivision([], [], [])
    allpts = np.array([s[0] for s in segs] + [s[1] for s in segs], dtype=float)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    if grid is not None:
        xs, ys = grid
        for x in xs:
            segs.append(((float(x), float(lo[1])), (float(x), float(hi[1])), -1))
        for y in ys:
            segs.append(((float(lo[0]), float(y)), (float(hi[0]), float(y)), -1))
    scale = float(max(hi - lo)) or 1.0
    return _build(segs, tol * scale)


def _build(segs: list[tuple[Point, Point, int]], tol: float) -> Subdivision:
    S = len(segs)
    A = np.array([s[0] for s in segs], dtype=float)
    B = np.array([s[1] for s in segs], dtype=float)
    xmin = np.minimum(A[:, 0], B[:, 0]) - tol
    xmax = np.maximum(A[:, 0], B[:, 0]) + tol
    ymin = np.minimum(A[:, 1], B[:, 1]) - tol
    ymax = np.maximum(A[:, 1], B[:, 1]) + tol

    clusters = _Clusters(tol)
    for s in segs:
        clusters.add(s[0])
        clusters.add(s[1])

    order = np.argsort(xmin, kind="stable")
    xs_sorted = xmin[order]
    splits: list[list[int]] = [[] for _ in range(S)]
    # proper crossings
    for i in range(S):
        hi = np.searchsorted(xs_sorted, xmax[i], side="right")
        cand = order[:hi]
        cand = cand[(cand > i) & (xmax[cand] >= xmin[i]) & (ymin[cand] <= ymax[i]) & (ymax[cand] >= ymin[i])]
        if cand.size == 0:
            continue
        ax, ay = A[i]
        bx, by = B[i]
        o1 = orient_many(ax, ay, bx, by, A[cand, 0], A[cand, 1])
        o2 = orient_many(ax, ay, bx, by, B[cand, 0], B[cand, 1])
        o3 = orient_many(A[cand, 0], A[cand, 1], B[cand, 0], B[cand, 1], ax, ay)
        o4 = orient_many(A[cand, 0], A[cand, 1], B[cand, 0], B[cand, 1], bx, by)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        for j in cand[hit]:
            p = _intersect(A[i], B[i], A[j], B[j])
            k = clusters.add(p)
            splits[i].append(k)
            splits[int(j)].append(k)

    # vertices lying on (or within tol of) segment interiors
    V = np.array(clusters.points, dtype=float)
    vorder = np.argsort(V[:, 0], kind="stable")
    vx_sorted = V[vorder, 0]
    for i in range(S):
        lo_i = np.searchsorted(vx_sorted, xmin[i], side="left")
        hi_i = np.searchsorted(vx_sorted, xmax[i], side="right")
        cand = vorder[lo_i:hi_i]
        cand = cand[(V[cand, 1] >= ymin[i]) & (V[cand, 1] <= ymax[i])]
        if cand.size == 0:
            continue
        a, b = A[i], B[i]
        d = b - a
        L2 = float(d @ d)
        t = ((V[cand, 0] - a[0]) * d[0] + (V[cand, 1] - a[1]) * d[1]) / L2
        px = a[0] + t * d[0] - V[cand, 0]
        py = a[1] + t * d[1] - V[cand, 1]
        near = (t > 0) & (t < 1) & (np.hypot(px, py) <= tol)
        splits[i].extend(int(k) for k in cand[near])

    edge_index: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int]] = []
    masks: list[int] = []
    pts = clusters.points
    for i, (a, b, ring) in enumerate(segs):
        ia, ib = clusters.exact[a], clusters.exact[b]
        d0, d1 = b[0] - a[0], b[1] - a[1]
        mids = sorted(set(splits[i]) - {ia, ib},
                      key=lambda k: (pts[k][0] - a[0]) * d0 + (pts[k][1] - a[1]) * d1)
        chain = [ia] + mids + [ib]
        bit = (1 << ring) if ring >= 0 else 0
        for u, v in zip(chain, chain[1:]):
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            e = edge_index.get(key)
            if e is None:
                edge_index[key] = len(edges)
                edges.append(key)
                masks.append(bit)
            else:
                masks[e] ^= bit
    return Subdivision(list(pts), edges, masks)


def _intersect(a, b, c, d) -> Point:
    r = b - a
    s = d - c
    den = r[0] * s[1] - r[1] * s[0]
    t = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / den
    t = min(1.0, max(0.0, t))
    return (float(a[0] + t * r[0]), float(a[1] + t * r[1]))


def face_areas_inside(sub: Subdivision, bit: int) -> float:
    return math.fsum(sub.faces[f].area for f in sub.faces_inside(bit))


def rings_overlay(rings: Iterable[Sequence[Point]]) -> Subdivision:
    return overlay(list(rings))
