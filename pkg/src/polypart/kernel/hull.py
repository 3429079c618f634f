"""Convex hulls and rotating-calipers measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .predicates import Point, edge_turn, orient


@dataclass(frozen=True)
class OrientedSquare:
    center: Point
    half_side: float
    angle: float  # radians in [0, pi/2)

    def corners(self) -> list[Point]:
        c, s = math.cos(self.angle), math.sin(self.angle)
        h = self.half_side
        out = []
        for du, dv in ((-h, -h), (h, -h), (h, h), (-h, h)):
            out.append((self.center[0] + du * c - dv * s, self.center[1] + du * s + dv * c))
        return out

    def contains(self, p: Point, tol: float = 1e-9) -> bool:
        c, s = math.cos(self.angle), math.sin(self.angle)
        dx, dy = p[0] - self.center[0], p[1] - self.center[1]
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return abs(u) <= self.half_side + tol and abs(v) <= self.half_side + tol


def convex_hull(points: Sequence[Point]) -> list[Point]:
    """Counterclockwise hull with collinear points removed (Andrew's monotone chain).

    One or two points come back as a degenerate hull of that many vertices;
    collinear input yields its two extreme points.
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def is_degenerate_hull(hull: Sequence[Point]) -> bool:
    return len(hull) < 3


def antipodal_pairs(hull: Sequence[Point]) -> list[tuple[int, int]]:
    """All antipodal vertex pairs of a CCW convex polygon (rotating calipers)."""
    h = len(hull)
    if h == 1:
        return [(0, 0)]
    if h == 2:
        return [(0, 1)]

    pairs = []
    j = 1
    for i in range(h):
        i1 = (i + 1) % h
        # advance while edge j still moves away from the line of edge i
        while (t := edge_turn(hull[i], hull[i1], hull[j], hull[(j + 1) % h])) > 0:
            j = (j + 1) % h
        pairs += [(i, j), (i1, j)]
        if t == 0:  # parallel edges: both ends of edge j are antipodal
            pairs += [(i, (j + 1) % h), (i1, (j + 1) % h)]
    return pairs


def straight_diameter(points: Sequence[Point]) -> float:
    """Largest pairwise distance, measured over antipodal pairs of the hull."""
    hull = convex_hull(points)
    if len(hull) < 2:
        return 0.0
    return max(math.dist(hull[i], hull[j]) for i, j in antipodal_pairs(hull))


def diameter_pair(points: Sequence[Point]) -> tuple[Point, Point]:
    hull = convex_hull(points)
    if len(hull) < 2:
        return hull[0], hull[0]
    i, j = max(antipodal_pairs(hull), key=lambda ij: math.dist(hull[ij[0]], hull[ij[1]]))
    return hull[i], hull[j]


def _extent(xy: np.ndarray, angles: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    c, s = np.cos(angles), np.sin(angles)
    pu = xy[:, 0:1] * c + xy[:, 1:2] * s  # (points, angles)
    pv = -xy[:, 0:1] * s + xy[:, 1:2] * c
    return pu.min(axis=0), pu.max(axis=0), pv.min(axis=0), pv.max(axis=0)


def min_square_over_rotations(points: Sequence[Point]) -> tuple[float, float, OrientedSquare]:
    """Smallest enclosing square over all orientations.

    Returns ``(angle, side, square)``. The longer side of the angle-phi
    bounding rectangle is piecewise a maximum of two sinusoids whose support
    vertices change only at hull edge directions (mod pi/2); its minimum lies
    at such an event or where the two side lengths are equal.
    """
    hull = convex_hull(points)
    if len(hull) == 1:
        return 0.0, 0.0, OrientedSquare(hull[0], 0.0, 0.0)
    xy = np.asarray(hull, dtype=float)
    quarter = math.pi / 2
    events = {0.0}
    h = len(hull)
    for i in range(h if h > 2 else 1):
        a, b = hull[i], hull[(i + 1) % h]
        events.add(math.atan2(b[1] - a[1], b[0] - a[0]) % quarter)
    ev = sorted(e for e in events if e < quarter)
    ev.append(quarter)
    cands = list(ev[:-1])
    mids = np.array([(ev[k] + ev[k + 1]) / 2 for k in range(len(ev) - 1)])
    c, s = np.cos(mids), np.sin(mids)
    pu = xy[:, 0:1] * c + xy[:, 1:2] * s
    pv = -xy[:, 0:1] * s + xy[:, 1:2] * c
    iu_max, iu_min = pu.argmax(axis=0), pu.argmin(axis=0)
    iv_max, iv_min = pv.argmax(axis=0), pv.argmin(axis=0)
    for k in range(len(ev) - 1):
        dx, dy = xy[iu_max[k]] - xy[iu_min[k]]
        ex, ey = xy[iv_max[k]] - xy[iv_min[k]]
        # width = dx cos + dy sin, height = -ex sin + ey cos; equal where
        # (dx - ey) cos + (dy + ex) sin = 0
        phi = math.atan2(-(dx - ey), dy + ex) % math.pi
        for cand in (phi, phi - math.pi / 2, phi + math.pi / 2):
            if ev[k] < cand < ev[k + 1]:
                cands.append(cand)
    angles = np.asarray(cands)
    umin, umax, vmin, vmax = _extent(xy, angles)
    longer = np.maximum(umax - umin, vmax - vmin)
    best = int(np.argmin(longer))
    phi = float(angles[best])
    side = float(longer[best])
    cu = (umin[best] + umax[best]) / 2
    cv = (vmin[best] + vmax[best]) / 2
    cx = cu * math.cos(phi) - cv * math.sin(phi)
    cy = cu * math.sin(phi) + cv * math.cos(phi)
    return phi, side, OrientedSquare((float(cx), float(cy)), side / 2, phi)


def aligned_square_side(points: Sequence[Point]) -> float:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return max(max(xs) - min(xs), max(ys) - min(ys))
