"""Minimum enclosing disk and circular hulls."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .hull import convex_hull
from .predicates import Point, orient

_REL_TOL = 1e-14


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def contains(self, p: Point, tol: float = 1e-12) -> bool:
        return math.dist(self.center, p) <= self.radius + tol


def _circle2(a: Point, b: Point) -> Disk:
    c = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    return Disk(c, max(math.dist(c, a), math.dist(c, b)))


def _circle3(a: Point, b: Point, c: Point) -> Disk:
    if orient(a, b, c) == 0:
        pairs = [(a, b), (b, c), (a, c)]
        u, v = max(pairs, key=lambda uv: math.dist(*uv))
        return _circle2(u, v)
    # translate to a for conditioning
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = (a[0] + ux, a[1] + uy)
    return Disk(center, max(math.dist(center, a), math.dist(center, b), math.dist(center, c)))


def _inside(d: Disk, p: Point) -> bool:
    return math.dist(d.center, p) <= d.radius * (1 + _REL_TOL) + 1e-300


def min_enclosing_disk(points: Sequence[Point], seed: int = 0) -> Disk:
    """Smallest disk containing all points (Welzl's randomized incremental method).

    The permutation comes from a private RNG seeded by ``seed``, so the
    function is deterministic and thread-safe.
    """
    pts = list(dict.fromkeys((float(x), float(y)) for x, y in points))
    if not pts:
        raise ValueError("need at least one point")
    random.Random(seed).shuffle(pts)
    d = Disk(pts[0], 0.0)
    for i in range(1, len(pts)):
        p = pts[i]
        if _inside(d, p):
            continue
        d = Disk(p, 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(d, q):
                continue
            d = _circle2(p, q)
            for k in range(j):
                r = pts[k]
                if not _inside(d, r):
                    d = _circle3(p, q, r)
    return d


@dataclass(frozen=True)
class CircularHull:
    """Intersection of all radius-``r`` disks containing a point set.

    ``vertices[k]`` and ``vertices[k+1]`` (cyclically) are joined by an arc of
    radius ``r`` centred at ``centers[k]``. Infeasible sets (enclosing
    radius > r) have ``feasible`` False and no arcs.
    """

    feasible: bool
    r: float
    vertices: list[Point] = field(default_factory=list)
    centers: list[Point] = field(default_factory=list)

    def contains(self, p: Point, tol: float = 1e-9) -> bool:
        if not self.feasible:
            return False
        if not self.centers:
            return bool(self.vertices) and math.dist(self.vertices[0], p) <= tol
        return all(math.dist(c, p) <= self.r + tol for c in self.centers)


def arc_center(u: Point, w: Point, r: float) -> Point:
    """Centre of the radius-r circle through u and w lying left of u -> w."""
    mx, my = (u[0] + w[0]) / 2, (u[1] + w[1]) / 2
    dx, dy = w[0] - u[0], w[1] - u[1]
    half = math.hypot(dx, dy) / 2
    h = math.sqrt(max(r * r - half * half, 0.0))
    if half == 0:
        return (mx, my)
    return (mx - dy / (2 * half) * h, my + dx / (2 * half) * h)


def circular_hull(points: Sequence[Point], r: float) -> CircularHull:
    """Boundary of the radius-r circular hull as a cyclic list of arcs."""
    if r <= 0:
        raise ValueError("radius must be positive")
    med = min_enclosing_disk(points)
    if med.radius > r * (1 + 1e-12):
        return CircularHull(False, r)
    hull = convex_hull(points)
    if len(hull) == 1:
        return CircularHull(True, r, [hull[0]], [])
    # a farthest point from the MED centre lies on every enclosing radius-r
    # disk that is internally tangent there, so it is a circular-hull vertex
    start = max(range(len(hull)), key=lambda i: math.dist(hull[i], med.center))
    seq = hull[start:] + hull[:start] + [hull[start]]
    stack: list[Point] = [seq[0]]
    for w in seq[1:]:
        while len(stack) >= 2:
            c = arc_center(stack[-2], w, r)
            if math.dist(c, stack[-1]) <= r * (1 + 1e-12):
                stack.pop()
            else:
                break
        stack.append(w)
    stack.pop()  # closing copy of the start vertex
    verts = stack
    if len(verts) == 1:
        return CircularHull(True, r, verts, [])
    centers = [arc_center(verts[k], verts[(k + 1) % len(verts)], r) for k in range(len(verts))]
    return CircularHull(True, r, verts, centers)
