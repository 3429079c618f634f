"""Greedy boundary pieces for the six size constraints.

Starting at a0 (the lexicographically smallest corner), the boundary is cut
into maximal feasible intervals. Phase 1 finds, by exponential and binary
search over corners, the last corner the interval can reach; phase 2 bisects
on the following edge. Runs of intervals that contain no corner are jumped
in closed form, so the count estimate does O(1) work per edge.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Sequence

from .kernel.arrangement import Subdivision, overlay
from .kernel.cycles import region_ring
from .kernel.enclosing import min_enclosing_disk
from .kernel.hull import convex_hull, min_square_over_rotations, straight_diameter
from .kernel.paths import PolygonPaths
from .kernel.polygon import chain_length, lexmin_index, on_segment, validate_polygon
from .kernel.predicates import Point
from .model import BOUNDARY, Kind, Piece, SizeConstraint

SLACK = 1e-12
EPS_REL = 1e-9

BLOWUP = "blow-up"
SHORTEST_PATH = "shortest-path-enclosure"
TRIVIAL = "trivial-segment"


@dataclass(frozen=True, order=True)
class BoundaryPosition:
    edge_index: int
    t: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must lie in [0, 1]")


@dataclass
class BoundaryInterval:
    start: BoundaryPosition
    end: BoundaryPosition
    chain: list[Point]
    start_arc: float  # arc length from a0
    end_arc: float
    trivial: bool

    @property
    def length(self) -> float:
        return self.end_arc - self.start_arc


@dataclass
class BoundaryPiece:
    geometry: list[Point]
    interval: BoundaryInterval
    construction: str
    hull: list[Point] | None = None


@dataclass
class BoundaryPartition:
    constraint: SizeConstraint
    polygon: list[Point]
    intervals: list[BoundaryInterval]
    pieces: list[BoundaryPiece]
    # overlay of the boundary and the piece outlines; face_owner[f] is the
    # piece index, -1 for uncovered faces inside P and -2 outside P
    subdivision: Subdivision | None = None
    face_owner: list[int] = field(default_factory=list)
    edge_interval: dict[int, int] = field(default_factory=dict)
    slivers: int = 0

    def as_pieces(self) -> list[Piece]:
        return [Piece(p.geometry, BOUNDARY, {"construction": p.construction,
                                             "interval": (p.interval.start_arc, p.interval.end_arc)})
                for p in self.pieces]


def trivial_length(kind: Kind, bound: float, direction: tuple[float, float] = (1.0, 0.0)) -> float:
    """Longest straight segment with the given direction meeting the constraint."""
    if kind is Kind.ALIGNED_SQUARE:
        L = math.hypot(*direction)
        return bound / max(abs(direction[0]) / L, abs(direction[1]) / L)
    if kind is Kind.ROTATED_SQUARE:
        return math.sqrt(2.0) * bound
    if kind is Kind.DISK:
        return 2.0 * bound
    if kind in (Kind.STRAIGHT_DIAMETER, Kind.GEODESIC_DIAMETER):
        return bound
    if kind is Kind.PERIMETER:
        return bound / 2.0
    raise ValueError(kind)


class BoundaryWalker:
    """Arc-length parametrisation of the polygon boundary starting at a0."""

    def __init__(self, poly: Sequence[Point], constraint: SizeConstraint, a0: int | None = None):
        ring = validate_polygon(poly)
        self.poly = ring
        self.constraint = constraint
        self.kind = constraint.kind
        self.bound = constraint.bound
        self.shift = lexmin_index(ring) if a0 is None else a0
        self.R = ring[self.shift:] + ring[:self.shift]
        n = self.n = len(ring)
        self.lengths = [math.dist(self.R[i], self.R[(i + 1) % n]) for i in range(n)]
        cum = [0.0]
        for L in self.lengths:
            cum.append(cum[-1] + L)
        self.cum = cum
        self.perimeter = cum[-1]
        self.eps = EPS_REL * self.perimeter
        self._paths: PolygonPaths | None = None
        self._dist: dict[tuple[Point, Point], float] = {}

    # -- geometry along the boundary -------------------------------------
    def edge_of(self, arc: float) -> int:
        i = bisect.bisect_right(self.cum, arc) - 1
        return min(max(i, 0), self.n - 1)

    def point(self, arc: float) -> Point:
        if arc >= self.perimeter:
            return self.R[0]
        i = self.edge_of(arc)
        if arc == self.cum[i]:
            return self.R[i]
        a, b = self.R[i], self.R[(i + 1) % self.n]
        t = (arc - self.cum[i]) / self.lengths[i]
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))

    def position(self, arc: float) -> BoundaryPosition:
        """Position on the original (unrotated) ring."""
        if arc >= self.perimeter:
            return BoundaryPosition(self.shift % self.n, 0.0)
        i = self.edge_of(arc)
        t = (arc - self.cum[i]) / self.lengths[i]
        return BoundaryPosition((i + self.shift) % self.n, min(max(t, 0.0), 1.0))

    def arc_of(self, pos: BoundaryPosition) -> float:
        i = (pos.edge_index - self.shift) % self.n
        return self.cum[i] + pos.t * self.lengths[i]

    def corners_between(self, a: float, b: float) -> list[int]:
        """Indices (rotated) of corners with a < arc < b."""
        lo = bisect.bisect_right(self.cum, a)
        hi = bisect.bisect_left(self.cum, b)
        return list(range(lo, min(hi, self.n)))

    def chain(self, a: float, b: float) -> list[Point]:
        return [self.point(a)] + [self.R[j] for j in self.corners_between(a, b)] + [self.point(b)]

    # -- feasibility ------------------------------------------------------
    @property
    def paths(self) -> PolygonPaths:
        if self._paths is None:
            self._paths = PolygonPaths(self.poly)
        return self._paths

    def geodesic(self, p: Point, q: Point) -> float:
        key = (p, q) if p <= q else (q, p)
        d = self._dist.get(key)
        if d is None:
            d = 0.0 if p == q else self.paths.distance(p, q)
            self._dist[key] = d
        return d

    def measure(self, chain: Sequence[Point]) -> float:
        return measure_chain(self.kind, chain, self)

    def feasible(self, chain: Sequence[Point]) -> bool:
        return self.measure(chain) <= self.bound * (1.0 + SLACK)

    def feasible_arc(self, a: float, b: float) -> bool:
        return self.feasible(self.chain(a, b))

    def trivial_len(self, arc: float) -> float:
        i = self.edge_of(arc)
        a, b = self.R[i], self.R[(i + 1) % self.n]
        return trivial_length(self.kind, self.bound, (b[0] - a[0], b[1] - a[1]))

    # -- greedy -----------------------------------------------------------
    def max_end(self, start: float, stop: float) -> float:
        """Largest feasible end of an interval starting at ``start``, capped at ``stop``."""
        cands = [self.cum[j] for j in self.corners_between(start, stop)] + [stop]
        ok = lambda k: self.feasible_arc(start, cands[k])  # noqa: E731
        # exponential search for the last feasible candidate
        last_ok, first_bad = -1, None
        step = 0
        while True:
            k = min(step, len(cands) - 1)
            if ok(k):
                last_ok = k
                if k == len(cands) - 1:
                    return stop
                step = 2 * step + 1
            else:
                first_bad = k
                break
        lo, hi = last_ok, first_bad
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
        if lo == -1:
            return start + self.trivial_len(start)
        # phase 2 on the edge following the last reachable corner: closed form
        # where the measure has one, bisection otherwise
        a, b = cands[lo], cands[hi]
        x = self._phase2_closed(start, a, b)
        if x is not None:
            return x
        while b - a > self.eps:
            m = (a + b) / 2
            if self.feasible_arc(start, m):
                a = m
            else:
                b = m
        return a

    def _phase2_closed(self, start: float, a: float, b: float) -> float | None:
        """Exact end on the edge starting at corner ``a`` for aligned squares and
        straight diameter; None when there is no closed form or it fails the
        feasibility and maximality checks."""
        if self.kind is Kind.ALIGNED_SQUARE:
            solve = phase2_aligned
        elif self.kind is Kind.STRAIGHT_DIAMETER:
            solve = phase2_straight
        else:
            return None
        i = self.edge_of(a)
        t = solve(self.chain(start, a), self.R[i], self.R[(i + 1) % self.n], self.bound)
        x = min(self.cum[i] + t * self.lengths[i], b)
        if x <= a or not self.feasible_arc(start, x):
            return None
        if x + self.eps < b and self.feasible_arc(start, x + self.eps):
            return None
        return x

    def trivial_run(self, start: float, stop: float) -> int:
        """Number of consecutive corner-free intervals from ``start`` (closed form)."""
        nxt = self.corners_between(start, stop)
        reach = self.cum[nxt[0]] if nxt else stop
        L = self.trivial_len(start)
        r = reach - start
        if r <= L * (1.0 + SLACK):
            return 0
        return max(0, math.ceil(r / L - 1.0 - SLACK))

    def intervals(self) -> list[tuple[float, float, bool]]:
        """(start_arc, end_arc, trivial) for the whole greedy cover."""
        out: list[tuple[float, float, bool]] = []
        start, stop = 0.0, self.perimeter
        while start < stop:
            m = self.trivial_run(start, stop)
            if m:
                L = self.trivial_len(start)
                for k in range(m):
                    out.append((start + k * L, start + (k + 1) * L, True))
                start = start + m * L
                continue
            end = self.max_end(start, stop)
            if end <= start:
                raise RuntimeError("greedy made no progress")
            end = self._snap(end)
            out.append((start, end, not self.corners_between(start, end)))
            start = end
        return out

    def count(self) -> int:
        """Same count as :meth:`intervals` without materialising trivial runs."""
        k = 0
        start, stop = 0.0, self.perimeter
        while start < stop:
            m = self.trivial_run(start, stop)
            if m:
                k += m
                start = start + m * self.trivial_len(start)
                continue
            end = self._snap(self.max_end(start, stop))
            k += 1
            start = end
        return k

    def _snap(self, arc: float) -> float:
        """Round an end that lands within 1e-12 of a corner onto the corner."""
        j = bisect.bisect_left(self.cum, arc)
        for c in (j - 1, j):
            if 0 <= c <= self.n and abs(self.cum[c] - arc) <= 1e-12 * self.perimeter:
                return self.cum[c]
        return arc

    def make_interval(self, a: float, b: float, trivial: bool) -> BoundaryInterval:
        return BoundaryInterval(self.position(a), self.position(b), self.chain(a, b), a, b, trivial)


def measure_chain(kind: Kind, chain: Sequence[Point], walker: BoundaryWalker | None = None) -> float:
    if kind is Kind.ALIGNED_SQUARE:
        xs = [p[0] for p in chain]
        ys = [p[1] for p in chain]
        return max(max(xs) - min(xs), max(ys) - min(ys))
    if kind is Kind.ROTATED_SQUARE:
        return min_square_over_rotations(chain)[1]
    if kind is Kind.DISK:
        return min_enclosing_disk(chain).radius
    if kind is Kind.STRAIGHT_DIAMETER:
        return straight_diameter(chain)
    if walker is None:
        raise ValueError("geodesic measures need the polygon")
    if kind is Kind.GEODESIC_DIAMETER:
        pts = list(dict.fromkeys(chain))
        best = 0.0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                best = max(best, walker.geodesic(pts[i], pts[j]))
        return best
    if kind is Kind.PERIMETER:
        return chain_length(chain) + walker.geodesic(chain[0], chain[-1])
    raise ValueError(kind)


def _check_on_boundary(poly: Sequence[Point], chain: Sequence[Point]) -> None:
    n = len(poly)
    for p in chain:
        if not any(on_segment(p, poly[i], poly[(i + 1) % n]) for i in range(n)):
            # tolerate interpolation error
            from .kernel.paths import _point_segment_distance

            scale = max(abs(c) for q in poly for c in q) or 1.0
            if min(_point_segment_distance(p, poly[i], poly[(i + 1) % n]) for i in range(n)) > 1e-9 * scale:
                raise ValueError(f"chain point {p!r} is not on the polygon boundary")


def feasible(constraint: SizeConstraint, chain: Sequence[Point], poly: Sequence[Point]) -> bool:
    """Can one piece of the given kind contain (or, for geodesic kinds, be
    enclosed by) this boundary chain and its shortest path?"""
    _check_on_boundary(poly, chain)
    walker = BoundaryWalker(poly, constraint)
    return walker.feasible(list(chain))


def max_interval(constraint: SizeConstraint, poly: Sequence[Point], start: BoundaryPosition,
                 stop: BoundaryPosition | None = None, *, a0: int | None = None) -> BoundaryInterval:
    walker = BoundaryWalker(poly, constraint, a0)
    a = walker.arc_of(start)
    b = walker.perimeter if stop is None else walker.arc_of(stop)
    if b <= a:
        b += walker.perimeter
    if b > walker.perimeter:
        # rotate so that the interval does not wrap
        walker = BoundaryWalker(poly, constraint, start.edge_index)
        a = walker.arc_of(start)
        b = walker.perimeter if stop is None else walker.arc_of(stop)
        if b <= a:
            b = walker.perimeter
    m = walker.trivial_run(a, b)
    end = a + walker.trivial_len(a) if m else walker._snap(walker.max_end(a, b))
    return walker.make_interval(a, end, not walker.corners_between(a, end))


def estimate_boundary_count(constraint: SizeConstraint, poly: Sequence[Point], a0: int | None = None) -> int:
    return BoundaryWalker(poly, constraint, a0).count()


# -- phase-2 closed forms used as cross-checks -----------------------------

def phase2_aligned(fixed: Sequence[Point], a: Point, b: Point, bound: float) -> float:
    """Largest t in [0, 1] with fixed + [a + t (b - a)] inside an axis-aligned
    square of side ``bound`` (one of the four squares touching the bounding box)."""
    xs = [p[0] for p in fixed]
    ys = [p[1] for p in fixed]
    t = 1.0
    for lo, hi, p0, d in ((min(xs), max(xs), a[0], b[0] - a[0]), (min(ys), max(ys), a[1], b[1] - a[1])):
        if d > 0:
            t = min(t, (lo + bound - p0) / d)
        elif d < 0:
            t = min(t, (hi - bound - p0) / d)
    return max(t, 0.0)


def phase2_straight(fixed: Sequence[Point], a: Point, b: Point, bound: float) -> float:
    """Largest t with every source within ``bound`` of a + t (b - a): the first
    time the farthest source reaches distance ``bound``."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    A = dx * dx + dy * dy
    t = 1.0
    for p in fixed:
        fx, fy = a[0] - p[0], a[1] - p[1]
        B = 2 * (fx * dx + fy * dy)
        C = fx * fx + fy * fy - bound * bound
        disc = B * B - 4 * A * C
        if disc < 0:
            continue
        root = (-B + math.sqrt(disc)) / (2 * A)
        if root >= 0:
            t = min(t, root)
    return max(t, 0.0)


# -- piece construction ------------------------------------------------------

def _refined_ring(walker: BoundaryWalker, cuts: list[float]) -> tuple[list[Point], list[float]]:
    """Boundary ring (rotated to a0) with all interval endpoints inserted."""
    arcs = sorted(set([c for c in cuts if 0 < c < walker.perimeter] + walker.cum[:-1]))
    return [walker.point(a) for a in arcs], arcs


def _ring_path(sub: Subdivision, ids: dict[Point, int], u: Point, v: Point) -> list[int]:
    """Subdivision edges along the boundary segment u -> v."""
    from .kernel.paths import _point_segment_distance

    cur, goal = ids[u], ids[v]
    edges = []
    guard = 0
    while cur != goal:
        best, best_d = None, math.inf
        for h in sub.out[cur]:
            if not sub.edge_mask[h >> 1] & 1:
                continue
            w = sub.points[sub.target(h)]
            if math.dist(w, v) >= math.dist(sub.points[cur], v):
                continue
            d = _point_segment_distance(w, u, v)
            if d < best_d:
                best, best_d = h, d
        if best is None:
            raise RuntimeError("lost the boundary while walking the overlay")
        edges.append(best)
        cur = sub.target(best)
        guard += 1
        if guard > len(sub.origin):
            raise RuntimeError("boundary walk did not terminate")
    return edges


def greedy_boundary(constraint: SizeConstraint, poly: Sequence[Point], a0: int | None = None) -> BoundaryPartition:
    walker = BoundaryWalker(poly, constraint, a0)
    spans = walker.intervals()
    intervals = [walker.make_interval(a, b, t) for a, b, t in spans]
    if constraint.kind.blowup:
        return _blowup_pieces(walker, intervals)
    return _geodesic_pieces(walker, intervals)


def _interval_edges(walker, intervals, sub, ring, arcs, ids) -> tuple[dict[int, int], list[list[int]]]:
    """Map each boundary subdivision edge to its interval (and list them per interval)."""
    per = [[] for _ in intervals]
    starts = [iv.start_arc for iv in intervals]
    edge_interval: dict[int, int] = {}
    m = len(ring)
    for k in range(m):
        a0, a1 = arcs[k], arcs[k + 1] if k + 1 < m else walker.perimeter
        mid = (a0 + a1) / 2
        i = bisect.bisect_right(starts, mid) - 1
        for h in _ring_path(sub, ids, ring[k], ring[(k + 1) % m]):
            edge_interval[h >> 1] = i
            per[i].append(h)
    return edge_interval, per


def _blowup_pieces(walker: BoundaryWalker, intervals: list[BoundaryInterval]) -> BoundaryPartition:
    ring, arcs = _refined_ring(walker, [iv.start_arc for iv in intervals] + [iv.end_arc for iv in intervals])
    hulls: list[list[Point] | None] = []
    rings = [ring]
    hull_bit: dict[int, int] = {}
    for i, iv in enumerate(intervals):
        h = None if iv.trivial else convex_hull(iv.chain)
        if h is not None and len(h) < 3:
            h = None
        hulls.append(h)
        if h is not None:
            hull_bit[i] = len(rings)
            rings.append(h)
    sub = overlay(rings)
    ids = _vertex_ids(sub, ring)
    edge_interval, per = _interval_edges(walker, intervals, sub, ring, arcs, ids)
    owner = [-2] * len(sub.faces)
    for f in sub.bounded_faces():
        if sub.faces[f].mask & 1:
            owner[f] = -1
    pieces = []
    slivers = 0
    for i, iv in enumerate(intervals):
        faces: set[int] = set()
        bit = hull_bit.get(i)
        if bit is not None:
            seeds = {sub.half_face[h] for h in per[i]}
            stack = [f for f in seeds if owner[f] == -1 and (sub.faces[f].mask >> bit) & 1]
            faces.update(stack)
            while stack:
                f = stack.pop()
                for g in sub.neighbors(f):
                    if g not in faces and owner[g] == -1 and (sub.faces[g].mask >> bit) & 1:
                        faces.add(g)
                        stack.append(g)
            for f in faces:
                owner[f] = i
        spikes = [h >> 1 for h in per[i]]
        geom = region_ring(sub, faces, spikes) if (faces or spikes) else [iv.chain[0], iv.chain[-1]]
        if not geom:
            geom = [iv.chain[0], iv.chain[-1]]
        construction = TRIVIAL if bit is None else BLOWUP
        if bit is not None and not faces:
            slivers += 1
        pieces.append(BoundaryPiece(geom, iv, construction, hulls[i]))
    return BoundaryPartition(walker.constraint, walker.poly, intervals, pieces, sub, owner,
                             edge_interval, slivers)


def _vertex_ids(sub: Subdivision, ring: Sequence[Point]) -> dict[Point, int]:
    """Subdivision vertex of each ring point (input points survive exactly
    unless merged into a near neighbour)."""
    index = {q: k for k, q in enumerate(sub.points)}
    out = {}
    for p in ring:
        k = index.get(p)
        if k is None:
            k = min(range(len(sub.points)), key=lambda j: math.dist(p, sub.points[j]))
        out[p] = k
    return out


def build_piece_geodesic(walker: BoundaryWalker, iv: BoundaryInterval) -> list[Point]:
    """Interval chain followed by the reversed shortest path between its ends."""
    chain = list(iv.chain)
    if iv.start_arc == 0.0 and iv.end_arc >= walker.perimeter:
        return list(walker.R)
    if iv.trivial or len(chain) == 2:
        return [chain[0], chain[-1]]
    path = walker.paths.shortest_path(chain[0], chain[-1]).waypoints
    back = list(path[::-1])[1:-1]
    ring = chain + back
    # drop a duplicated closing point
    if ring[0] == ring[-1]:
        ring.pop()
    return ring


def _geodesic_pieces(walker: BoundaryWalker, intervals: list[BoundaryInterval]) -> BoundaryPartition:
    geoms = [build_piece_geodesic(walker, iv) for iv in intervals]
    ring, arcs = _refined_ring(walker, [iv.start_arc for iv in intervals] + [iv.end_arc for iv in intervals])
    rings = [ring] + geoms
    sub = overlay(rings)
    ids = _vertex_ids(sub, ring)
    edge_interval, _ = _interval_edges(walker, intervals, sub, ring, arcs, ids)
    owner = [-2] * len(sub.faces)
    for f in sub.bounded_faces():
        mask = sub.faces[f].mask
        if not mask & 1:
            continue
        owner[f] = -1
        rest = mask >> 1
        if rest:
            owner[f] = (rest & -rest).bit_length() - 1
    pieces = [BoundaryPiece(g, iv, TRIVIAL if len(g) == 2 else SHORTEST_PATH)
              for g, iv in zip(geoms, intervals)]
    return BoundaryPartition(walker.constraint, walker.poly, intervals, pieces, sub, owner, edge_interval)
