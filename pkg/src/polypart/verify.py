"""Independent certification of a partition from piece polygons alone.

Weakly simple pieces are turned into regions by winding number: the ring's
linework is noded and polygonized, and the faces with winding number one
are kept. Coverage, overlap and containment are then GEOS area computations.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
import shapely

from .kernel.arrangement import overlay
from .kernel.enclosing import min_enclosing_disk
from .kernel.hull import min_square_over_rotations, straight_diameter
from .kernel.paths import geodesic_diameter
from .kernel.polygon import perimeter, polygon_area
from .kernel.predicates import Point
from .model import Kind, Piece

TOL_SIZE = 1e-6
TOL_AREA_REL = 1e-9
ZERO_AREA = 1e-12  # relative to perimeter squared: rounding noise of a flat ring

# approximation factors of the full pipelines, checked against explicit upper bounds
FACTOR = {
    Kind.ALIGNED_SQUARE: 13.0,
    Kind.ROTATED_SQUARE: 21.0,
    Kind.DISK: 20.0 + math.pi / 2,
    Kind.STRAIGHT_DIAMETER: 20.0 + math.pi / 2,
    Kind.GEODESIC_DIAMETER: 72.0,
    Kind.PERIMETER: 3728.0,
}


@dataclass
class SizeCheck:
    index: int
    cls: str
    measured: float
    passed: bool


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    passed: bool
    enforced: bool = True


@dataclass
class VerificationReport:
    polygon_area: float
    tol_area: float
    covered_area_residual: float
    max_pairwise_overlap: float
    outside_area: float
    sizes: list[SizeCheck] = field(default_factory=list)
    counts: dict[str, int] = field(default_factory=dict)
    lower_bound: int | None = None
    bound_checks: list[BoundCheck] = field(default_factory=list)
    malformed: list[tuple[int, str]] = field(default_factory=list)
    tol_size: float = TOL_SIZE

    @property
    def coverage_ok(self) -> bool:
        return (self.covered_area_residual <= self.tol_area and self.max_pairwise_overlap <= self.tol_area
                and self.outside_area <= self.tol_area and not self.malformed)

    @property
    def sizes_ok(self) -> bool:
        return all(s.passed for s in self.sizes)

    @property
    def passed(self) -> bool:
        return self.coverage_ok and self.sizes_ok and all(b.passed for b in self.bound_checks if b.enforced)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "polygon_area": self.polygon_area,
            "tol_area": self.tol_area,
            "tol_size": self.tol_size,
            "covered_area_residual": self.covered_area_residual,
            "max_pairwise_overlap": self.max_pairwise_overlap,
            "outside_area": self.outside_area,
            "counts": dict(self.counts),
            "lower_bound": self.lower_bound,
            "max_measured_size": max((s.measured for s in self.sizes), default=None),
            "size_failures": [asdict(s) for s in self.sizes if not s.passed],
            "bound_checks": [asdict(b) for b in self.bound_checks],
            "malformed": [list(m) for m in self.malformed],
        }


# -- regions -------------------------------------------------------------------

def _clean(ring: Sequence[Point]) -> list[Point]:
    out = []
    for p in ring:
        p = (float(p[0]), float(p[1]))
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def winding_numbers(ring: Sequence[Point], qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    pts = np.asarray(ring, dtype=float)
    ax, ay = pts[:, 0][None, :], pts[:, 1][None, :]
    bx, by = np.roll(pts[:, 0], -1)[None, :], np.roll(pts[:, 1], -1)[None, :]
    X, Y = np.asarray(qx)[:, None], np.asarray(qy)[:, None]
    side = (bx - ax) * (Y - ay) - (by - ay) * (X - ax)
    up = (ay <= Y) & (by > Y) & (side > 0)
    down = (ay > Y) & (by <= Y) & (side < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def piece_region(ring: Sequence[Point]):
    """Region of a weakly simple counterclockwise ring; raises ValueError if the
    ring winds negatively or more than once anywhere."""
    pts = _clean(ring)
    if len(pts) < 3:
        return shapely.Polygon()
    a = polygon_area(pts)
    if abs(a) <= ZERO_AREA * perimeter(pts) ** 2:
        return shapely.Polygon()
    lr = shapely.LinearRing(pts)
    if lr.is_simple:
        if a < 0:
            raise ValueError("ring is clockwise")
        return shapely.Polygon(pts)
    lines = shapely.unary_union(shapely.LineString(pts + [pts[0]]))
    faces = list(shapely.get_parts(shapely.polygonize(shapely.get_parts(lines))))
    if not faces:
        return shapely.Polygon()
    # flat faces along near-collinear chords carry no area and a noisy winding sign
    eps = ZERO_AREA * perimeter(pts) ** 2
    faces = [f for f in faces if f.area > eps]
    if not faces:
        return shapely.Polygon()
    reps = [f.point_on_surface() for f in faces]
    w = winding_numbers(pts, np.array([p.x for p in reps]), np.array([p.y for p in reps]))
    if (w < 0).any() or (w > 1).any():
        raise ValueError("ring winds around some point more than once or negatively")
    keep = [f for f, k in zip(faces, w) if k == 1]
    return shapely.union_all(keep) if keep else shapely.Polygon()


def _overlay_overlap(a: list[Point], b: list[Point]) -> float:
    """Area inside both rings, from an exact-predicate arrangement of the two."""
    sub = overlay([a, b])
    return math.fsum(sub.faces[f].area for f in sub.bounded_faces() if sub.faces[f].mask == 3)


def _rectangle(pts: list[Point]) -> tuple[float, float, float, float] | None:
    if len(pts) != 4:
        return None
    xs = sorted({p[0] for p in pts})
    ys = sorted({p[1] for p in pts})
    if len(xs) != 2 or len(ys) != 2:
        return None
    for k in range(4):
        a, b = pts[k], pts[(k + 1) % 4]
        if a[0] != b[0] and a[1] != b[1]:
            return None
    return xs[0], ys[0], xs[1], ys[1]


# -- checks --------------------------------------------------------------------

def check_partition(poly: Sequence[Point], pieces: Sequence[Sequence[Point]],
                    tol_area: float | None = None) -> VerificationReport:
    """Coverage residual, largest pairwise overlap and area outside ``poly``."""
    A = polygon_area(poly)
    tol = TOL_AREA_REL * A if tol_area is None else tol_area
    malformed = []
    regions = []
    rects = []
    total = 0.0
    for i, ring in enumerate(pieces):
        pts = _clean(ring)
        total += polygon_area(pts) if len(pts) >= 3 else 0.0
        rects.append(_rectangle(pts))
        try:
            regions.append(piece_region(pts))
        except (ValueError, shapely.errors.GEOSException) as exc:
            malformed.append((i, str(exc)))
            regions.append(shapely.Polygon())
    residual = abs(A - total)
    geoms = np.array(regions, dtype=object)
    tree = shapely.STRtree(geoms)
    ii, jj = tree.query(geoms, predicate="intersects")
    m = ii < jj
    ii, jj = ii[m], jj[m]
    overlap = 0.0
    if len(ii):
        both = np.array([rects[i] is not None and rects[j] is not None for i, j in zip(ii, jj)], dtype=bool)
        if both.any():
            R = np.array([rects[i] for i in ii[both]])
            S = np.array([rects[j] for j in jj[both]])
            w = np.clip(np.minimum(R[:, 2], S[:, 2]) - np.maximum(R[:, 0], S[:, 0]), 0, None)
            h = np.clip(np.minimum(R[:, 3], S[:, 3]) - np.maximum(R[:, 1], S[:, 1]), 0, None)
            overlap = max(overlap, float((w * h).max()))
        rest = ~both
        if rest.any():
            ri, rj = ii[rest], jj[rest]
            areas = shapely.area(shapely.intersection(geoms[ri], geoms[rj]))
            # GEOS overlay can misjudge a vertex lying within rounding of the
            # other piece's edge; re-measure flagged pairs with the kernel overlay
            for k in np.nonzero(areas > tol)[0]:
                areas[k] = _overlay_overlap(_clean(pieces[ri[k]]), _clean(pieces[rj[k]]))
            overlap = max(overlap, float(areas.max()))
    P = shapely.Polygon(_clean(poly))
    union = shapely.union_all(geoms) if len(geoms) else shapely.Polygon()
    outside = float(shapely.difference(union, P).area)
    return VerificationReport(A, tol, residual, overlap, outside, malformed=malformed)


def measure(kind: Kind | str, ring: Sequence[Point]) -> float:
    kind = Kind.parse(kind) if isinstance(kind, str) else kind
    pts = _clean(ring)
    if not pts:
        return 0.0
    if kind is Kind.ALIGNED_SQUARE:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return max(max(xs) - min(xs), max(ys) - min(ys))
    if kind is Kind.ROTATED_SQUARE:
        return min_square_over_rotations(pts)[1]
    if kind is Kind.DISK:
        return min_enclosing_disk(pts).radius
    if kind is Kind.STRAIGHT_DIAMETER:
        return straight_diameter(pts) if len(pts) > 1 else 0.0
    if kind is Kind.GEODESIC_DIAMETER:
        return geodesic_diameter(pts)
    if kind is Kind.PERIMETER:
        return perimeter(pts) if len(pts) > 2 else 2.0 * math.dist(pts[0], pts[-1])
    raise ValueError(kind)


def check_size(kind: Kind | str, piece: Sequence[Point], bound: float = 1.0,
               tol_size: float = TOL_SIZE) -> tuple[float, bool]:
    m = measure(kind, piece)
    return m, m <= bound + tol_size


def lower_bound(kind: Kind | str, poly: Sequence[Point], bound: float = 1.0) -> int:
    """Area-based lower bound on the optimum piece count."""
    kind = Kind.parse(kind) if isinstance(kind, str) else kind
    a = polygon_area(poly) / (bound * bound)
    x = {
        Kind.DISK: a / math.pi,
        Kind.STRAIGHT_DIAMETER: 4.0 * a / math.pi,
        Kind.GEODESIC_DIAMETER: 4.0 * a / math.pi,
        Kind.ALIGNED_SQUARE: a,
        Kind.ROTATED_SQUARE: a,
        Kind.PERIMETER: 4.0 * math.pi * a,
    }[kind]
    return max(1, math.ceil(x * (1 - 1e-12)))


def check_structure(boundary, interior, kind: Kind, upper_bound: int | None = None,
                    total: int | None = None) -> list[BoundCheck]:
    """Count surrogates of the approximation analysis.

    ``upper_bound`` is the size of any explicit valid partition, so it bounds
    the optimum from above.
    """
    out = []
    k = len(boundary.pieces)
    if total is None:
        total = k + (len(interior) if interior is not None else 0)
    if upper_bound is not None:
        out.append(BoundCheck("boundary <= 2U - 1", k, 2 * upper_bound - 1, k <= 2 * upper_bound - 1))
        f = FACTOR[kind]
        out.append(BoundCheck(f"total <= {f:g} U", total, f * upper_bound, total <= f * upper_bound))
    if interior is None:
        return out
    n_ibi = len(interior.ibis)
    if k >= 3:
        out.append(BoundCheck("ibis <= 3|Q_b| - 6", n_ibi, 3 * k - 6, n_ibi <= 3 * k - 6))
    if interior.delta is not None:
        L = sum(i.length for i in interior.ibis)
        rhs = n_ibi + L / interior.delta
        nf = len(interior.fragments)
        out.append(BoundCheck("fragments <= ibis + sum(L)/delta", nf, rhs, nf <= rhs * (1 + 1e-12)))
        if kind is Kind.GEODESIC_DIAMETER and interior.grid is not None:
            cap = (2.0 + math.sqrt(2.0)) * interior.grid.cell
            worst = max((geodesic_diameter(s.geometry) for s in interior.subfields if len(s.geometry) > 1),
                        default=0.0)
            out.append(BoundCheck("subfield diameter <= (2+sqrt 2) gamma", worst, cap, worst <= cap + TOL_SIZE))
        if interior.subfields:
            from .interior import concave_chain_count

            worst = max(concave_chain_count(s.geometry) for s in interior.subfields if len(s.geometry) > 2) \
                if any(len(s.geometry) > 2 for s in interior.subfields) else 0
            out.append(BoundCheck("concave chains per subfield <= 3", worst, 3, worst <= 3, enforced=False))
            per: dict[tuple, int] = {}
            for s in interior.subfields:
                key = (s.fragment, s.cell)
                per[key] = per.get(key, 0) + 1
            worst = max(per.values())
            out.append(BoundCheck("subfields per fragment and cell <= 6", worst, 6, worst <= 6, enforced=False))
    return out


def verify_pieces(poly: Sequence[Point], pieces: Sequence[Piece], kind: Kind | str | None, *, bound: float = 1.0,
                  tol_area: float | None = None, tol_size: float = TOL_SIZE) -> VerificationReport:
    """Coverage plus per-piece size checks (skipped for area partitions)."""
    if isinstance(kind, str):
        kind = None if kind == "area" else Kind.parse(kind)
    rep = check_partition(poly, [p.vertices for p in pieces], tol_area)
    rep.tol_size = tol_size
    counts: dict[str, int] = {}
    for p in pieces:
        counts[p.cls] = counts.get(p.cls, 0) + 1
    rep.counts = counts
    if kind is not None:
        rep.lower_bound = lower_bound(kind, poly, bound)
        for i, p in enumerate(pieces):
            m, ok = check_size(kind, p.vertices, bound, tol_size)
            rep.sizes.append(SizeCheck(i, p.cls, m, ok))
    return rep
