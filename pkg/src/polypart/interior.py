"""Interior pieces on a square grid.

The part of P left uncovered by the boundary pieces is cut by a square grid.
Each connected piece of a cell is a field. For the containment kinds every
field is a piece. For the geodesic diameter and perimeter kinds the inward
boundary of the boundary pieces is cut into short fragments, every
non-convex field is cut along geodesics to a fixed anchor, and the resulting
subfields are glued onto fragments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
import shapely

from .boundary import BoundaryPartition
from .kernel.cycles import splice, trace_half_edges, union_ring
from .kernel.paths import geodesic_tree, visibility_matrix
from .kernel.polygon import is_convex, polygon_area
from .kernel.predicates import Point, orient
from .model import COMPLETE, FRAGMENT_UNION, INCOMPLETE, TRIVIAL_FIELD, Kind, Piece

SQRT2 = math.sqrt(2.0)
DEFAULT_SEED = 0x5EED
MAX_REDRAWS = 8

GAMMA = {
    Kind.DISK: SQRT2,
    Kind.STRAIGHT_DIAMETER: 1.0 / SQRT2,
    Kind.ALIGNED_SQUARE: 1.0,
    Kind.ROTATED_SQUARE: 1.0,
    Kind.GEODESIC_DIAMETER: 0.127,
    Kind.PERIMETER: 0.00490,
}
DELTA = {
    # the rounded 0.133 overshoots the budget 2(2+sqrt 2)gamma + delta <= 1
    Kind.GEODESIC_DIAMETER: 1.0 - 2.0 * (2.0 + SQRT2) * 0.127,
    Kind.PERIMETER: 0.00243,
}


class ConfigError(ValueError):
    pass


def grid_constants(kind: Kind, bound: float = 1.0, gamma: float | None = None,
                   delta: float | None = None) -> tuple[float, float | None]:
    """Cell size and fragment length for ``kind``, scaled to ``bound``."""
    if kind.blowup:
        if delta is not None:
            raise ConfigError("delta only applies to geodesic-diameter and perimeter")
        g = GAMMA[kind] * bound if gamma is None else float(gamma)
        if not g > 0:
            raise ConfigError("gamma must be positive")
        return g, None
    g = GAMMA[kind] * bound if gamma is None else float(gamma)
    d = DELTA[kind] * bound if delta is None else float(delta)
    if not (g > 0 and d > 0):
        raise ConfigError("gamma and delta must be positive")
    if kind is Kind.GEODESIC_DIAMETER:
        lhs = 2.0 * (2.0 + SQRT2) * g + d
        if lhs > bound * (1 + 1e-12):
            raise ConfigError(f"2(2+sqrt 2)gamma + delta = {lhs!r} exceeds {bound!r}")
    else:
        if d > g:
            raise ConfigError(f"delta {d!r} exceeds gamma {g!r}")
        lhs = 24.0 * d + 192.0 * g
        if lhs > bound * (1 + 1e-12):
            raise ConfigError(f"24 delta + 192 gamma = {lhs!r} exceeds {bound!r}")
    return g, d


@dataclass(frozen=True)
class Grid:
    origin: Point
    cell: float

    def gx(self, i: int) -> float:
        return self.origin[0] + i * self.cell

    def gy(self, j: int) -> float:
        return self.origin[1] + j * self.cell

    def cell_of(self, p: Point) -> tuple[int, int]:
        return (math.floor((p[0] - self.origin[0]) / self.cell),
                math.floor((p[1] - self.origin[1]) / self.cell))

    def square(self, i: int, j: int) -> list[Point]:
        x0, x1, y0, y1 = self.gx(i), self.gx(i + 1), self.gy(j), self.gy(j + 1)
        return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


@dataclass
class InteriorBoundaryInterval:
    owner: int
    chain: list[Point]
    closed: bool
    half_edges: list[int] = field(default_factory=list, repr=False)

    @property
    def length(self) -> float:
        return sum(math.dist(a, b) for a, b in zip(self.chain, self.chain[1:]))


@dataclass
class Fragment:
    ibi: int
    start_arc: float
    end_arc: float
    chain: list[Point] = field(default_factory=list)

    @property
    def length(self) -> float:
        return self.end_arc - self.start_arc


@dataclass
class Field:
    geometry: list[Point]
    cell: tuple[int, int]
    trivial: bool
    # label of edge k -> k+1: ("c", side) on the cell boundary, ("f", fragment)
    # or ("o", owner) on a boundary piece
    labels: list[tuple[str, int]] = field(default_factory=list, repr=False)

    @property
    def area(self) -> float:
        return polygon_area(self.geometry)


@dataclass
class Subfield:
    geometry: list[Point]
    cls: str  # "edge" or "fragment"
    fragment: int
    anchor: Point
    cell: tuple[int, int]


@dataclass(frozen=True)
class CellBlock:
    """Cells i0 <= i < i1, j0 <= j < j1, all complete."""

    i0: int
    i1: int
    j0: int
    j1: int

    @property
    def count(self) -> int:
        return (self.i1 - self.i0) * (self.j1 - self.j0)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i in range(self.i0, self.i1):
            for j in range(self.j0, self.j1):
                yield i, j


@dataclass
class InteriorPartition:
    kind: Kind
    grid: Grid | None
    delta: float | None
    ibis: list[InteriorBoundaryInterval]
    fragments: list[Fragment]
    fields: list[Field]
    subfields: list[Subfield]
    pieces: list[Piece]  # every interior piece except complete cells
    blocks: list[CellBlock]
    redraws: int = 0

    @property
    def complete_count(self) -> int:
        return sum(b.count for b in self.blocks)

    def __len__(self) -> int:
        return len(self.pieces) + self.complete_count

    def complete_pieces(self) -> Iterator[Piece]:
        for b in self.blocks:
            for i, j in b.cells():
                yield Piece(self.grid.square(i, j), COMPLETE, {"cell": (i, j)})

    def all_pieces(self) -> list[Piece]:
        return list(self.complete_pieces()) + self.pieces


# -- interior boundary intervals and fragments -------------------------------

def _uncovered_half_edges(bp: BoundaryPartition) -> dict[int, int]:
    """Half-edges with uncovered space on the left, mapped to the boundary piece on the right."""
    sub, owner = bp.subdivision, bp.face_owner
    out = {}
    for h in range(len(sub.origin)):
        if owner[sub.half_face[h]] != -1:
            continue
        other = owner[sub.half_face[h ^ 1]]
        if other == -1:
            continue
        out[h] = other if other >= 0 else bp.edge_interval[h >> 1]
    return out


def compute_ibis(bp: BoundaryPartition) -> list[InteriorBoundaryInterval]:
    """Maximal runs of the uncovered region's boundary along one boundary piece."""
    if bp.subdivision is None:
        return []
    sub = bp.subdivision
    lab = _uncovered_half_edges(bp)
    pts = sub.points
    out = []
    for cyc in trace_half_edges(sub, set(lab)):
        owners = [lab[h] for h in cyc]
        m = len(cyc)
        if all(o == owners[0] for o in owners):
            k = min(range(m), key=lambda i: pts[sub.origin[cyc[i]]])
            cyc = cyc[k:] + cyc[:k]
            runs = [cyc]
            closed = True
        else:
            k = next(i for i in range(m) if owners[i] != owners[i - 1])
            cyc = cyc[k:] + cyc[:k]
            runs = [[cyc[0]]]
            for h in cyc[1:]:
                if lab[h] == lab[runs[-1][-1]]:
                    runs[-1].append(h)
                else:
                    runs.append([h])
            closed = False
        for run in runs:
            chain = [pts[sub.origin[h]] for h in run] + [pts[sub.origin[run[-1] ^ 1]]]
            out.append(InteriorBoundaryInterval(lab[run[0]], chain, closed, run))
    return out


def fragment_count(length: float, delta: float) -> int:
    return max(1, math.ceil(length / delta - 1e-12))


def split_fragments(ibis: Sequence[InteriorBoundaryInterval], delta: float) -> list[Fragment]:
    """Cut every interval after each prefix of length ``delta``."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    out = []
    for k, ibi in enumerate(ibis):
        L = ibi.length
        m = fragment_count(L, delta)
        cuts = [j * delta for j in range(m)] + [L]
        for a, b in zip(cuts, cuts[1:]):
            out.append(Fragment(k, a, b, _subchain(ibi.chain, a, b)))
    return out


def _subchain(chain: Sequence[Point], a: float, b: float) -> list[Point]:
    out = []
    s = 0.0
    for p, q in zip(chain, chain[1:]):
        L = math.dist(p, q)
        e = s + L
        if e >= a and s <= b and L > 0:
            t0 = max(0.0, (a - s) / L)
            t1 = min(1.0, (b - s) / L)
            for t in (t0, t1):
                x = p if t == 0.0 else q if t == 1.0 else (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
                if not out or out[-1] != x:
                    out.append(x)
        s = e
    return out


# -- uncovered region, refined at grid lines and fragment ends ----------------

@dataclass
class _Region:
    loops: list[list[Point]]  # counterclockwise outer loops and clockwise holes
    seg_label: dict[tuple[Point, Point], tuple[str, int]]
    frag_edges: dict[int, list[tuple[Point, Point]]]
    degenerate: bool = False


def _loop_pieces(bp: BoundaryPartition, ibis, delta):
    """Per uncovered boundary loop: list of (p, q, label, arc cuts) for original edges."""
    sub = bp.subdivision
    pts = sub.points
    info: dict[int, tuple[int, float]] = {}  # half-edge -> (ibi, arc at origin)
    for k, ibi in enumerate(ibis):
        s = 0.0
        for h in ibi.half_edges:
            info[h] = (k, s)
            s += math.dist(pts[sub.origin[h]], pts[sub.origin[h ^ 1]])
    frag_base = []
    total = 0
    for ibi in ibis:
        frag_base.append(total)
        if delta is not None:
            total += fragment_count(ibi.length, delta)
    loops = []
    for ibi_run in _ibi_loops(bp, ibis):
        segs = []
        for h in ibi_run:
            k, s = info[h]
            p, q = pts[sub.origin[h]], pts[sub.origin[h ^ 1]]
            segs.append((p, q, k, s))
        loops.append(segs)
    return loops, frag_base


def _ibi_loops(bp: BoundaryPartition, ibis) -> list[list[int]]:
    """Half-edge loops of the uncovered region's boundary."""
    sub = bp.subdivision
    hs = set()
    for ibi in ibis:
        hs.update(ibi.half_edges)
    return trace_half_edges(sub, hs)


def _off_line(v: float, o: float, c: float) -> float:
    r = (v - o) / c
    return abs(r - round(r)) * c


def _build_region(bp, ibis, delta, grid: Grid, tol: float = 0.0) -> _Region:
    """Uncovered boundary loops with grid crossings and fragment ends inserted.

    The region is flagged degenerate when a vertex lies within ``tol`` of a
    grid line or a crossing lies within ``tol`` of a cell corner.
    """
    loops_in, frag_base = _loop_pieces(bp, ibis, delta)
    g = grid
    degenerate = False
    loops: list[list[Point]] = []
    seg_label: dict[tuple[Point, Point], tuple[str, int]] = {}
    frag_edges: dict[int, list[tuple[Point, Point]]] = {}
    for segs in loops_in:
        ring: list[Point] = []
        for p, q, k, s in segs:
            L = math.dist(p, q)
            ts = {0.0: p}
            if min(_off_line(p[0], g.origin[0], g.cell), _off_line(p[1], g.origin[1], g.cell)) <= tol:
                degenerate = True
            # grid crossings, placed exactly on their grid line
            for axis in (0, 1):
                lo, hi = sorted((p[axis], q[axis]))
                if hi == lo:
                    continue
                o, c = g.origin[axis], g.cell
                for i in range(math.floor((lo - o) / c) + 1, math.ceil((hi - o) / c)):
                    v = o + i * c
                    if not lo < v < hi:
                        continue
                    t = (v - p[axis]) / (q[axis] - p[axis])
                    w = p[1 - axis] + t * (q[1 - axis] - p[1 - axis])
                    if _off_line(w, g.origin[1 - axis], c) <= tol:
                        degenerate = True
                    ts[t] = (v, w) if axis == 0 else (w, v)
            if delta is not None and L > 0:
                m = fragment_count(ibis[k].length, delta)
                j = math.floor(s / delta) + 1
                while j < m and j * delta < s + L:
                    t = (j * delta - s) / L
                    if 0 < t < 1:
                        x = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
                        if min(_off_line(x[0], g.origin[0], g.cell), _off_line(x[1], g.origin[1], g.cell)) <= tol:
                            degenerate = True
                        ts.setdefault(t, (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
                    j += 1
            order = sorted(ts)
            chain = [ts[t] for t in order] + [q]
            for t0, t1, a, b in zip(order, order[1:] + [1.0], chain, chain[1:]):
                if a == b:
                    continue
                if delta is None:
                    lab = ("o", ibis[k].owner)
                else:
                    arc = s + (t0 + t1) / 2 * L
                    fid = frag_base[k] + min(int(arc // delta), fragment_count(ibis[k].length, delta) - 1)
                    lab = ("f", fid)
                    frag_edges.setdefault(fid, []).append((a, b))
                seg_label[(a, b)] = lab
                ring.append(a)
        loops.append(ring)
    return _Region(loops, seg_label, frag_edges, degenerate)


# -- fields --------------------------------------------------------------------

def _polygon_rings(geom) -> list[list[Point]]:
    """Counterclockwise weakly simple rings, one per polygonal component."""
    out = []
    for poly in shapely.get_parts(geom):
        if not isinstance(poly, shapely.Polygon) or poly.is_empty or poly.area <= 0:
            continue
        shell = [tuple(map(float, c)) for c in poly.exterior.coords[:-1]]
        if polygon_area(shell) < 0:
            shell.reverse()
        holes = []
        for hole in poly.interiors:
            h = [tuple(map(float, c)) for c in hole.coords[:-1]]
            if polygon_area(h) > 0:
                h.reverse()
            holes.append(h)
        out.append(_merge_holes(shell, holes))
    return out


def _merge_holes(shell: list[Point], holes: list[list[Point]]) -> list[Point]:
    if not holes:
        return shell
    ids: dict[Point, int] = {}
    pts: list[Point] = []

    def pid(p: Point) -> int:
        k = ids.get(p)
        if k is None:
            k = ids[p] = len(pts)
            pts.append(p)
        return k

    cycles = [[pid(p) for p in shell]] + [[pid(p) for p in h] for h in holes]
    try:
        return [pts[v] for v in splice(cycles)]
    except ValueError:
        # a hole touching nothing: bridge it to the closest shell vertex
        ring = list(shell)
        for h in holes:
            i, j = min(((i, j) for i in range(len(ring)) for j in range(len(h))),
                       key=lambda ij: math.dist(ring[ij[0]], h[ij[1]]))
            rot = h[j:] + h[:j]
            ring = ring[:i + 1] + rot + [rot[0], ring[i]] + ring[i + 1:]
        return ring


def _clip_cells(U, grid: Grid, bounds) -> tuple[list[tuple[tuple[int, int], object]], list[CellBlock]]:
    """Split ``U`` into cells by recursive halving; full blocks stay lazy."""
    x0, y0, x1, y1 = bounds
    i0, j0 = grid.cell_of((x0, y0))
    i1, j1 = grid.cell_of((x1, y1))
    parts: list[tuple[tuple[int, int], object]] = []
    blocks: list[CellBlock] = []
    stack = [(U, i0, i1 + 1, j0, j1 + 1)]
    while stack:
        geom, a0, a1, b0, b1 = stack.pop()
        box = shapely.box(grid.gx(a0), grid.gy(b0), grid.gx(a1), grid.gy(b1))
        part = shapely.intersection(geom, box)
        if part.is_empty or part.area <= 0:
            continue
        if (isinstance(part, shapely.Polygon) and not part.interiors
                and part.area >= box.area * (1 - 1e-12)):
            blocks.append(CellBlock(a0, a1, b0, b1))
            continue
        if a1 - a0 == 1 and b1 - b0 == 1:
            parts.append(((a0, b0), part))
            continue
        if a1 - a0 >= b1 - b0:
            m = (a0 + a1) // 2
            stack.append((part, m, a1, b0, b1))
            stack.append((part, a0, m, b0, b1))
        else:
            m = (b0 + b1) // 2
            stack.append((part, a0, a1, m, b1))
            stack.append((part, a0, a1, b0, m))
    parts.sort(key=lambda cp: cp[0])
    blocks.sort(key=lambda b: (b.i0, b.j0))
    return parts, blocks


def _side(grid: Grid, cell: tuple[int, int], a: Point, b: Point) -> int | None:
    i, j = cell
    x0, x1, y0, y1 = grid.gx(i), grid.gx(i + 1), grid.gy(j), grid.gy(j + 1)
    if a[1] == b[1] == y0:
        return 0
    if a[0] == b[0] == x1:
        return 1
    if a[1] == b[1] == y1:
        return 2
    if a[0] == b[0] == x0:
        return 3
    return None


def _label_field(ring: list[Point], cell, grid: Grid, region: _Region) -> list[tuple[str, int]]:
    labels = []
    n = len(ring)
    for k in range(n):
        a, b = ring[k], ring[(k + 1) % n]
        s = _side(grid, cell, a, b)
        if s is not None:
            labels.append(("c", s))
            continue
        lab = region.seg_label.get((a, b))
        if lab is None:
            lab = _nearest_label(region, a, b)
        labels.append(lab)
    return labels


def _nearest_label(region: _Region, a: Point, b: Point) -> tuple[str, int]:
    m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
    best, best_d = None, math.inf
    for (p, q), lab in region.seg_label.items():
        dx, dy = q[0] - p[0], q[1] - p[1]
        L2 = dx * dx + dy * dy
        t = 0.0 if L2 == 0 else min(1.0, max(0.0, ((m[0] - p[0]) * dx + (m[1] - p[1]) * dy) / L2))
        d = math.hypot(p[0] + t * dx - m[0], p[1] + t * dy - m[1])
        if d < best_d:
            best, best_d = lab, d
    if best is None:
        raise RuntimeError("field edge matches no uncovered boundary edge")
    return best


def compute_fields(bp: BoundaryPartition, grid: Grid, ibis=None, delta: float | None = None,
                   region: _Region | None = None) -> tuple[list[Field], list[CellBlock]]:
    """Fields (touched cells) and blocks of complete cells."""
    if ibis is None:
        ibis = compute_ibis(bp)
    if not ibis:
        return [], []
    if region is None:
        region = _build_region(bp, ibis, delta, grid)
    outer = [shapely.Polygon(r) for r in region.loops if polygon_area(r) > 0]
    holes = [shapely.Polygon(r[::-1]) for r in region.loops if polygon_area(r) < 0]
    U = shapely.union_all(outer)
    if holes:
        U = shapely.difference(U, shapely.union_all(holes))
    parts, blocks = _clip_cells(U, grid, U.bounds)
    fields = []
    for cell, geom in parts:
        for ring in _polygon_rings(geom):
            labels = _label_field(ring, cell, grid, region)
            fields.append(Field(ring, cell, is_convex(ring), labels))
    return fields, blocks


def interior_pieces_simple(fields: Sequence[Field]) -> list[Piece]:
    """Each field is a piece; edge pieces have a cell side on their boundary."""
    out = []
    for f in fields:
        edge = any(lab[0] == "c" for lab in f.labels)
        out.append(Piece(f.geometry, INCOMPLETE, {"cell": f.cell, "type": "edge" if edge else "chip"}))
    return out


# -- subfields -------------------------------------------------------------------

def split_field(fld: Field) -> list[Subfield]:
    """Cut a field along geodesics from every label change to its anchor."""
    ring, lab = fld.geometry, fld.labels
    n = len(ring)
    anchor = min(range(n), key=lambda k: ring[k])
    frag_labels = [x for x in lab if x[0] == "f"]
    if not frag_labels:
        return []
    cuts = sorted({k for k in range(n) if lab[k - 1] != lab[k]} | {anchor})
    if len(cuts) == 1:
        return [Subfield(list(ring), "fragment", lab[0][1], ring[anchor], fld.cell)]
    W = visibility_matrix(ring)
    pred, _ = geodesic_tree(ring, anchor, W)

    def to_anchor(k: int) -> list[int]:
        path = [k]
        while path[-1] != anchor:
            nxt = pred[path[-1]]
            if nxt < 0:
                raise RuntimeError("field vertex unreachable from the anchor")
            path.append(nxt)
        return path

    out = []
    for idx, ca in enumerate(cuts):
        cb = cuts[(idx + 1) % len(cuts)]
        arc = [ca]
        k = ca
        while k != cb:
            k = (k + 1) % n
            arc.append(k)
        pa, pb = to_anchor(ca), to_anchor(cb)
        on_a = {v: i for i, v in enumerate(pa)}
        iq = next(i for i, v in enumerate(pb) if v in on_a)
        q = pb[iq]
        ids = arc + pb[1:iq + 1] + pa[:on_a[q]][::-1][:-1]
        geom = []
        for v in ids:
            if not geom or geom[-1] != ring[v]:
                geom.append(ring[v])
        while len(geom) > 1 and geom[0] == geom[-1]:
            geom.pop()
        kind, val = lab[ca]
        if kind == "f":
            out.append(Subfield(geom, "fragment", val, ring[anchor], fld.cell))
        else:
            k = cb
            while lab[k][0] != "f":
                k = (k + 1) % n
            out.append(Subfield(geom, "edge", lab[k][1], ring[anchor], fld.cell))
    return out


def concave_chain_count(ring: Sequence[Point]) -> int:
    """Number of maximal chains without left turns in a closed ring."""
    n = len(ring)
    turns = [orient(ring[k - 1], ring[k], ring[(k + 1) % n]) for k in range(n)]
    lefts = sum(1 for t in turns if t > 0)
    return max(1, lefts)


def assemble_interior_pieces(fields: Sequence[Field], subfields: Sequence[Subfield],
                             frag_edges: dict[int, list[tuple[Point, Point]]] | None = None) -> list[Piece]:
    """Trivial fields pass through; subfields are glued per fragment."""
    out = [Piece(f.geometry, TRIVIAL_FIELD, {"cell": f.cell}) for f in fields if f.trivial]
    groups: dict[int, list[Subfield]] = {}
    for s in subfields:
        groups.setdefault(s.fragment, []).append(s)
    frag_edges = frag_edges or {}
    for fid in sorted(groups):
        ids: dict[Point, int] = {}
        pts: list[Point] = []

        def pid(p: Point) -> int:
            k = ids.get(p)
            if k is None:
                k = ids[p] = len(pts)
                pts.append(p)
            return k

        rings = [[pid(p) for p in s.geometry] for s in groups[fid]]
        spikes = [(pid(a), pid(b)) for a, b in frag_edges.get(fid, [])]
        ring = union_ring(pts, rings, spikes)
        cells = sorted({s.cell for s in groups[fid]})
        out.append(Piece([pts[v] for v in ring], FRAGMENT_UNION,
                         {"fragment": fid, "subfields": len(groups[fid]), "cells": cells}))
    return out


# -- driver ------------------------------------------------------------------------

def interior_partition(bp: BoundaryPartition, *, gamma: float | None = None, delta: float | None = None,
                       seed: int = DEFAULT_SEED) -> InteriorPartition:
    kind = bp.constraint.kind
    g, d = grid_constants(kind, bp.constraint.bound, gamma, delta)
    ibis = compute_ibis(bp)
    fragments = split_fragments(ibis, d) if d is not None else []
    if not ibis:
        return InteriorPartition(kind, None, d, ibis, fragments, [], [], [], [])
    rng = np.random.default_rng(seed)
    xs = [p[0] for p in bp.polygon]
    ys = [p[1] for p in bp.polygon]
    scale = max(max(xs) - min(xs), max(ys) - min(ys), g)
    tol = 1e-9 * min(g, scale)
    for attempt in range(MAX_REDRAWS):
        ox, oy = rng.random(2) * g
        grid = Grid((float(ox), float(oy)), g)
        region = _build_region(bp, ibis, d, grid, tol)
        if not region.degenerate:
            break
    else:
        raise RuntimeError(f"grid offset still degenerate after {MAX_REDRAWS} draws")
    fields, blocks = compute_fields(bp, grid, ibis, d, region)
    if kind.blowup:
        pieces = interior_pieces_simple(fields)
        return InteriorPartition(kind, grid, d, ibis, fragments, fields, [], pieces, blocks, attempt)
    subfields = []
    for f in fields:
        if not f.trivial:
            subs = split_field(f)
            if not subs:
                f.trivial = True
            subfields.extend(subs)
    pieces = assemble_interior_pieces(fields, subfields, region.frag_edges)
    return InteriorPartition(kind, grid, d, ibis, fragments, fields, subfields, pieces, blocks, attempt)
