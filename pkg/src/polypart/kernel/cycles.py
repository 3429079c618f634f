"""Boundary tracing of face unions in a subdivision.

A region is a set of bounded faces plus optional dangling edges (zero-width
spikes). Its boundary walk keeps the region on the left and, at every
vertex, leaves along the first admissible half-edge clockwise from the one it
arrived on. Walks that meet at a pinch vertex are spliced into one weakly
simple ring.
"""

from __future__ import annotations

from typing import Iterable

from .arrangement import Subdivision
from .polygon import polygon_area
from .predicates import Point


def boundary_half_edges(sub: Subdivision, faces: set[int], spikes: Iterable[int] = ()) -> set[int]:
    hs = set()
    for f in faces:
        for h in sub.face_half_edges(f):
            if sub.half_face[h ^ 1] not in faces:
                hs.add(h)
    for e in spikes:
        h = 2 * e
        if sub.half_face[h] in faces or sub.half_face[h + 1] in faces:
            continue
        hs.add(h)
        hs.add(h + 1)
    return hs


def trace_cycles(sub: Subdivision, hs: set[int]) -> list[list[int]]:
    """Closed walks (as vertex-id lists) through the half-edge set ``hs``."""
    return [[sub.origin[h] for h in cyc] for cyc in trace_half_edges(sub, hs)]


def trace_half_edges(sub: Subdivision, hs: set[int]) -> list[list[int]]:
    """Closed walks through ``hs`` as half-edge lists.

    At each vertex the walk leaves along the first unused half-edge clockwise
    from the reversed arrival, and a walk closes as soon as it is back at its
    first vertex. ``hs`` must be balanced (as many arrivals as departures at
    every vertex), which holds for region boundaries with doubled spikes.
    """
    left = set(hs)
    cycles = []
    while left:
        h = min(left)
        first = sub.origin[h]
        walk = []
        while True:
            left.discard(h)
            walk.append(h)
            v = sub.origin[h ^ 1]
            if v == first:
                break
            ring = sub.out[v]
            k = sub._pos[h ^ 1]
            m = len(ring)
            nxt = None
            for step in range(1, m + 1):
                g = ring[(k - step) % m]
                if g in left:
                    nxt = g
                    break
            if nxt is None:
                raise ValueError("unbalanced half-edge set")
            h = nxt
        cycles.append(walk)
    return cycles


def splice(cycles: list[list[int]]) -> list[int]:
    """Join cycles that share vertices into one closed walk."""
    if not cycles:
        return []
    pending = sorted(cycles, key=len, reverse=True)
    ring = pending.pop(0)
    while pending:
        where = {v: i for i, v in enumerate(ring)}
        for idx, cyc in enumerate(pending):
            hit = next((j for j, v in enumerate(cyc) if v in where), None)
            if hit is not None:
                break
        else:
            raise ValueError("region boundary is disconnected")
        pending.pop(idx)
        i = where[cyc[hit]]
        rot = cyc[hit:] + cyc[:hit]
        ring = ring[:i + 1] + rot[1:] + [rot[0]] + ring[i + 1:]
    return ring


def region_ring(sub: Subdivision, faces: set[int], spikes: Iterable[int] = ()) -> list[Point]:
    """Weakly simple counterclockwise ring bounding ``faces`` plus spike edges."""
    hs = boundary_half_edges(sub, faces, spikes)
    if not hs:
        return []
    cycles = trace_cycles(sub, hs)
    pts = sub.points
    holes = [c for c in cycles if polygon_area([pts[v] for v in c]) < 0]
    if holes and len(cycles) > 1:
        cycles = [c for c in cycles if c not in holes] + holes
    ids = splice(cycles)
    return [pts[v] for v in ids]


def trace_directed(points: list[Point], edges: list[tuple[int, int]]) -> list[list[int]]:
    """Closed walks through a multiset of directed edges given by vertex ids.

    At each vertex the walk turns onto the first unused edge clockwise from
    the reversed incoming edge; the reversed edge itself is taken last, which
    is how zero-width spikes are walked around.
    """
    import math
    from collections import defaultdict

    out: dict[int, list[int]] = defaultdict(list)
    count: dict[tuple[int, int], int] = defaultdict(int)
    for u, v in edges:
        if count[(u, v)] == 0:
            out[u].append(v)
        count[(u, v)] += 1

    def ang(u: int, v: int) -> float:
        return math.atan2(points[v][1] - points[u][1], points[v][0] - points[u][0])

    two_pi = 2 * math.pi
    cycles = []
    for e in edges:
        if count[e] == 0:
            continue
        u, v = e
        count[e] -= 1
        cyc = [u]
        while v != cyc[0]:
            cyc.append(v)
            cands = [w for w in out[v] if count[(v, w)] > 0]
            if not cands:
                break
            back = ang(v, u)
            w = min(cands, key=lambda w: ((back - ang(v, w)) % two_pi) or two_pi)
            count[(v, w)] -= 1
            u, v = v, w
        cycles.append(cyc)
    return cycles


def union_ring(points: list[Point], rings: list[list[int]], spikes: list[tuple[int, int]] = ()) -> list[int]:
    """Boundary of the union of interior-disjoint rings sharing vertex ids.

    Edges traversed in both directions by different rings cancel; spike
    edges are added in both directions unless already on the boundary.
    """
    from collections import Counter

    cnt: Counter = Counter()
    for ring in rings:
        m = len(ring)
        for k in range(m):
            u, v = ring[k], ring[(k + 1) % m]
            if u == v:
                continue
            if cnt[(v, u)] > 0:
                cnt[(v, u)] -= 1
            else:
                cnt[(u, v)] += 1
    for u, v in spikes:
        if u == v or cnt[(u, v)] > 0 or cnt[(v, u)] > 0:
            continue
        cnt[(u, v)] += 1
        cnt[(v, u)] += 1
    edges = [e for e, c in cnt.items() for _ in range(c)]
    if not edges:
        return []
    return splice(trace_directed(points, edges))
