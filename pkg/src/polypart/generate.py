"""Deterministic test polygon families."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .kernel.polygon import polygon_area, validate_polygon
from .kernel.predicates import Point

FAMILIES = ("random", "spiral", "comb", "star", "rect")


def _crossings(P: np.ndarray) -> np.ndarray:
    """Index pairs (i, j), i < j, of tour edges that cross properly."""
    n = len(P)
    A = P
    B = np.roll(P, -1, axis=0)
    x0 = np.minimum(A[:, 0], B[:, 0])
    x1 = np.maximum(A[:, 0], B[:, 0])
    order = np.argsort(x0)
    xs = x0[order]
    # candidate pairs: edges whose x-ranges overlap (sweep by left end)
    hi = np.searchsorted(xs, x1[order], side="right")
    start = np.arange(n) + 1
    counts = np.maximum(hi - start, 0)
    first = np.repeat(order, counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    second = order[np.repeat(start, counts) + offs]
    i = np.minimum(first, second)
    j = np.maximum(first, second)
    keep = (j - i >= 2) & ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    ax, ay, bx, by = A[i, 0], A[i, 1], B[i, 0], B[i, 1]
    cx, cy, dx, dy = A[j, 0], A[j, 1], B[j, 0], B[j, 1]

    def side(px, py, qx, qy, rx, ry):
        return np.sign((qx - px) * (ry - py) - (qy - py) * (rx - px))

    cross = ((side(ax, ay, bx, by, cx, cy) * side(ax, ay, bx, by, dx, dy) < 0)
             & (side(cx, cy, dx, dy, ax, ay) * side(cx, cy, dx, dy, bx, by) < 0))
    return np.stack([i[cross], j[cross]], axis=1)


def random_polygon(n: int, seed: int = 0) -> list[Point]:
    """Random points joined by a nearest-neighbour tour, untangled by 2-opt moves."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    # nearest-neighbour tour
    order = [0]
    free = np.ones(n, dtype=bool)
    free[0] = False
    for _ in range(n - 1):
        d = np.hypot(*(pts[free] - pts[order[-1]]).T)
        cand = np.nonzero(free)[0]
        nxt = int(cand[np.argmin(d)])
        order.append(nxt)
        free[nxt] = False
    tour = np.array(order)
    for _ in range(10 * n):
        P = pts[tour]
        pairs = _crossings(P)
        if len(pairs) == 0:
            break
        # apply a batch of moves on edges that are still intact
        pos = np.empty(n, dtype=int)
        pos[tour] = np.arange(n)
        old = tour.copy()
        for i, j in pairs:
            ia, ib = old[i], old[(i + 1) % n]
            ic, id_ = old[j], old[(j + 1) % n]
            pa, pc = pos[ia], pos[ic]
            if pos[ib] != (pa + 1) % n or pos[id_] != (pc + 1) % n:
                continue
            lo, hi = sorted((pa, pc))
            seg = tour[lo + 1:hi + 1][::-1].copy()
            tour[lo + 1:hi + 1] = seg
            pos[seg] = np.arange(lo + 1, hi + 1)
    else:
        raise RuntimeError("2-opt untangling did not converge")
    ring = [(float(x), float(y)) for x, y in pts[tour]]
    return validate_polygon(ring, reorient=True)


def spiral(n: int, turns: float = 2.0, width: float = 0.3) -> list[Point]:
    """Thick Archimedean spiral: the inner arm contributes reflex corners."""
    m = max(n // 2, math.ceil(6 * turns) + 1)  # coarser sampling lets chords cross the next turn
    theta = np.linspace(0.0, 2 * math.pi * turns, m)
    gap = 1.0
    r_in = 1.0 + gap * theta / (2 * math.pi)
    r_out = r_in + width * gap
    outer = [(float(r * math.cos(t)), float(r * math.sin(t))) for r, t in zip(r_out, theta)]
    inner = [(float(r * math.cos(t)), float(r * math.sin(t))) for r, t in zip(r_in, theta)]
    ring = outer + inner[::-1]
    return validate_polygon(ring, reorient=True)


def comb(n: int, tooth: float = 0.2, depth: float = 1.0) -> list[Point]:
    """Comb with (n - 4) // 4 teeth hanging from a spine."""
    teeth = max(1, (n - 4) // 4)
    w = (2 * teeth + 1) * tooth
    ring = [(0.0, 0.0)]
    for k in range(teeth):
        x0 = (2 * k + 1) * tooth
        ring += [(x0, 0.0), (x0, depth), (x0 + tooth, depth), (x0 + tooth, 0.0)]
    ring += [(w, 0.0), (w, depth + tooth), (0.0, depth + tooth)]
    ring = [p for i, p in enumerate(ring) if i == 0 or p != ring[i - 1]]
    return validate_polygon(ring, reorient=True)


def star(n: int, inner: float = 0.4, seed: int | None = None) -> list[Point]:
    m = max(n // 2, 3)
    rng = np.random.default_rng(seed) if seed is not None else None
    ring = []
    for k in range(2 * m):
        r = 1.0 if k % 2 == 0 else inner
        if rng is not None:
            r *= 0.8 + 0.4 * rng.random()
        t = math.pi * k / m
        ring.append((r * math.cos(t), r * math.sin(t)))
    return validate_polygon(ring, reorient=True)


def rect(w: float, h: float) -> list[Point]:
    return [(0.0, 0.0), (float(w), 0.0), (float(w), float(h)), (0.0, float(h))]


def scale_to_area(ring: Sequence[Point], area: float) -> list[Point]:
    """Uniformly scale about the lexicographically smallest corner."""
    s = math.sqrt(area / polygon_area(ring))
    x0, y0 = min(ring)
    return [(x0 + (x - x0) * s, y0 + (y - y0) * s) for x, y in ring]


def generate(family: str, n: int = 20, seed: int = 0, w: float = 3.0, h: float = 1.0) -> list[Point]:
    if family == "random":
        return random_polygon(n, seed)
    if family == "spiral":
        return spiral(n)
    if family == "comb":
        return comb(n)
    if family == "star":
        return star(n, seed=seed)
    if family == "rect":
        return rect(w, h)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
