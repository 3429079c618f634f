"""Orientation predicates with a floating-point filter and exact fallback.

Coordinates are Python floats. The fast path evaluates the 2x2 determinant in
double precision and accepts the sign whenever it exceeds a forward error
bound; otherwise the determinant is recomputed with ``fractions.Fraction``,
which represents every finite double exactly.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

Point = tuple[float, float]

# Shewchuk's ccwerrboundA = (3 + 16 eps) * eps with eps = 2**-53
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53
# below this the products may have underflowed and the relative bound does not hold
_TINY = 2.0**-960


def _orient_exact(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> int:
    fax, fay = Fraction(ax), Fraction(ay)
    det = (Fraction(bx) - fax) * (Fraction(cy) - fay) - (Fraction(by) - fay) * (Fraction(cx) - fax)
    return (det > 0) - (det < 0)


def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear."""
    ax, ay = a
    bx, by, cx, cy = b[0] - ax, b[1] - ay, c[0] - ax, c[1] - ay
    detleft = bx * cy
    detright = by * cx
    det = detleft - detright
    mag = abs(detleft) + abs(detright)
    bound = _CCW_ERRBOUND * mag
    if mag >= _TINY:
        if det > bound:
            return 1
        if -det > bound:
            return -1
    # a difference of doubles is zero only when the operands are equal
    if (bx == 0.0 or cy == 0.0) and (by == 0.0 or cx == 0.0):
        return 0
    return _orient_exact(ax, ay, b[0], b[1], c[0], c[1])


def edge_turn(a: Point, b: Point, c: Point, d: Point) -> int:
    """Sign of the cross product (b - a) x (d - c)."""
    ux, uy, vx, vy = b[0] - a[0], b[1] - a[1], d[0] - c[0], d[1] - c[1]
    left, right = ux * vy, uy * vx
    det = left - right
    mag = abs(left) + abs(right)
    # four rounded differences, two products and a subtraction
    if mag >= _TINY and abs(det) > 8.0 * 2.0**-53 * mag:
        return 1 if det > 0 else -1
    if (ux == 0.0 or vy == 0.0) and (uy == 0.0 or vx == 0.0):
        return 0
    fu = (Fraction(b[0]) - Fraction(a[0]), Fraction(b[1]) - Fraction(a[1]))
    fv = (Fraction(d[0]) - Fraction(c[0]), Fraction(d[1]) - Fraction(c[1]))
    x = fu[0] * fv[1] - fu[1] * fv[0]
    return (x > 0) - (x < 0)


def orient_det(a: Point, b: Point, c: Point) -> float:
    """Twice the signed area of triangle abc (floating point, unfiltered)."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient_many(ax, ay, bx, by, cx, cy) -> np.ndarray:
    """Vectorised :func:`orient` over numpy arrays (broadcasting allowed)."""
    ax, ay, bx, by, cx, cy = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (ax, ay, bx, by, cx, cy))
    )
    dbx, dby, dcx, dcy = bx - ax, by - ay, cx - ax, cy - ay
    detleft = dbx * dcy
    detright = dby * dcx
    det = detleft - detright
    mag = np.abs(detleft) + np.abs(detright)
    bound = _CCW_ERRBOUND * mag
    out = np.where(det > bound, 1, np.where(-det > bound, -1, 0)).astype(np.int8)
    zero = ((dbx == 0.0) | (dcy == 0.0)) & ((dby == 0.0) | (dcx == 0.0))
    unsure = ((np.abs(det) <= bound) | (mag < _TINY)) & ~zero
    out[zero] = 0
    if unsure.any():
        for idx in zip(*np.nonzero(unsure)):
            out[idx] = _orient_exact(
                float(ax[idx]), float(ay[idx]), float(bx[idx]), float(by[idx]),
                float(cx[idx]), float(cy[idx]),
            )
    return out


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab (exact)."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point (exact)."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and on_segment(c, a, b)) or (o2 == 0 and on_segment(d, a, b))
            or (o3 == 0 and on_segment(a, c, d)) or (o4 == 0 and on_segment(b, c, d)))


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Proper (transversal) crossing of the open segments ab and cd."""
    return orient(a, b, c) * orient(a, b, d) < 0 and orient(c, d, a) * orient(c, d, b) < 0
