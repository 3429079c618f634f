"""Static SVG 1.1 rendering of a partition."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import quoteattr

from .kernel.predicates import Point
from .model import AREA, BOUNDARY, COMPLETE, FRAGMENT_UNION, INCOMPLETE, TRIVIAL_FIELD, Piece

SCALE = 100.0  # pixels per world unit
MARGIN = 10.0

CLASS_COLORS = {
    BOUNDARY: "#4c72b0",
    COMPLETE: "#55a868",
    INCOMPLETE: "#dd8452",
    TRIVIAL_FIELD: "#8172b3",
    FRAGMENT_UNION: "#c44e52",
}
# area pieces have one class, so they cycle through this list by index
AREA_PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3",
                "#937860", "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd")


def piece_color(piece: Piece, index: int) -> str:
    if piece.cls == AREA:
        return AREA_PALETTE[index % len(AREA_PALETTE)]
    return CLASS_COLORS.get(piece.cls, "#bbbbbb")


def render_svg(pieces: Sequence[Piece], polygon: Sequence[Point] | None = None, scale: float = SCALE) -> str:
    pts = [p for pc in pieces for p in pc.vertices] + list(polygon or [])
    if not pts:
        pts = [(0.0, 0.0)]
    x0 = min(p[0] for p in pts)
    y0 = min(p[1] for p in pts)
    x1 = max(p[0] for p in pts)
    y1 = max(p[1] for p in pts)
    w = (x1 - x0) * scale + 2 * MARGIN
    h = (y1 - y0) * scale + 2 * MARGIN

    def fmt(p: Point) -> str:
        # flip y so the picture is in the usual orientation
        return f"{(p[0] - x0) * scale + MARGIN:.3f},{(y1 - p[1]) * scale + MARGIN:.3f}"

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0f}" height="{h:.0f}" '
           f'viewBox="0 0 {w:.3f} {h:.3f}">']
    for i, pc in enumerate(pieces):
        if not pc.vertices:
            continue
        d = "M " + " L ".join(fmt(p) for p in pc.vertices) + " Z"
        out.append(f'<path d="{d}" fill="{piece_color(pc, i)}" fill-opacity="0.75" stroke="#222222" '
                   f'stroke-width="0.5" class={quoteattr(pc.cls)}/>')
    if polygon:
        ring = " ".join(fmt(p) for p in polygon)
        out.append(f'<polygon points="{ring}" fill="none" stroke="#000000" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
