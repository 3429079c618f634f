"""Matplotlib figures for the report command."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import PolyCollection  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .kernel.predicates import Point  # noqa: E402
from .model import Piece  # noqa: E402
from .svg import CLASS_COLORS, piece_color  # noqa: E402


def plot_partition(pieces: Sequence[Piece], polygon: Sequence[Point], path: str | Path,
                   title: str = "", dpi: int = 150) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    polys = [pc.vertices for pc in pieces if len(pc.vertices) >= 2]
    colors = [piece_color(pc, i) for i, pc in enumerate(pieces) if len(pc.vertices) >= 2]
    lw = 0.4 if len(polys) < 2000 else 0.1
    ax.add_collection(PolyCollection(polys, facecolors=colors, edgecolors="#222222", linewidths=lw, alpha=0.75))
    xs = [p[0] for p in polygon] + [polygon[0][0]]
    ys = [p[1] for p in polygon] + [polygon[0][1]]
    ax.plot(xs, ys, color="black", lw=1.2)
    ax.set_aspect("equal")
    ax.autoscale_view()
    present = sorted({pc.cls for pc in pieces} & set(CLASS_COLORS))
    if present:
        ax.legend(handles=[Patch(color=CLASS_COLORS[c], label=c) for c in present], loc="upper right", fontsize=8)
    ax.set_title(title or f"{len(pieces)} pieces", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def plot_counts(rows: Sequence[dict], path: str | Path) -> None:
    """Piece count against estimate and lower bound, one group of bars per run."""
    labels = [f"{r['input']}\n{r['kind']}" for r in rows]
    x = range(len(rows))
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(rows)), 4))
    w = 0.27
    ax.bar([i - w for i in x], [r["lower_bound"] for r in rows], w, label="lower bound", color="#8c8c8c")
    ax.bar(list(x), [r["pieces"] for r in rows], w, label="pieces", color="#4c72b0")
    ax.bar([i + w for i in x], [r["estimate"] for r in rows], w, label="estimate", color="#dd8452")
    ax.set_yscale("log")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, fontsize=7, rotation=45, ha="right")
    ax.set_ylabel("count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
