"""JSON reading and writing for polygons and partitions.

Floats are written with ``repr``, the shortest decimal that reads back to the
same double (never more than 17 significant digits), so files round-trip
bit for bit.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from .kernel.predicates import Point
from .model import Partition, Piece


class InputError(ValueError):
    """Malformed input file."""


def _load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text() if str(path) != "-" else sys.stdin.read()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def parse_ring(data: Any) -> list[Point]:
    if not isinstance(data, list):
        raise InputError("polygon must be a list of [x, y] pairs")
    ring = []
    for v in data:
        if not (isinstance(v, (list, tuple)) and len(v) == 2
                and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
            raise InputError(f"bad vertex {v!r}")
        p = (float(v[0]), float(v[1]))
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise InputError(f"non-finite vertex {v!r}")
        ring.append(p)
    return ring


def read_polygon(path: str | Path) -> list[Point]:
    """Read ``{"polygon": [[x, y], ...]}`` (a bare vertex list is accepted too)."""
    data = _load(path)
    if isinstance(data, dict):
        if "polygon" not in data:
            raise InputError("missing 'polygon' key")
        data = data["polygon"]
    return parse_ring(data)


def polygon_json(ring: Sequence[Point]) -> dict:
    return {"polygon": [[float(x), float(y)] for x, y in ring]}


def partition_json(part: Partition, polygon: Sequence[Point], report: dict | None = None,
                   sizes: Sequence[float | None] | None = None) -> dict:
    pieces = []
    for i, p in enumerate(part.pieces):
        pieces.append({
            "class": p.cls,
            "vertices": [[float(x), float(y)] for x, y in p.vertices],
            "measured_size": None if sizes is None else sizes[i],
        })
    meta = {k: v for k, v in part.metadata.items() if _plain(v)}
    return {"kind": part.kind, "polygon": [[float(x), float(y)] for x, y in polygon],
            "pieces": pieces, "metadata": meta, "report": report or {}}


def _plain(v: Any) -> bool:
    try:
        json.dumps(v)
    except (TypeError, ValueError):
        return False
    return True


def read_partition(path: str | Path) -> tuple[Partition, list[Point] | None]:
    data = _load(path)
    if not isinstance(data, dict) or not isinstance(data.get("pieces"), list):
        raise InputError("partition file needs a 'pieces' list")
    pieces = []
    for k, p in enumerate(data["pieces"]):
        if not isinstance(p, dict) or "vertices" not in p:
            raise InputError(f"piece {k} has no vertices")
        pieces.append(Piece(parse_ring(p["vertices"]), str(p.get("class", "piece"))))
    poly = parse_ring(data["polygon"]) if "polygon" in data else None
    return Partition(str(data.get("kind", "")), pieces, dict(data.get("metadata", {}))), poly


def write_json(obj: Any, path: str | Path | None) -> None:
    text = json.dumps(obj, indent=1)
    if path is None or str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")
