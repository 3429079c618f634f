"""Shared result types."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .kernel.polygon import polygon_area
from .kernel.predicates import Point


class Kind(str, Enum):
    ALIGNED_SQUARE = "aligned-square"
    ROTATED_SQUARE = "rotated-square"
    DISK = "disk"
    STRAIGHT_DIAMETER = "straight-diameter"
    GEODESIC_DIAMETER = "geodesic-diameter"
    PERIMETER = "perimeter"

    @property
    def blowup(self) -> bool:
        return self not in (Kind.GEODESIC_DIAMETER, Kind.PERIMETER)

    @classmethod
    def parse(cls, text: str) -> "Kind":
        key = text.strip().lower().replace("_", "-")
        aliases = {"aligned": "aligned-square", "rotated": "rotated-square",
                   "diameter": "straight-diameter", "straight": "straight-diameter", "geodesic": "geodesic-diameter"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class SizeConstraint:
    kind: Kind
    bound: float = 1.0

    def __post_init__(self):
        if not self.bound > 0:
            raise ValueError("bound must be positive")


# piece provenance classes
AREA = "area"
BOUNDARY = "boundary"
COMPLETE = "complete"
INCOMPLETE = "incomplete"
TRIVIAL_FIELD = "trivial-field"
FRAGMENT_UNION = "fragment-union"
PIECE_CLASSES = (AREA, BOUNDARY, COMPLETE, INCOMPLETE, TRIVIAL_FIELD, FRAGMENT_UNION)


@dataclass
class Piece:
    vertices: list[Point]
    cls: str
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


@dataclass
class Partition:
    kind: str
    pieces: list[Piece]
    metadata: dict[str, Any] = field(default_factory=dict)
    # construction state of the approximation pipelines, kept for structural checks
    boundary: Any = field(default=None, repr=False)
    interior: Any = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.pieces)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for p in self.pieces:
            out[p.cls] = out.get(p.cls, 0) + 1
        return out
