"""Partition simple polygons into few pieces under a size constraint.

Area mode splits a polygon into pieces of prescribed areas. The six
approximation pipelines bound each piece by an axis-aligned square, a
rotated square, a disk, a straight diameter, a geodesic diameter or a
perimeter, and every result can be re-checked by :mod:`polypart.verify`.
"""

from .area import area_partition, steiner_triangulate
from .boundary import estimate_boundary_count, greedy_boundary
from .interior import ConfigError, grid_constants, interior_partition
from .kernel.polygon import InvalidPolygon, validate_polygon
from .model import Kind, Partition, Piece, SizeConstraint
from .pipeline import estimate, partition
from .verify import VerificationReport, check_partition, check_size, check_structure, lower_bound, verify_pieces

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "InvalidPolygon", "Kind", "Partition", "Piece", "SizeConstraint", "VerificationReport",
    "area_partition", "check_partition", "check_size", "check_structure", "estimate", "estimate_boundary_count",
    "greedy_boundary", "grid_constants", "interior_partition", "lower_bound", "partition",
    "steiner_triangulate", "validate_polygon", "verify_pieces",
]
