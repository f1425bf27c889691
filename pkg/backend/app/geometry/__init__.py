"""Point clouds, partitions, face topology, supports and cracks."""
from .crack import insert_crack
from .domain import AnyDomain, Box, Polygon
from .sampling import sample_points
from .structured import build_masked_partition, build_structured_partition
from .supports import DERIVATIVE_COUNT, compute_supports
from .topology import assign_boundary_kinds, displace_points, with_points
from .types import Cell, Crack, Face, FaceKind, Partition, PointCloud, SupportSet
from .voronoi import build_voronoi_partition, relax_voronoi_partition

__all__ = [
    "AnyDomain",
    "Box",
    "Cell",
    "Crack",
    "DERIVATIVE_COUNT",
    "Face",
    "FaceKind",
    "Partition",
    "PointCloud",
    "Polygon",
    "SupportSet",
    "assign_boundary_kinds",
    "build_masked_partition",
    "build_structured_partition",
    "build_voronoi_partition",
    "compute_supports",
    "displace_points",
    "insert_crack",
    "relax_voronoi_partition",
    "sample_points",
    "with_points",
]
