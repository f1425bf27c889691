"""Import of plain-text mesh files into partitions."""
from .mesh_parser import parse_mesh_from_lines
from .parser import describe_partition, import_mesh, mesh_info, partition_from_document, read_mesh_document

__all__ = [
    "describe_partition",
    "import_mesh",
    "mesh_info",
    "parse_mesh_from_lines",
    "partition_from_document",
    "read_mesh_document",
]
