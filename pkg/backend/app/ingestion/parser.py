from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..errors import ConfigurationError, ExportError
from ..geometry.elements import element_cell
from ..geometry.topology import build_partition
from ..geometry.types import FaceKind, Partition, PointCloud
from ..schemas import MeshDocument, MeshInfo
from .mesh_parser import parse_mesh_from_lines

logger = logging.getLogger(__name__)

SUPPORTED_EXTENSIONS = {".mesh", ".txt"}


def read_mesh_document(path: Path) -> MeshDocument:
    extension = path.suffix.lower()
    if extension not in SUPPORTED_EXTENSIONS:
        raise ConfigurationError(f"Unsupported mesh file extension: {extension}")
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ExportError(f"Cannot read mesh file {path}: {exc}") from exc
    return parse_mesh_from_lines(lines)


def partition_from_document(document: MeshDocument, label: str = "mesh") -> tuple[PointCloud, Partition]:
    """One cell per element, hosted point at the element centroid."""

    index = {node.id: k for k, node in enumerate(document.nodes)}
    vertices = np.array([node.coords for node in document.nodes], dtype=float)
    cells = [element_cell(element.type, [index[v] for v in element.nodes]) for element in document.elements]
    boundary = {
        tuple(sorted(index[v] for v in entry.nodes)): (entry.segment, FaceKind.from_code(entry.kind))
        for entry in document.boundary
    }
    partition = build_partition(
        dim=document.dim, vertices=vertices, cells=cells, boundary=boundary, label=label
    )
    unassigned = sum(1 for face in partition.external_faces if face.segment is None)
    if unassigned:
        logger.warning("%d external faces carry no boundary segment", unassigned)
    return partition.cloud, partition


def import_mesh(path: Path) -> tuple[PointCloud, Partition]:
    document = read_mesh_document(Path(path))
    cloud, partition = partition_from_document(document, label=Path(path).stem)
    logger.info("Imported %s: %d cells", path, partition.n_cells)
    return cloud, partition


def describe_partition(partition: Partition) -> MeshInfo:
    internal = partition.internal_faces
    return MeshInfo(
        dim=partition.dim,
        n_points=partition.n_cells,
        n_internal_faces=len(internal),
        n_external_faces=len(partition.external_faces),
        measure=float(partition.measures.sum()),
        segments=sorted(partition.segments()),
        mean_h=partition.mean_internal_h,
    )


def mesh_info(path: Path) -> MeshInfo:
    _, partition = import_mesh(Path(path))
    return describe_partition(partition)
