"""Face topology and cell measures for partitions given as vertex lists.

Every partition builder (structured grids, imported meshes, Voronoi diagrams)
reduces its cells to vertex ids on a shared vertex pool and hands them to
:func:`build_partition`, which matches shared faces by their vertex sets,
orients normals, computes h_e and validates the result.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import replace

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from ..errors import DegenerateCell, GeometryError, PointOutsideDomain
from .types import Cell, Face, FaceKind, Partition, PointCloud

logger = logging.getLogger(__name__)

EXTERNAL_H_FLOOR = 1.0e-3


def merge_vertices(coords: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Collapse vertices closer than ``tol``; returns (unique coords, old -> new map)."""

    coords = np.asarray(coords, dtype=float)
    n = len(coords)
    pairs = cKDTree(coords).query_pairs(tol, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    # relabel by first occurrence so the output order follows the input order
    _, first = np.unique(labels, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    index = relabel[labels]
    unique = coords[np.sort(first)]
    return unique, index


def polygon_area_centroid(xy: np.ndarray) -> tuple[float, np.ndarray]:
    """Signed area and centroid of a 2D polygon ring."""

    x, y = xy[:, 0], xy[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    area = 0.5 * float(np.sum(cross))
    if area == 0.0:
        return 0.0, xy.mean(axis=0)
    cx = float(np.sum((x + xn) * cross)) / (6.0 * area)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * area)
    return area, np.array([cx, cy])


def planar_polygon(xyz: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Area, unit (Newell) normal and area centroid of a planar 3D polygon."""

    normal = np.zeros(3)
    for a, b in zip(xyz, np.roll(xyz, -1, axis=0)):
        normal += np.cross(a, b)
    norm = float(np.linalg.norm(normal))
    if norm == 0.0:
        return 0.0, normal, xyz.mean(axis=0)
    center = xyz.mean(axis=0)
    weights, centers = [], []
    for a, b in zip(xyz, np.roll(xyz, -1, axis=0)):
        weights.append(0.5 * np.linalg.norm(np.cross(a - center, b - center)))
        centers.append((a + b + center) / 3.0)
    weights = np.array(weights)
    centroid = (weights[:, None] * np.array(centers)).sum(axis=0) / weights.sum()
    return 0.5 * norm, normal / norm, centroid


def polyhedron_volume_centroid(faces: Sequence[np.ndarray]) -> tuple[float, np.ndarray]:
    """Volume and centroid of a star-shaped polyhedron given its face polygons."""

    apex = np.vstack(faces).mean(axis=0)
    volume, moment = 0.0, np.zeros(3)
    for polygon in faces:
        center = polygon.mean(axis=0)
        for a, b in zip(polygon, np.roll(polygon, -1, axis=0)):
            v = abs(np.linalg.det(np.array([a - apex, b - apex, center - apex]))) / 6.0
            volume += v
            moment += v * (apex + a + b + center) / 4.0
    if volume == 0.0:
        return 0.0, apex
    return volume, moment / volume


def order_planar_loop(xyz: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Indices ordering coplanar points counter-clockwise around ``normal``."""

    center = xyz.mean(axis=0)
    axis_u = xyz[0] - center
    if np.linalg.norm(axis_u) == 0.0:
        axis_u = xyz[1] - center
    axis_u /= np.linalg.norm(axis_u)
    axis_v = np.cross(normal, axis_u)
    rel = xyz - center
    return np.argsort(np.arctan2(rel @ axis_v, rel @ axis_u))


def build_partition(
    *,
    dim: int,
    vertices: np.ndarray,
    cells: Sequence[Sequence],
    points: np.ndarray | None = None,
    segment_of: Callable[[np.ndarray], str | None] | None = None,
    boundary: Mapping[tuple[int, ...], tuple[str, FaceKind | None]] | None = None,
    domain_measure: float | None = None,
    label: str = "partition",
) -> Partition:
    """Assemble a :class:`Partition`.

    ``cells`` holds, per cell, a vertex ring (2D) or a list of face vertex
    loops (3D). ``points`` defaults to the cell centroids. External faces get
    their segment from ``boundary`` (keyed by sorted vertex ids) or from
    ``segment_of`` evaluated at the face centroid.
    """

    vertices = np.asarray(vertices, dtype=float)
    if not len(cells):
        raise GeometryError("A partition needs at least one cell")

    rings: list[list[int]] = []
    loops: list[list[list[int]]] = []
    measures, centroids = [], []
    for index, cell in enumerate(cells):
        if dim == 2:
            ring = [int(v) for v in cell]
            area, centroid = polygon_area_centroid(vertices[ring])
            if area < 0.0:
                ring = ring[::-1]
                area = -area
            rings.append(ring)
        else:
            cell_loops = [[int(v) for v in loop] for loop in cell]
            area, centroid = polyhedron_volume_centroid([vertices[loop] for loop in cell_loops])
            loops.append(cell_loops)
        if not area > 0.0:
            raise DegenerateCell(f"Cell {index} has non-positive measure")
        measures.append(area)
        centroids.append(centroid)

    centroids_arr = np.array(centroids)
    hosted = centroids_arr.copy() if points is None else np.asarray(points, dtype=float)
    if len(hosted) != len(cells):
        raise GeometryError("Exactly one hosted point per cell is required")

    # shared faces are matched through their sorted vertex ids
    incidence: dict[tuple[int, ...], list[tuple[int, list[int]]]] = {}
    for index in range(len(cells)):
        if dim == 2:
            ring = rings[index]
            pieces = [[a, b] for a, b in zip(ring, ring[1:] + ring[:1])]
        else:
            pieces = loops[index]
        for piece in pieces:
            incidence.setdefault(tuple(sorted(piece)), []).append((index, piece))

    faces: list[Face] = []
    cell_faces: list[list[int]] = [[] for _ in cells]
    for key, users in incidence.items():
        if len(users) > 2:
            raise DegenerateCell(f"Face {key} is shared by {len(users)} cells")
        owner, loop = users[0]
        coords = vertices[loop]
        if dim == 2:
            tangent = coords[1] - coords[0]
            area = float(np.linalg.norm(tangent))
            normal = np.array([tangent[1], -tangent[0]]) / area if area > 0.0 else np.zeros(2)
            centroid = coords.mean(axis=0)
        else:
            area, normal, centroid = planar_polygon(coords)
            if np.dot(normal, centroid - centroids_arr[owner]) < 0.0:
                normal = -normal
        if not area > 0.0:
            raise DegenerateCell(f"Face {key} of cell {owner} has zero measure")

        face_id = len(faces)
        if len(users) == 2:
            neighbor = users[1][0]
            link = hosted[neighbor] - hosted[owner]
            if np.dot(normal, link) <= 0.0:
                raise DegenerateCell(f"Face between cells {owner} and {neighbor} is not crossed by their points")
            face = Face(
                id=face_id,
                vertices=tuple(loop),
                normal=normal,
                area=area,
                h=float(np.linalg.norm(link)),
                centroid=centroid,
                owner=owner,
                neighbor=neighbor,
                segment=None,
                kind=FaceKind.INTERNAL,
            )
            cell_faces[neighbor].append(face_id)
        else:
            segment, kind = None, None
            if boundary is not None and key in boundary:
                segment, kind = boundary[key]
            elif segment_of is not None:
                segment = segment_of(centroid)
            face = Face(
                id=face_id,
                vertices=tuple(loop),
                normal=normal,
                area=area,
                h=float(abs(np.dot(normal, centroid - hosted[owner]))),
                centroid=centroid,
                owner=owner,
                neighbor=None,
                segment=segment,
                kind=kind,
            )
        cell_faces[owner].append(face_id)
        faces.append(face)

    built_cells = tuple(
        Cell(
            id=index,
            vertices=tuple(rings[index]) if dim == 2 else tuple(sorted({v for loop in loops[index] for v in loop})),
            faces=tuple(cell_faces[index]),
            centroid=centroids_arr[index],
            measure=float(measures[index]),
            point=index,
        )
        for index in range(len(cells))
    )

    lower, upper = vertices.min(axis=0), vertices.max(axis=0)
    partition = Partition(
        dim=dim,
        vertices=vertices,
        cells=built_cells,
        faces=tuple(faces),
        cloud=PointCloud(hosted),
        domain_measure=float(domain_measure if domain_measure is not None else sum(measures)),
        diameter=float(np.linalg.norm(upper - lower)),
        label=label,
    )
    partition = floor_external_h(partition)
    validate_partition(partition)
    logger.debug("Built %s partition: %d cells, %d faces", label, partition.n_cells, len(faces))
    return partition


def floor_external_h(partition: Partition) -> Partition:
    floor = EXTERNAL_H_FLOOR * partition.mean_internal_h
    faces = tuple(
        replace(face, h=max(face.h, floor)) if not face.is_internal else face for face in partition.faces
    )
    return replace(partition, faces=faces)


def point_in_cell(partition: Partition, cell: Cell, point: np.ndarray, *, closed: bool = False) -> bool:
    """Strict containment, or containment in the closed cell when ``closed``."""

    if partition.dim == 2:
        from shapely import contains_xy, intersects_xy
        from shapely.geometry import Polygon as ShapelyPolygon

        test = intersects_xy if closed else contains_xy
        return bool(test(ShapelyPolygon(partition.cell_coords(cell)), point[0], point[1]))
    tol = 1.0e-12 * partition.diameter if closed else 0.0
    for face_id in cell.faces:
        face = partition.faces[face_id]
        normal = face.normal if face.owner == cell.id else -face.normal
        if np.dot(normal, point - face.centroid) >= tol:
            return False
    return True


def validate_partition(partition: Partition) -> None:
    total = float(partition.measures.sum())
    if abs(total - partition.domain_measure) > 1.0e-9 * partition.domain_measure:
        raise DegenerateCell(
            f"Cell measures sum to {total!r}, domain measure is {partition.domain_measure!r}"
        )
    for cell in partition.cells:
        if not point_in_cell(partition, cell, partition.points[cell.point], closed=True):
            raise PointOutsideDomain(f"Point {cell.point} does not lie inside its cell")


def assign_boundary_kinds(partition: Partition, kinds: Mapping[str, FaceKind | str]) -> Partition:
    """Return a copy whose external faces carry the BC kind of their segment.

    The key ``"*"`` applies to every segment not named explicitly. Crack faces
    keep their kind.
    """

    resolved = {name: FaceKind(kind) if not isinstance(kind, FaceKind) else kind for name, kind in kinds.items()}
    faces = []
    for face in partition.faces:
        if face.is_internal or face.kind is FaceKind.CRACK:
            faces.append(face)
            continue
        kind = resolved.get(face.segment or "", resolved.get("*", face.kind))
        faces.append(replace(face, kind=kind))
    return replace(partition, faces=tuple(faces))


def with_points(partition: Partition, coords: np.ndarray) -> Partition:
    """Move hosted points (one per cell) and recompute the face length scales."""

    coords = np.asarray(coords, dtype=float)
    faces = []
    for face in partition.faces:
        owner = coords[face.owner]
        if face.is_internal:
            link = coords[face.neighbor] - owner
            if np.dot(face.normal, link) <= 0.0:
                raise DegenerateCell(f"Moved points no longer straddle face {face.id}")
            h = float(np.linalg.norm(link))
        else:
            h = float(abs(np.dot(face.normal, face.centroid - owner)))
        faces.append(replace(face, h=h))
    moved = replace(partition, cloud=PointCloud(coords), faces=tuple(faces))
    moved = floor_external_h(moved)
    validate_partition(moved)
    return moved


def displace_points(partition: Partition, fraction: float, seed: int) -> Partition:
    """Shift every hosted point toward a random vertex of its cell by a random
    share (at most ``fraction``) of the distance."""

    rng = np.random.default_rng(seed)
    coords = partition.points.copy()
    for cell in partition.cells:
        corners = partition.cell_coords(cell)
        target = corners[rng.integers(len(corners))]
        coords[cell.point] += fraction * rng.random() * (target - coords[cell.point])
    return with_points(partition, coords)
