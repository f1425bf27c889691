from __future__ import annotations

import logging

import numpy as np
from scipy.spatial import Delaunay, HalfspaceIntersection, QhullError, cKDTree
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon as ShapelyPolygon

from ..errors import DegenerateCell, DuplicatePoints, GeometryError, PointOutsideDomain
from .domain import AnyDomain, Box, Polygon
from .topology import build_partition, merge_vertices, order_planar_loop, with_points
from .types import Partition, PointCloud

logger = logging.getLogger(__name__)

JITTER = 1.0e-12
MERGE_TOL = 1.0e-10


def build_voronoi_partition(cloud: PointCloud, domain: AnyDomain) -> Partition:
    """Voronoi cells of ``cloud`` clipped to ``domain``; cell i hosts point i."""

    points = cloud.coords
    if cloud.dim != domain.dim:
        raise GeometryError(f"{cloud.dim}D points cannot partition a {domain.dim}D domain")
    diameter = domain.diameter
    close = cKDTree(points).query_pairs(1.0e-12 * diameter, output_type="ndarray")
    if len(close):
        i, j = close[0]
        raise DuplicatePoints(f"Points {i} and {j} coincide")
    outside = np.flatnonzero(~domain.contains(points, strict=True))
    if len(outside):
        raise PointOutsideDomain(f"Point {int(outside[0])} is not strictly inside the domain")

    generators = points + JITTER * diameter * _jitter(len(points), cloud.dim)
    neighbors = _delaunay_neighbors(generators)
    if cloud.dim == 2:
        polygon = domain.as_polygon() if isinstance(domain, Box) else domain
        partition = _voronoi_2d(cloud, polygon, generators, neighbors)
    else:
        if not isinstance(domain, Box):
            raise GeometryError("3D Voronoi partitions are available on boxes only")
        partition = _voronoi_3d(cloud, domain, generators, neighbors)
    logger.info("Voronoi partition with %d cells, %d faces", partition.n_cells, len(partition.faces))
    return partition


def _jitter(n: int, dim: int) -> np.ndarray:
    # deterministic per point id
    ids = np.arange(n, dtype=float)[:, None]
    keys = np.array([12.9898, 78.233, 37.719])[:dim]
    return np.modf(np.abs(np.sin(ids * keys + 1.0)) * 43758.5453)[0] - 0.5


def _delaunay_neighbors(generators: np.ndarray) -> list[np.ndarray]:
    n, dim = generators.shape
    if n <= dim + 1:
        return [np.array([j for j in range(n) if j != i], dtype=int) for i in range(n)]
    try:
        indptr, indices = Delaunay(generators).vertex_neighbor_vertices
    except QhullError as exc:
        raise DegenerateCell(f"Delaunay triangulation failed: {exc}") from exc
    return [indices[indptr[i]:indptr[i + 1]] for i in range(n)]


def clip_halfplane(polygon: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Keep the part of a convex polygon with ``normal . x <= offset``."""

    kept = []
    values = polygon @ normal - offset
    for k in range(len(polygon)):
        p, q = polygon[k], polygon[(k + 1) % len(polygon)]
        fp, fq = values[k], values[(k + 1) % len(polygon)]
        if fp <= 0.0:
            kept.append(p)
        if fp * fq < 0.0:
            kept.append(p + (fp / (fp - fq)) * (q - p))
    return np.array(kept).reshape(-1, 2)


def _voronoi_2d(
    cloud: PointCloud, polygon: Polygon, generators: np.ndarray, neighbors: list[np.ndarray]
) -> Partition:
    lower, upper = polygon.bounds
    pad = polygon.diameter
    frame = np.array(
        [[lower[0] - pad, lower[1] - pad], [upper[0] + pad, lower[1] - pad],
         [upper[0] + pad, upper[1] + pad], [lower[0] - pad, upper[1] + pad]]
    )
    area_tol = 1.0e-14 * polygon.measure
    rings: list[np.ndarray] = []
    for i, home in enumerate(generators):
        cell = frame
        for j in neighbors[i]:
            direction = generators[j] - home
            cell = clip_halfplane(cell, direction, float(direction @ (generators[j] + home)) / 2.0)
            if len(cell) < 3:
                raise DegenerateCell(f"Voronoi cell {i} vanished while clipping")
        clipped = ShapelyPolygon(cell).intersection(polygon.shape)
        pieces = [g for g in getattr(clipped, "geoms", [clipped]) if g.geom_type == "Polygon" and g.area > area_tol]
        if not pieces:
            raise DegenerateCell(f"Voronoi cell {i} has zero measure after clipping")
        if len(pieces) > 1:
            raise DegenerateCell(f"Voronoi cell {i} is split into {len(pieces)} parts by the domain boundary")
        piece = pieces[0]
        if not piece.contains(ShapelyPoint(cloud.coords[i])):
            raise DegenerateCell(f"Voronoi cell {i} does not contain its point")
        rings.append(np.asarray(piece.exterior.coords)[:-1])

    vertices, index = merge_vertices(np.vstack(rings), MERGE_TOL * polygon.diameter)
    cells, start = [], 0
    for ring in rings:
        ids = _dedupe_loop(index[start:start + len(ring)])
        start += len(ring)
        if len(ids) < 3:
            raise DegenerateCell("A Voronoi cell collapsed after vertex merging")
        cells.append(ids)

    tol = 1.0e-9 * polygon.diameter
    partition = build_partition(
        dim=2,
        vertices=vertices,
        cells=cells,
        points=cloud.coords,
        segment_of=lambda x: polygon.segment_of(x, tol),
        domain_measure=polygon.measure,
        label="voronoi",
    )
    _check_boundary_faces(partition)
    return partition


def _voronoi_3d(cloud: PointCloud, box: Box, generators: np.ndarray, neighbors: list[np.ndarray]) -> Partition:
    lower, upper = box.bounds
    walls = []
    for axis in range(3):
        normal = np.zeros(3)
        normal[axis] = -1.0
        walls.append(np.append(normal, lower[axis]))
        normal = np.zeros(3)
        normal[axis] = 1.0
        walls.append(np.append(normal, -upper[axis]))
    walls = np.array(walls)

    scale = box.diameter
    loops_per_cell: list[list[np.ndarray]] = []
    for i, home in enumerate(generators):
        bisectors = [
            np.append(generators[j] - home, -float((generators[j] - home) @ (generators[j] + home)) / 2.0)
            for j in neighbors[i]
        ]
        halfspaces = np.vstack([walls, *bisectors]) if bisectors else walls
        try:
            corners = HalfspaceIntersection(halfspaces, cloud.coords[i]).intersections
        except QhullError as exc:
            raise DegenerateCell(f"Voronoi cell {i} could not be intersected: {exc}") from exc
        corners, _ = merge_vertices(corners, MERGE_TOL * scale)
        loops = []
        for row in halfspaces:
            norm = float(np.linalg.norm(row[:3]))
            residual = np.abs(corners @ row[:3] + row[3]) / norm
            active = corners[residual <= 1.0e-9 * scale]
            if len(active) < 3:
                continue
            loop = active[order_planar_loop(active, row[:3] / norm)]
            if _loop_area(loop) <= 1.0e-14 * scale**2:
                continue
            loops.append(loop)
        loops_per_cell.append(loops)

    flat = np.vstack([loop for loops in loops_per_cell for loop in loops])
    vertices, index = merge_vertices(flat, MERGE_TOL * scale)
    cells, start = [], 0
    for loops in loops_per_cell:
        cell = []
        for loop in loops:
            ids = _dedupe_loop(index[start:start + len(loop)])
            start += len(loop)
            if len(ids) >= 3:
                cell.append(ids)
        cells.append(cell)

    tol = 1.0e-9 * scale
    partition = build_partition(
        dim=3,
        vertices=vertices,
        cells=cells,
        points=cloud.coords,
        segment_of=lambda x: box.segment_of(x, tol),
        domain_measure=box.measure,
        label="voronoi",
    )
    _check_boundary_faces(partition)
    return partition


def _dedupe_loop(ids: np.ndarray) -> list[int]:
    out: list[int] = []
    for v in ids.tolist():
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _loop_area(loop: np.ndarray) -> float:
    center = loop.mean(axis=0)
    total = np.zeros(3)
    for a, b in zip(loop, np.roll(loop, -1, axis=0)):
        total += np.cross(a - center, b - center)
    return 0.5 * float(np.linalg.norm(total))


def _check_boundary_faces(partition: Partition) -> None:
    stray = [face.id for face in partition.external_faces if face.segment is None]
    if stray:
        raise DegenerateCell(f"{len(stray)} external faces do not lie on the domain boundary")


def relax_voronoi_partition(cloud: PointCloud, domain: AnyDomain, iterations: int = 10) -> Partition:
    """Lloyd relaxation: regenerate the cells from their centroids, then move
    every hosted point onto the centroid of its final cell."""

    partition = build_voronoi_partition(cloud, domain)
    for _ in range(iterations):
        partition = build_voronoi_partition(PointCloud(partition.centroids), domain)
    logger.info("Relaxed %d Voronoi cells over %d sweeps", partition.n_cells, iterations)
    return with_points(partition, partition.centroids)
