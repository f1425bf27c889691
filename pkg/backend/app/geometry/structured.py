from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence

import numpy as np

from ..errors import EmptyDomain, GeometryError
from .domain import Box, Polygon
from .elements import element_cell
from .topology import build_partition
from .types import Partition, PointCloud

logger = logging.getLogger(__name__)

CELL_KINDS = {2: ("quad", "tri"), 3: ("hex", "tet")}


def build_structured_partition(
    domain: Box, counts: Sequence[int], cell_kind: str = "quad"
) -> tuple[PointCloud, Partition]:
    """Uniform grid partition of a box; points sit at the cell centroids."""

    counts = tuple(int(c) for c in counts)
    if len(counts) != domain.dim:
        raise GeometryError(f"Expected {domain.dim} cell counts, got {len(counts)}")
    if any(c < 1 for c in counts):
        raise EmptyDomain(f"Cell counts must be at least 1, got {counts}")
    if cell_kind not in CELL_KINDS[domain.dim]:
        raise GeometryError(f"Cell kind {cell_kind!r} is not available in {domain.dim}D")

    axes = [np.linspace(lo, hi, n + 1) for lo, hi, n in zip(domain.lower, domain.upper, counts)]
    grid = np.meshgrid(*axes, indexing="ij")
    # vertex (i, j[, k]) -> flat index with i running fastest
    vertices = np.column_stack([g.ravel(order="F") for g in grid])
    shape = tuple(n + 1 for n in counts)

    def vid(*index: int) -> int:
        return int(np.ravel_multi_index(index, shape, order="F"))

    cells: list = []
    if domain.dim == 2:
        nx, ny = counts
        for j in range(ny):
            for i in range(nx):
                v00, v10, v11, v01 = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
                if cell_kind == "quad":
                    cells.append(element_cell("quad", (v00, v10, v11, v01)))
                else:
                    cells.append(element_cell("tri", (v00, v10, v11)))
                    cells.append(element_cell("tri", (v00, v11, v01)))
    else:
        nx, ny, nz = counts
        for k in range(nz):
            for j in range(ny):
                for i in range(nx):
                    corner = {
                        offset: vid(i + offset[0], j + offset[1], k + offset[2])
                        for offset in itertools.product((0, 1), repeat=3)
                    }
                    if cell_kind == "hex":
                        nodes = [corner[o] for o in ((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
                                                     (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1))]
                        cells.append(element_cell("hex", nodes))
                        continue
                    # Kuhn split: one tetrahedron per axis ordering, conforming across cubes
                    for order in itertools.permutations(range(3)):
                        step = [0, 0, 0]
                        path = [corner[tuple(step)]]
                        for axis in order:
                            step[axis] = 1
                            path.append(corner[tuple(step)])
                        cells.append(element_cell("tet", path))

    tol = 1.0e-9 * domain.diameter
    partition = build_partition(
        dim=domain.dim,
        vertices=vertices,
        cells=cells,
        segment_of=lambda x: domain.segment_of(x, tol),
        domain_measure=domain.measure,
        label=f"structured-{cell_kind}",
    )
    logger.info("Structured %s partition with %d cells", cell_kind, partition.n_cells)
    return partition.cloud, partition


def build_masked_partition(
    domain: Polygon, box: Box, counts: Sequence[int], cell_kind: str = "quad"
) -> tuple[PointCloud, Partition]:
    """Uniform grid over ``box`` keeping only cells whose centroid lies in ``domain``.

    Suited to polygons made of grid-aligned rectangles (the L-shape).
    """

    _, grid = build_structured_partition(box, counts, cell_kind)
    keep = [cell for cell in grid.cells if domain.contains(cell.centroid, strict=True)[0]]
    if not keep:
        raise EmptyDomain("No grid cell lies inside the domain")
    tol = 1.0e-9 * domain.diameter
    partition = build_partition(
        dim=2,
        vertices=grid.vertices,
        cells=[list(cell.vertices) for cell in keep],
        segment_of=lambda x: domain.segment_of(x, tol),
        domain_measure=domain.measure,
        label=f"masked-{cell_kind}",
    )
    return partition.cloud, partition
