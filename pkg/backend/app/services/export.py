"""Result files: legacy VTK snapshots (through meshio) and the results.csv ledger."""
from __future__ import annotations

import csv
import logging
from pathlib import Path

import meshio
import numpy as np

from ..errors import ExportError
from ..geometry import Partition
from ..geometry.types import Cell
from ..schemas import ErrorReportRead

logger = logging.getLogger(__name__)

VTK_TRIANGLE, VTK_POLYGON, VTK_QUAD = 5, 7, 9
VTK_TETRA, VTK_HEXAHEDRON, VTK_CONVEX_POINT_SET = 10, 12, 41
MESHIO_TYPES = {
    VTK_TRIANGLE: "triangle",
    VTK_QUAD: "quad",
    VTK_POLYGON: "polygon",
    VTK_TETRA: "tetra",
    VTK_HEXAHEDRON: "hexahedron",
}

CSV_COLUMNS = (
    "case",
    "method",
    "n_points",
    "eta1",
    "eta2",
    "e0",
    "e1",
    "ebar0",
    "nband_K",
    "nband_C",
    "wall_s",
    "config_hash",
)


def _fmt(value: float) -> str:
    return "%.12e" % value


def _hex_order(partition: Partition, cell: Cell) -> list[int] | None:
    """Bottom loop with its normal pointing into the cell, then the vertices above it."""

    loops = [list(partition.faces[f].vertices) for f in cell.faces]
    if len(loops) != 6 or any(len(loop) != 4 for loop in loops):
        return None
    base = loops[0]
    xyz = partition.vertices[base]
    normal = np.cross(xyz[1] - xyz[0], xyz[2] - xyz[0])
    if np.dot(normal, cell.centroid - xyz.mean(axis=0)) < 0.0:
        base = base[::-1]
    edges = {frozenset(pair) for loop in loops for pair in zip(loop, loop[1:] + loop[:1])}
    top = []
    for v in base:
        above = [w for w in cell.vertices if w not in base and frozenset((v, w)) in edges]
        if len(above) != 1:
            return None
        top.append(above[0])
    return [*base, *top]


def vtk_cell(partition: Partition, cell: Cell) -> tuple[int, list[int]]:
    if partition.dim == 2:
        ring = list(cell.vertices)
        kind = {3: VTK_TRIANGLE, 4: VTK_QUAD}.get(len(ring), VTK_POLYGON)
        return kind, ring
    if len(cell.vertices) == 4:
        return VTK_TETRA, list(cell.vertices)
    if len(cell.vertices) == 8:
        ordered = _hex_order(partition, cell)
        if ordered is not None:
            return VTK_HEXAHEDRON, ordered
    return VTK_CONVEX_POINT_SET, list(cell.vertices)


def cell_blocks(partition: Partition) -> list[tuple[str, np.ndarray]] | None:
    """Runs of same-shaped cells in cell order; None when a cell has no meshio type."""

    runs: list[tuple[str, list[list[int]]]] = []
    for cell in partition.cells:
        kind, ids = vtk_cell(partition, cell)
        name = MESHIO_TYPES.get(kind)
        if name is None:
            return None
        if runs and runs[-1][0] == name and len(runs[-1][1][0]) == len(ids):
            runs[-1][1].append(ids)
        else:
            runs.append((name, [ids]))
    return [(name, np.array(ids, dtype=int)) for name, ids in runs]


def _points_3d(partition: Partition) -> np.ndarray:
    vertices = np.asarray(partition.vertices, dtype=float)
    if vertices.shape[1] == 2:
        vertices = np.column_stack([vertices, np.zeros(len(vertices))])
    return vertices


def _vectors_3d(gradient: np.ndarray) -> np.ndarray:
    gradient = np.asarray(gradient, dtype=float)
    if gradient.shape[1] == 2:
        gradient = np.column_stack([gradient, np.zeros(len(gradient))])
    return gradient


def render_vtk(partition: Partition, temperature: np.ndarray, gradient: np.ndarray, title: str = "fpm field") -> str:
    """Legacy VTK text for partitions holding convex-point-set cells, which meshio cannot write."""

    cells = [vtk_cell(partition, cell) for cell in partition.cells]
    size = sum(len(ids) + 1 for _, ids in cells)
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {len(partition.vertices)} double",
    ]
    lines += [" ".join(_fmt(c) for c in v) for v in _points_3d(partition)]
    lines.append(f"CELLS {len(cells)} {size}")
    lines += [" ".join(str(i) for i in (len(ids), *ids)) for _, ids in cells]
    lines.append(f"CELL_TYPES {len(cells)}")
    lines += [str(kind) for kind, _ in cells]
    lines += [f"CELL_DATA {len(cells)}", "SCALARS temperature double 1", "LOOKUP_TABLE default"]
    lines += [_fmt(value) for value in temperature]
    lines.append("VECTORS gradient double")
    lines += [" ".join(_fmt(c) for c in g) for g in _vectors_3d(gradient)]
    return "\n".join(lines) + "\n"


def export_field(
    partition: Partition,
    temperature: np.ndarray,
    gradient: np.ndarray,
    path: Path | str,
    title: str = "fpm field",
) -> Path:
    """Write one snapshot: temperature and gradient per Fragile Point (one VTK cell each)."""

    temperature = np.asarray(temperature, dtype=float)
    if len(temperature) != partition.n_cells or len(gradient) != partition.n_cells:
        raise ExportError(f"Expected {partition.n_cells} values per array")
    path = Path(path)
    blocks = cell_blocks(partition)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if blocks is None:
            path.write_text(render_vtk(partition, temperature, gradient, title), encoding="ascii")
        else:
            bounds = np.cumsum([0, *(len(ids) for _, ids in blocks)])
            vectors = _vectors_3d(gradient)
            meshio.write_points_cells(
                path,
                _points_3d(partition),
                blocks,
                cell_data={
                    "temperature": [temperature[a:b] for a, b in zip(bounds, bounds[1:])],
                    "gradient": [vectors[a:b] for a, b in zip(bounds, bounds[1:])],
                },
                file_format="vtk42",
                binary=False,
            )
    except (OSError, ValueError, meshio.WriteError) as exc:
        raise ExportError(f"Could not write {path}: {exc}") from exc
    logger.debug("Wrote %s", path)
    return path


def _csv_value(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.6e" % value
    return str(value)


def report_row(report: ErrorReportRead) -> dict[str, str]:
    return {
        "case": report.case_id if not report.variant else f"{report.case_id}:{report.variant}",
        "method": report.method,
        "n_points": str(report.n_points),
        "eta1": _csv_value(report.eta1),
        "eta2": _csv_value(report.eta2),
        "e0": _csv_value(report.e0),
        "e1": _csv_value(report.e1),
        "ebar0": _csv_value(report.ebar0),
        "nband_K": str(report.nband_k),
        "nband_C": str(report.nband_c),
        "wall_s": _csv_value(report.wall_s),
        "config_hash": report.config_hash,
    }


def write_results_csv(report: ErrorReportRead, path: Path | str) -> Path:
    """Insert or replace the row keyed by (case, method, config_hash)."""

    path = Path(path)
    row = report_row(report)
    key = (row["case"], row["method"], row["config_hash"])
    try:
        rows = []
        if path.exists():
            with path.open(newline="", encoding="utf-8") as handle:
                rows = [r for r in csv.DictReader(handle) if (r["case"], r["method"], r["config_hash"]) != key]
        rows.append(row)
        rows.sort(key=lambda r: (r["case"], r["method"], r["config_hash"]))
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
    except (OSError, KeyError, csv.Error) as exc:
        raise ExportError(f"Could not update {path}: {exc}") from exc
    logger.info("Recorded %s/%s in %s", row["case"], row["method"], path)
    return path
