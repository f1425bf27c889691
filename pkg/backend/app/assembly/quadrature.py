"""Face and cell quadrature rules on partition geometry."""
from __future__ import annotations

from functools import lru_cache
from typing import Literal

import numpy as np

from ..geometry import Partition
from ..geometry.types import Cell, Face

CellRule = Literal["auto", "centroid", "subdivided"]


@lru_cache(maxsize=16)
def gauss_unit(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [0, 1]."""

    nodes, weights = np.polynomial.legendre.leggauss(n)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def triangle_rule(a: np.ndarray, b: np.ndarray, c: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Collapsed n x n Gauss rule on a triangle in 3D."""

    s, ws = gauss_unit(n)
    S, T = np.meshgrid(s, s, indexing="ij")
    W = np.outer(ws, ws)
    S, T, W = S.ravel(), T.ravel(), W.ravel()
    points = a + S[:, None] * (b - a) + (S * T)[:, None] * (c - b)
    double_area = float(np.linalg.norm(np.cross(b - a, c - a)))
    return points, W * S * double_area


def face_rule(partition: Partition, face: Face, n: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Points and weights on a face; the weights sum to the face measure."""

    if n == 1:
        return face.centroid[None, :], np.array([face.area])
    corners = partition.face_coords(face)
    if partition.dim == 2:
        s, w = gauss_unit(n)
        return corners[0] + s[:, None] * (corners[1] - corners[0]), w * face.area
    points, weights = [], []
    for a, b in zip(corners, np.roll(corners, -1, axis=0)):
        p, w = triangle_rule(face.centroid, a, b, n)
        points.append(p)
        weights.append(w)
    return np.vstack(points), np.concatenate(weights)


def _is_simplex(partition: Partition, cell: Cell) -> bool:
    return len(cell.vertices) == partition.dim + 1


def _is_box(partition: Partition, cell: Cell) -> bool:
    corners = partition.cell_coords(cell)
    if partition.dim != 3 or len(corners) != 8:
        return False
    extent = corners.max(axis=0) - corners.min(axis=0)
    return bool(abs(np.prod(extent) - cell.measure) <= 1.0e-12 * cell.measure)


def cell_rule(partition: Partition, cell: Cell, rule: CellRule = "centroid") -> tuple[np.ndarray, np.ndarray]:
    """Points and weights on a cell; the weights sum to the cell measure.

    ``auto`` keeps one centroid point on simplices and subdivides other cells:
    one point per fan triangle in 2D, a 2 x 2 x 2 Gauss rule on axis-aligned
    hexahedra and one point per fan tetrahedron otherwise.
    """

    if rule == "centroid" or (rule == "auto" and _is_simplex(partition, cell)):
        return cell.centroid[None, :], np.array([cell.measure])
    corners = partition.cell_coords(cell)
    if partition.dim == 2:
        points, weights = [], []
        for a, b in zip(corners, np.roll(corners, -1, axis=0)):
            points.append((cell.centroid + a + b) / 3.0)
            da, db = a - cell.centroid, b - cell.centroid
            weights.append(0.5 * abs(da[0] * db[1] - da[1] * db[0]))
        return np.array(points), np.array(weights)
    if _is_box(partition, cell):
        lower, upper = corners.min(axis=0), corners.max(axis=0)
        s, w = gauss_unit(2)
        grid = np.stack(np.meshgrid(s, s, s, indexing="ij"), axis=-1).reshape(-1, 3)
        weights = np.einsum("i,j,k->ijk", w, w, w).ravel() * cell.measure
        return lower + grid * (upper - lower), weights
    points, weights = [], []
    for face_id in cell.faces:
        face = partition.faces[face_id]
        loop = partition.face_coords(face)
        for a, b in zip(loop, np.roll(loop, -1, axis=0)):
            volume = abs(np.dot(np.cross(a - face.centroid, b - face.centroid), cell.centroid - face.centroid)) / 6.0
            points.append((cell.centroid + face.centroid + a + b) / 4.0)
            weights.append(volume)
    return np.array(points), np.array(weights)
