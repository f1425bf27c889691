from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from ..errors import GeometryError


class FaceKind(str, Enum):
    INTERNAL = "internal"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    ROBIN = "robin"
    SYMMETRIC = "symmetric"
    CRACK = "crack"

    @classmethod
    def from_code(cls, code: str) -> FaceKind:
        codes = {"D": cls.DIRICHLET, "N": cls.NEUMANN, "R": cls.ROBIN, "S": cls.SYMMETRIC}
        try:
            return codes[code.upper()] if len(code) == 1 else cls(code.lower())
        except (KeyError, ValueError) as exc:
            raise ValueError(f"Unknown boundary kind: {code}") from exc


def _orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _frozen_array(values: np.ndarray, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PointCloud:
    coords: np.ndarray

    def __post_init__(self) -> None:
        coords = _frozen_array(self.coords)
        if coords.ndim != 2 or coords.shape[1] not in (2, 3):
            raise GeometryError(f"Point coordinates must have shape (n, 2|3), got {coords.shape}")
        if not np.all(np.isfinite(coords)):
            raise GeometryError("Point coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    def __len__(self) -> int:
        return int(self.coords.shape[0])


@dataclass(frozen=True, eq=False)
class Cell:
    id: int
    vertices: tuple[int, ...]
    faces: tuple[int, ...]
    centroid: np.ndarray
    measure: float
    point: int


@dataclass(frozen=True, eq=False)
class Face:
    """A cell boundary piece.

    ``owner`` is E1 and ``normal`` points out of it; ``neighbor`` is E2 for
    internal faces and ``None`` on the boundary, where ``segment`` names the
    boundary piece the face lies on.
    """

    id: int
    vertices: tuple[int, ...]
    normal: np.ndarray
    area: float
    h: float
    centroid: np.ndarray
    owner: int
    neighbor: int | None
    segment: str | None
    kind: FaceKind | None

    @property
    def is_internal(self) -> bool:
        return self.neighbor is not None


@dataclass(frozen=True, eq=False)
class Crack:
    """A stationary adiabatic crack: a segment in 2D, a planar polygon in 3D."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", _frozen_array(self.vertices))

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    def distance(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        if self.dim == 2:
            a, b = self.vertices[0], self.vertices[-1]
            ab = b - a
            s = np.clip((points - a) @ ab / float(ab @ ab), 0.0, 1.0)
            return np.linalg.norm(points - (a + s[:, None] * ab), axis=1)
        normal = self._plane_normal()
        origin = self.vertices[0]
        offset = (points - origin) @ normal
        projected = points - offset[:, None] * normal
        inside = np.array([self._contains_planar(p) for p in projected])
        edge_distance = np.array([self._edge_distance(p) for p in projected])
        return np.where(inside, np.abs(offset), np.hypot(offset, edge_distance))

    def crosses(self, p: np.ndarray, q: np.ndarray, tol: float = 0.0) -> bool:
        """True if the open segment p-q passes through the crack."""

        if self.dim == 2:
            a, b = self.vertices[0], self.vertices[-1]
            o1, o2 = _orient(a, b, p), _orient(a, b, q)
            o3, o4 = _orient(p, q, a), _orient(p, q, b)
            return bool(o1 * o2 < -tol and o3 * o4 < -tol)
        normal = self._plane_normal()
        dp = float((p - self.vertices[0]) @ normal)
        dq = float((q - self.vertices[0]) @ normal)
        if dp * dq >= 0.0:
            return False
        hit = p + (dp / (dp - dq)) * (q - p)
        return self._contains_planar(hit)

    def _plane_normal(self) -> np.ndarray:
        v = self.vertices
        normal = np.zeros(3)
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            normal += np.cross(a, b)
        return normal / np.linalg.norm(normal)

    def _contains_planar(self, point: np.ndarray) -> bool:
        normal = self._plane_normal()
        v = self.vertices
        signs = [np.dot(np.cross(b - a, point - a), normal) for a, b in zip(v, np.roll(v, -1, axis=0))]
        return bool(all(s >= -1e-14 for s in signs) or all(s <= 1e-14 for s in signs))

    def _edge_distance(self, point: np.ndarray) -> float:
        best = np.inf
        v = self.vertices
        for a, b in zip(v, np.roll(v, -1, axis=0)):
            ab = b - a
            s = np.clip(np.dot(point - a, ab) / np.dot(ab, ab), 0.0, 1.0)
            best = min(best, float(np.linalg.norm(point - (a + s * ab))))
        return best


@dataclass(frozen=True, eq=False)
class Partition:
    """Conforming, non-overlapping cells; cell ``i`` hosts point ``i``."""

    dim: int
    vertices: np.ndarray
    cells: tuple[Cell, ...]
    faces: tuple[Face, ...]
    cloud: PointCloud
    domain_measure: float
    diameter: float
    cracks: tuple[Crack, ...] = ()
    label: str = "partition"

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def points(self) -> np.ndarray:
        return self.cloud.coords

    @cached_property
    def internal_faces(self) -> tuple[Face, ...]:
        return tuple(face for face in self.faces if face.is_internal)

    @cached_property
    def external_faces(self) -> tuple[Face, ...]:
        return tuple(face for face in self.faces if not face.is_internal)

    @cached_property
    def measures(self) -> np.ndarray:
        return _frozen_array([cell.measure for cell in self.cells])

    @cached_property
    def centroids(self) -> np.ndarray:
        return _frozen_array([cell.centroid for cell in self.cells])

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adjacency: list[set[int]] = [set() for _ in self.cells]
        for face in self.internal_faces:
            adjacency[face.owner].add(face.neighbor)  # type: ignore[arg-type]
            adjacency[face.neighbor].add(face.owner)  # type: ignore[index]
        return tuple(tuple(sorted(items)) for items in adjacency)

    @cached_property
    def mean_internal_h(self) -> float:
        internal = self.internal_faces
        if not internal:
            return self.diameter
        return float(np.mean([face.h for face in internal]))

    def face_coords(self, face: Face) -> np.ndarray:
        return self.vertices[list(face.vertices)]

    def cell_coords(self, cell: Cell) -> np.ndarray:
        return self.vertices[list(cell.vertices)]

    def segments(self) -> set[str]:
        return {face.segment for face in self.external_faces if face.segment is not None}


@dataclass(frozen=True, eq=False)
class SupportSet:
    first: tuple[tuple[int, ...], ...]
    second: tuple[tuple[int, ...], ...]
    need_second_ring: bool = False
    _ids: tuple[np.ndarray, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        ids = tuple(
            _frozen_array([home, *first, *second], dtype=np.int64)
            for home, (first, second) in enumerate(zip(self.first, self.second))
        )
        object.__setattr__(self, "_ids", ids)

    def __len__(self) -> int:
        return len(self.first)

    def ids(self, point: int) -> np.ndarray:
        """Home id followed by the supporting ids."""

        return self._ids[point]

    def count(self, point: int) -> int:
        return len(self.first[point]) + len(self.second[point])
