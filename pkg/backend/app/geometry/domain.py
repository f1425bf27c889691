"""Problem domains: axis-aligned boxes (2D/3D) and simple polygons (2D)."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Protocol, Union

import numpy as np
import shapely
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry import Polygon as ShapelyPolygon

from ..errors import EmptyDomain, GeometryError

AXES = "xyz"


class Domain(Protocol):
    dim: int

    @property
    def measure(self) -> float: ...

    @property
    def diameter(self) -> float: ...

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]: ...

    def contains(self, points: np.ndarray, *, strict: bool = True) -> np.ndarray: ...

    def segment_of(self, point: np.ndarray, tol: float) -> str | None: ...


@dataclass(frozen=True)
class Box:
    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != len(upper) or len(lower) not in (2, 3):
            raise GeometryError("Box bounds must both have length 2 or 3")
        if any(hi <= lo for lo, hi in zip(lower, upper)):
            raise EmptyDomain(f"Box has non-positive extent: {lower} .. {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def cube(cls, side: float, dim: int = 3) -> Box:
        return cls((0.0,) * dim, (float(side),) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def extent(self) -> np.ndarray:
        return np.subtract(self.upper, self.lower)

    @property
    def measure(self) -> float:
        return float(np.prod(self.extent))

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.extent))

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.lower), np.array(self.upper)

    def contains(self, points: np.ndarray, *, strict: bool = True) -> np.ndarray:
        points = np.atleast_2d(points)
        lower, upper = self.bounds
        if strict:
            return np.all((points > lower) & (points < upper), axis=1)
        return np.all((points >= lower) & (points <= upper), axis=1)

    def segment_of(self, point: np.ndarray, tol: float) -> str | None:
        for axis in range(self.dim):
            if abs(point[axis] - self.lower[axis]) <= tol:
                return f"{AXES[axis]}min"
            if abs(point[axis] - self.upper[axis]) <= tol:
                return f"{AXES[axis]}max"
        return None

    def segment_names(self) -> tuple[str, ...]:
        return tuple(f"{AXES[a]}{side}" for a in range(self.dim) for side in ("min", "max"))

    def as_polygon(self) -> Polygon:
        if self.dim != 2:
            raise GeometryError("Only 2D boxes convert to polygons")
        (x0, y0), (x1, y1) = self.lower, self.upper
        return Polygon(
            vertices=((x0, y0), (x1, y0), (x1, y1), (x0, y1)),
            segment_names=("ymin", "xmax", "ymax", "xmin"),
        )


@dataclass(frozen=True)
class Polygon:
    """Simple polygon; edge ``k`` runs from vertex ``k`` to ``k + 1``."""

    vertices: tuple[tuple[float, float], ...]
    segment_names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        vertices = tuple((float(x), float(y)) for x, y in self.vertices)
        if len(vertices) < 3:
            raise EmptyDomain("A polygon needs at least three vertices")
        ring = ShapelyPolygon(vertices)
        if not ring.is_valid or ring.area <= 0.0:
            raise EmptyDomain("Polygon is degenerate or self-intersecting")
        if not ring.exterior.is_ccw:
            vertices = vertices[::-1]
            names = tuple(self.segment_names)
            # reversing the ring reverses the edge order, shifted by one
            if names:
                names = tuple(names[(len(names) - 2 - k) % len(names)] for k in range(len(names)))
            object.__setattr__(self, "segment_names", names)
        names = tuple(self.segment_names) or tuple(f"edge{k}" for k in range(len(vertices)))
        if len(names) != len(vertices):
            raise GeometryError("segment_names must name every polygon edge")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "segment_names", names)

    @classmethod
    def circle(cls, center: tuple[float, float], radius: float, sides: int = 64, name: str = "wall") -> Polygon:
        angles = 2.0 * np.pi * np.arange(sides) / sides
        vertices = tuple(
            (center[0] + radius * np.cos(a), center[1] + radius * np.sin(a)) for a in angles
        )
        return cls(vertices=vertices, segment_names=(name,) * sides)

    @classmethod
    def l_shape(cls, size: float = 2.0) -> Polygon:
        """Square of side ``size`` with its upper-right quarter removed."""

        s, m = float(size), float(size) / 2.0
        return cls(
            vertices=((0.0, 0.0), (s, 0.0), (s, m), (m, m), (m, s), (0.0, s)),
            segment_names=("bottom", "right", "notch_bottom", "notch_left", "top", "left"),
        )

    @property
    def dim(self) -> int:
        return 2

    @cached_property
    def shape(self) -> ShapelyPolygon:
        return ShapelyPolygon(self.vertices)

    @property
    def measure(self) -> float:
        return float(self.shape.area)

    @property
    def diameter(self) -> float:
        v = np.array(self.vertices)
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1)))

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        x0, y0, x1, y1 = self.shape.bounds
        return np.array([x0, y0]), np.array([x1, y1])

    def contains(self, points: np.ndarray, *, strict: bool = True) -> np.ndarray:
        points = np.atleast_2d(points)
        if strict:
            return np.asarray(shapely.contains_xy(self.shape, points[:, 0], points[:, 1]))
        return np.asarray(shapely.intersects_xy(self.shape, points[:, 0], points[:, 1]))

    def segment_of(self, point: np.ndarray, tol: float) -> str | None:
        v = np.array(self.vertices)
        best, best_distance = None, np.inf
        for k, (a, b) in enumerate(zip(v, np.roll(v, -1, axis=0))):
            ab = b - a
            s = np.clip(np.dot(point - a, ab) / np.dot(ab, ab), 0.0, 1.0)
            distance = float(np.linalg.norm(point - (a + s * ab)))
            if distance < best_distance:
                best, best_distance = self.segment_names[k], distance
        return best if best_distance <= tol else None

    def boundary_distance(self, point: np.ndarray) -> float:
        return float(self.shape.exterior.distance(ShapelyPoint(point)))


AnyDomain = Union[Box, Polygon]
