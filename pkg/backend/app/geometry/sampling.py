from __future__ import annotations

import numpy as np

from ..errors import EmptyDomain, GeometryError
from .domain import AnyDomain, Box, Polygon
from .types import PointCloud

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def sample_points(domain: AnyDomain, n: int, layout: str = "uniform", seed: int = 0) -> PointCloud:
    """Point cloud strictly inside ``domain``.

    ``uniform`` gives a cell-centred lattice on boxes and a sunflower spiral on
    other polygons; ``random`` draws seeded uniform samples by rejection.
    """

    if n < 1:
        raise EmptyDomain("At least one point is required")
    if layout == "uniform":
        if isinstance(domain, Box):
            return PointCloud(_lattice(domain, n))
        if isinstance(domain, Polygon):
            return PointCloud(_sunflower(domain, n))
    if layout == "random":
        return PointCloud(_rejection(domain, n, np.random.default_rng(seed)))
    raise GeometryError(f"Unknown point layout: {layout}")


def _lattice(box: Box, n: int) -> np.ndarray:
    extent = box.extent
    per_axis = np.maximum(1, np.round(extent * (n / np.prod(extent)) ** (1.0 / box.dim))).astype(int)
    axes = [lo + (np.arange(k) + 0.5) * (hi - lo) / k for lo, hi, k in zip(box.lower, box.upper, per_axis)]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.ravel(order="F") for g in grid])


def _sunflower(polygon: Polygon, n: int) -> np.ndarray:
    lower, upper = polygon.bounds
    center = (lower + upper) / 2.0
    vertices = np.array(polygon.vertices)
    # inscribed radius about the bounding-box center, kept a little inside
    radius = 0.98 * min(polygon.boundary_distance(center), float(np.min(np.linalg.norm(vertices - center, axis=1))))
    k = np.arange(n) + 0.5
    r = radius * np.sqrt(k / n)
    theta = GOLDEN_ANGLE * np.arange(n)
    points = center + np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    inside = polygon.contains(points, strict=True)
    if not np.all(inside):
        raise GeometryError("Sunflower layout needs a star-shaped domain around its center")
    return points


def _rejection(domain: AnyDomain, n: int, rng: np.random.Generator) -> np.ndarray:
    lower, upper = domain.bounds
    accepted: list[np.ndarray] = []
    count = 0
    while count < n:
        batch = lower + (upper - lower) * rng.random((2 * n, domain.dim))
        batch = batch[domain.contains(batch, strict=True)]
        accepted.append(batch[: n - count])
        count += len(accepted[-1])
    return np.vstack(accepted)
