from __future__ import annotations

import logging

import numpy as np

from ..errors import InsufficientSupport
from .types import Partition, SupportSet

logger = logging.getLogger(__name__)

# number of rows in the full derivative vector D
DERIVATIVE_COUNT = {2: 5, 3: 9}

SHELL_TOL = 1.0e-9


def compute_supports(partition: Partition, need_second_ring: bool = False) -> SupportSet:
    """First ring = face neighbours; augmented by distance shells of
    neighbours-of-neighbours when the quadratic operator needs more points, or
    when a first ring does not span every axis."""

    dim = partition.dim
    points = partition.points
    target = DERIVATIVE_COUNT[dim] + 1 if need_second_ring else dim
    adjacency = partition.neighbors
    cracks = partition.cracks

    def blocked(i: int, j: int) -> bool:
        return any(crack.crosses(points[i], points[j]) for crack in cracks)

    first_rings: list[tuple[int, ...]] = []
    second_rings: list[tuple[int, ...]] = []
    augmented = 0
    for home in range(partition.n_cells):
        first = [j for j in adjacency[home] if not blocked(home, j)]
        extra: list[int] = []
        while len(first) + len(extra) < target or not _spans(points, home, first + extra, dim):
            members = {home, *first, *extra}
            frontier = sorted(
                {k for j in members for k in adjacency[j]} - members,
            )
            frontier = [k for k in frontier if not blocked(home, k)]
            if not frontier:
                count = len(first) + len(extra)
                if count == 0 or (need_second_ring and count < target):
                    raise InsufficientSupport(f"Point {home} has {count} supporting points, {target} needed")
                # linear operators fail later with a rank error if they are built
                logger.warning("Support of point %d does not span every axis", home)
                break
            distances = np.linalg.norm(points[frontier] - points[home], axis=1)
            nearest = float(distances.min())
            shell = [k for k, d in zip(frontier, distances) if d <= nearest * (1.0 + SHELL_TOL)]
            extra.extend(shell)
        if extra:
            augmented += 1
        first_rings.append(tuple(first))
        second_rings.append(tuple(extra))

    logger.debug("Supports built for %d points (%d augmented)", partition.n_cells, augmented)
    return SupportSet(first=tuple(first_rings), second=tuple(second_rings), need_second_ring=need_second_ring)


def _spans(points: np.ndarray, home: int, support: list[int], dim: int) -> bool:
    if len(support) < dim:
        return False
    offsets = points[support] - points[home]
    scale = float(np.abs(offsets).max())
    return int(np.linalg.matrix_rank(offsets / scale, tol=1.0e-8)) == dim
