from __future__ import annotations

import numpy as np

from ..errors import RankDeficientSupport
from .operator import DqOperator


def build_gfd(
    home: np.ndarray,
    supports: np.ndarray,
    *,
    home_id: int = 0,
    support_ids: np.ndarray | None = None,
) -> DqOperator:
    """Gradient weights from an inverse-distance-squared weighted least-squares fit."""

    home = np.asarray(home, dtype=float)
    offsets = np.atleast_2d(np.asarray(supports, dtype=float)) - home
    dim = home.shape[0]
    if len(offsets) < dim:
        raise RankDeficientSupport(f"GFD needs at least {dim} supports, got {len(offsets)}")
    distance2 = np.sum(offsets**2, axis=1)
    if np.any(distance2 == 0.0):
        raise RankDeficientSupport("A support coincides with the home point")
    scale = float(np.sqrt(distance2.max()))
    if np.linalg.matrix_rank(offsets / scale, tol=1.0e-10) < dim:
        raise RankDeficientSupport("Supports do not span every axis")

    weighted = offsets.T / distance2                      # (dim, m)
    normal = weighted @ offsets
    coefficients = np.linalg.solve(normal, weighted)       # (dim, m)
    B = np.hstack([-coefficients.sum(axis=1, keepdims=True), coefficients])

    ids = np.arange(len(offsets) + 1) if support_ids is None else np.asarray(support_ids)
    return DqOperator(
        home=home_id,
        support=ids,
        B=B,
        lengths=np.abs(offsets).max(axis=0),
        order="linear",
        origin=home,
    )
