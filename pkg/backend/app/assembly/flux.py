from __future__ import annotations

import logging

import numpy as np

from ..errors import NonPositivePenalty
from ..geometry.types import Face
from ..materials import recommended_penalty_window
from .config import SolverConfig
from .problem import ProblemSpec

logger = logging.getLogger(__name__)


def jump_and_average(face: Face, left, right=None):
    """[[w]] and {w} across a face; on the boundary both equal the trace."""

    if face.is_internal:
        if right is None:
            raise ValueError(f"Internal face {face.id} needs traces from both sides")
        return left - right, 0.5 * (left + right)
    return left, left


def estimate_kbar(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> float:
    """Average conductivity used to scale the penalty terms.

    Mean of trace(k)/dim over the hosted points, raised to the largest
    rho c h^2 / dt over internal faces when a time step is given.
    """

    if config.kbar != "auto":
        return float(config.kbar)
    points = spec.partition.points
    tensors = spec.material.k(points)
    kbar = float(np.mean(np.trace(tensors, axis1=1, axis2=2)) / spec.dim)
    if dt is not None:
        internal = spec.partition.internal_faces
        if internal:
            capacity = spec.material.rho_c(points)
            floor = max(
                max(capacity[face.owner], capacity[face.neighbor]) * face.h**2 / dt for face in internal
            )
            if floor > kbar:
                logger.info("Raising kbar from %.4g to the transient floor %.4g", kbar, floor)
                kbar = floor
    return kbar


def check_penalties(config: SolverConfig, dim: int) -> None:
    if config.eta2 <= 0.0:
        raise NonPositivePenalty(f"eta2 must be positive, got {config.eta2}")
    if config.eta1 < 0.0:
        raise NonPositivePenalty(f"eta1 must be non-negative, got {config.eta1}")
    window = recommended_penalty_window(config.method, dim)
    if not window.contains(config.eta1, config.eta2):
        logger.warning(
            "Penalties eta1=%g, eta2=%g are outside the recommended %s window for %s in %dD",
            config.eta1,
            config.eta2,
            window,
            config.method,
            dim,
        )
