from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

from ..approximation import OperatorSet, shape_eval, shape_gradient
from ..assembly import ProblemSpec
from ..timeint import TransientSolution

logger = logging.getLogger(__name__)


class ErrorNorms(NamedTuple):
    e0: float
    e1: float


def centroid_fields(values: np.ndarray, operators: OperatorSet, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """u_h and grad u_h of every cell, evaluated at its centroid with the cell's own trial function."""

    values = np.asarray(values, dtype=float)
    u = np.empty(len(operators))
    grad = np.empty((len(operators), centroids.shape[1]))
    for i in range(len(operators)):
        shape = operators.shape(i)
        local = values[shape.support]
        u[i] = shape_eval(shape, centroids[i]) @ local
        grad[i] = shape_gradient(shape, centroids[i]) @ local
    return u, grad


def _relative(diff_sq: np.ndarray, ref_sq: np.ndarray, weights: np.ndarray) -> float:
    num = float(np.sqrt(weights @ diff_sq))
    den = float(np.sqrt(weights @ ref_sq))
    return num / den if den > 0.0 else num


def error_norms(
    values: np.ndarray,
    spec: ProblemSpec,
    operators: OperatorSet | None = None,
    t: float = 0.0,
) -> ErrorNorms:
    """Relative L2 errors of the field and its gradient, one point per cell.

    Falls back to the absolute error when the exact solution (or its
    gradient) vanishes identically. Raises NoExactSolution without an exact field.
    """

    operators = operators or spec.operators()
    partition = spec.partition
    centroids, weights = partition.centroids, partition.measures
    exact = spec.exact_values(centroids, t)
    exact_grad = spec.exact_gradients(centroids, t)
    u, grad = centroid_fields(values, operators, centroids)
    e0 = _relative((u - exact) ** 2, exact**2, weights)
    e1 = _relative(np.sum((grad - exact_grad) ** 2, axis=1), np.sum(exact_grad**2, axis=1), weights)
    return ErrorNorms(e0, e1)


def time_averaged_e0(solution: TransientSolution, spec: ProblemSpec, operators: OperatorSet | None = None) -> float:
    """Mean of e0 over every stamp in (0, T]."""

    operators = operators or spec.operators()
    errors = [error_norms(u, spec, operators, float(t)).e0 for t, u in zip(solution.times[1:], solution.values[1:])]
    return float(np.mean(errors))
