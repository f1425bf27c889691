"""Per-point derivative operators and the local trial functions built on them."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..config import get_settings
from ..errors import ConfigurationError, MissingOperator, SingularBasis
from ..geometry import Partition, SupportSet
from .gfd import build_gfd
from .operator import DERIVATIVE_ROWS, SECOND_PAIRS, DqOperator, Order
from .rbf_dq import build_rbf_dq, multiquadric_derivatives
from .scaling import transform_to_standard
from .shape import ShapeFunction, shape_eval, shape_gradient, taylor_gradients, taylor_terms

logger = logging.getLogger(__name__)

Scheme = Literal["gfd", "rbf"]


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """One DqOperator per hosted point of a partition."""

    operators: tuple[DqOperator, ...]
    order: Order
    scheme: Scheme
    c: float | None = None

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, point: int) -> DqOperator:
        try:
            return self.operators[point]
        except IndexError as exc:
            raise MissingOperator(f"No operator built for point {point}") from exc

    def shape(self, point: int, order: Order | None = None) -> ShapeFunction:
        return ShapeFunction(self[point], order or self.order)

    def gradients(self, values: np.ndarray) -> np.ndarray:
        """Nodal gradients (n, dim) of a field from every operator's gradient rows."""

        values = np.asarray(values, dtype=float)
        return np.array([op.gradient @ values[op.support] for op in self.operators])


def default_shape_constant(dim: int) -> float:
    settings = get_settings()
    return settings.rbf_shape_2d if dim == 2 else settings.rbf_shape_3d


def build_operators(
    partition: Partition,
    supports: SupportSet,
    order: Order = "linear",
    scheme: Scheme = "gfd",
    c: float | None = None,
) -> OperatorSet:
    """Build the derivative operator of every point.

    Quadratic operators always use RBF-DQ. An RBF basis that fails its
    condition check is rebuilt once with the shape constant halved.
    """

    if order == "quadratic" and scheme != "rbf":
        raise ConfigurationError("Quadratic operators are only available from RBF-DQ")
    if len(supports) != partition.n_cells:
        raise MissingOperator(f"Support set covers {len(supports)} of {partition.n_cells} points")
    if scheme == "rbf" and c is None:
        c = default_shape_constant(partition.dim)

    points = partition.points
    operators = []
    for home in range(partition.n_cells):
        ids = supports.ids(home)
        if scheme == "gfd":
            operators.append(build_gfd(points[home], points[ids[1:]], home_id=home, support_ids=ids))
            continue
        try:
            op = build_rbf_dq(points[home], points[ids[1:]], c, order=order, home_id=home, support_ids=ids)
        except SingularBasis:
            logger.warning("RBF basis at point %d is ill-conditioned with c=%g, retrying with c=%g", home, c, c / 2)
            op = build_rbf_dq(points[home], points[ids[1:]], c / 2, order=order, home_id=home, support_ids=ids)
        operators.append(op)

    logger.debug("Built %d %s %s operators", len(operators), order, scheme)
    return OperatorSet(operators=tuple(operators), order=order, scheme=scheme, c=c)


__all__ = [
    "DERIVATIVE_ROWS",
    "DqOperator",
    "OperatorSet",
    "Order",
    "SECOND_PAIRS",
    "Scheme",
    "ShapeFunction",
    "build_gfd",
    "build_operators",
    "build_rbf_dq",
    "default_shape_constant",
    "multiquadric_derivatives",
    "shape_eval",
    "shape_gradient",
    "taylor_gradients",
    "taylor_terms",
    "transform_to_standard",
]
