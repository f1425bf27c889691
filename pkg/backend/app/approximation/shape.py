from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operator import SECOND_PAIRS, DqOperator, Order


@dataclass(frozen=True, eq=False)
class ShapeFunction:
    """N(x) = Nbar(x) B + [1, 0, ..., 0] on the home cell of ``operator``."""

    operator: DqOperator
    order: Order = "linear"

    def __post_init__(self) -> None:
        if self.order == "quadratic" and self.operator.order != "quadratic":
            raise ValueError("A quadratic shape function needs a quadratic operator")

    @property
    def home(self) -> int:
        return self.operator.home

    @property
    def support(self) -> np.ndarray:
        return self.operator.support

    @property
    def rows(self) -> np.ndarray:
        B = self.operator.B
        return B if self.order == "quadratic" else B[: self.operator.dim]


def taylor_terms(offsets: np.ndarray, order: Order) -> np.ndarray:
    """Nbar for each offset x - x0; shape (q, rows)."""

    offsets = np.atleast_2d(offsets)
    if order == "linear":
        return offsets
    dim = offsets.shape[1]
    columns = [offsets[:, a] for a in range(dim)]
    for a, b in SECOND_PAIRS[dim]:
        factor = 0.5 if a == b else 1.0
        columns.append(factor * offsets[:, a] * offsets[:, b])
    return np.column_stack(columns)


def taylor_gradients(offsets: np.ndarray, order: Order) -> np.ndarray:
    """d Nbar / dx for each offset; shape (q, dim, rows)."""

    offsets = np.atleast_2d(offsets)
    q, dim = offsets.shape
    if order == "linear":
        return np.broadcast_to(np.eye(dim), (q, dim, dim)).copy()
    pairs = SECOND_PAIRS[dim]
    out = np.zeros((q, dim, dim + len(pairs)))
    out[:, np.arange(dim), np.arange(dim)] = 1.0
    for r, (a, b) in enumerate(pairs):
        out[:, a, dim + r] += offsets[:, b]
        if a != b:
            out[:, b, dim + r] += offsets[:, a]
    return out


def shape_eval(shape: ShapeFunction, x: np.ndarray) -> np.ndarray:
    """N(x) as a row over the support values; a matrix for several points."""

    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    offsets = np.atleast_2d(x) - shape.operator.origin
    values = taylor_terms(offsets, shape.order) @ shape.rows
    values[:, 0] += 1.0
    return values[0] if single else values


def shape_gradient(shape: ShapeFunction, x: np.ndarray) -> np.ndarray:
    """grad N(x); shape (dim, m+1) for one point, (q, dim, m+1) for several."""

    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    offsets = np.atleast_2d(x) - shape.operator.origin
    values = taylor_gradients(offsets, shape.order) @ shape.rows
    return values[0] if single else values
