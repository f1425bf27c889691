from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Order = Literal["linear", "quadratic"]

# row labels of the derivative vector D
DERIVATIVE_ROWS = {
    2: ("x", "y", "xx", "yy", "xy"),
    3: ("x", "y", "z", "xx", "yy", "zz", "xy", "yz", "xz"),
}
# (a, b) axis pairs of the second-derivative rows
SECOND_PAIRS = {
    2: ((0, 0), (1, 1), (0, 1)),
    3: ((0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)),
}


@dataclass(frozen=True, eq=False)
class DqOperator:
    """Derivative weights at one point: ``B @ u[support]`` gives D u at the home point."""

    home: int
    support: np.ndarray
    B: np.ndarray
    lengths: np.ndarray
    order: Order
    origin: np.ndarray

    def __post_init__(self) -> None:
        for name in ("support", "B", "lengths", "origin"):
            value = np.array(getattr(self, name), copy=True)
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def dim(self) -> int:
        return int(self.origin.shape[0])

    @property
    def gradient(self) -> np.ndarray:
        return self.B[: self.dim]

    @property
    def second(self) -> np.ndarray:
        if self.order != "quadratic":
            raise ValueError("Second-derivative rows need a quadratic operator")
        return self.B[self.dim:]

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Derivative vector from global nodal values (scalar or trailing axes)."""

        return np.tensordot(self.B, np.asarray(values)[self.support], axes=(1, 0))
