from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

import numpy as np

from ..approximation import OperatorSet, Order, Scheme, build_operators
from ..errors import ConfigurationError, NoExactSolution
from ..geometry import FaceKind, Partition, SupportSet, assign_boundary_kinds, compute_supports
from ..geometry.types import Face
from ..materials import MaterialField

logger = logging.getLogger(__name__)

# f(x, t) on points of shape (q, dim) -> (q,)
DataFn = Callable[[np.ndarray, float], np.ndarray]
SpaceFn = Callable[[np.ndarray], np.ndarray]


def as_data(value: float | DataFn | None) -> DataFn | None:
    if value is None or callable(value):
        return value
    constant = float(value)
    return lambda x, t: np.full(len(x), constant)


def as_space(value: float | SpaceFn) -> SpaceFn:
    if callable(value):
        return value
    constant = float(value)
    return lambda x: np.full(len(x), constant)


@dataclass(frozen=True, eq=False)
class BoundaryCondition:
    kind: FaceKind
    value: DataFn | None = None
    h: SpaceFn | None = None

    @cached_property
    def robin_load(self) -> DataFn:
        h, ambient = self.h, self.value
        return lambda x, t: h(x) * ambient(x, t)


def dirichlet(value: float | DataFn) -> BoundaryCondition:
    return BoundaryCondition(FaceKind.DIRICHLET, as_data(value))


def neumann(flux: float | DataFn = 0.0) -> BoundaryCondition:
    return BoundaryCondition(FaceKind.NEUMANN, as_data(flux))


def robin(h: float | SpaceFn, ambient: float | DataFn) -> BoundaryCondition:
    return BoundaryCondition(FaceKind.ROBIN, as_data(ambient), as_space(h))


def symmetric() -> BoundaryCondition:
    return BoundaryCondition(FaceKind.SYMMETRIC)


ADIABATIC = neumann(0.0)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A heat-conduction problem on a partition.

    ``boundary`` maps boundary segment names to conditions; the key ``"*"``
    covers every other segment. Crack faces are adiabatic.
    """

    partition: Partition
    material: MaterialField
    boundary: Mapping[str, BoundaryCondition]
    source: DataFn | None = None
    initial: float | SpaceFn = 0.0
    exact: DataFn | None = None
    exact_gradient: Callable[[np.ndarray, float], np.ndarray] | None = None
    label: str = "problem"
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if self.material.dim != self.partition.dim:
            raise ConfigurationError(
                f"Material is {self.material.dim}D but the partition is {self.partition.dim}D"
            )
        kinds = {name: bc.kind for name, bc in self.boundary.items()}
        object.__setattr__(self, "partition", assign_boundary_kinds(self.partition, kinds))
        object.__setattr__(self, "source", as_data(self.source))

    @property
    def dim(self) -> int:
        return self.partition.dim

    @property
    def n(self) -> int:
        return self.partition.n_cells

    def condition(self, face: Face) -> BoundaryCondition:
        if face.kind is FaceKind.CRACK:
            return ADIABATIC
        if face.segment in self.boundary:
            return self.boundary[face.segment]
        if "*" in self.boundary:
            return self.boundary["*"]
        raise ConfigurationError(f"Face {face.id} on segment '{face.segment}' has no boundary condition")

    def validate(self) -> None:
        """Every external face has one condition with its data; Robin h >= 0."""

        for face in self.partition.external_faces:
            if face.kind is None:
                raise ConfigurationError(f"Face {face.id} on segment '{face.segment}' has no boundary condition")
            bc = self.condition(face)
            if bc.kind in (FaceKind.DIRICHLET, FaceKind.NEUMANN, FaceKind.ROBIN) and bc.value is None:
                raise ConfigurationError(f"{bc.kind.value} condition on '{face.segment}' has no data")
            if bc.kind is FaceKind.ROBIN:
                if bc.h is None:
                    raise ConfigurationError(f"Robin condition on '{face.segment}' has no coefficient")
                if np.any(bc.h(face.centroid[None, :]) < 0.0):
                    raise ConfigurationError(f"Robin coefficient on '{face.segment}' is negative")
        sample = np.vstack([self.partition.points, self.partition.centroids])
        self.material.check_positive(sample)

    @property
    def has_exact(self) -> bool:
        return self.exact is not None

    def exact_values(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        if self.exact is None:
            raise NoExactSolution(f"{self.label} has no exact solution")
        return np.asarray(self.exact(np.atleast_2d(x), t), dtype=float)

    def exact_gradients(self, x: np.ndarray, t: float = 0.0) -> np.ndarray:
        if self.exact_gradient is None:
            raise NoExactSolution(f"{self.label} has no exact gradient")
        return np.asarray(self.exact_gradient(np.atleast_2d(x), t), dtype=float)

    def initial_values(self) -> np.ndarray:
        return np.asarray(as_space(self.initial)(self.partition.points), dtype=float)

    def supports(self, need_second_ring: bool = False) -> SupportSet:
        key = ("supports", need_second_ring)
        if key not in self._cache:
            self._cache[key] = compute_supports(self.partition, need_second_ring=need_second_ring)
        return self._cache[key]

    def operators(self, order: Order = "linear", scheme: Scheme = "gfd", c: float | None = None) -> OperatorSet:
        key = ("operators", order, scheme, c)
        if key not in self._cache:
            supports = self.supports(need_second_ring=order == "quadratic")
            self._cache[key] = build_operators(self.partition, supports, order=order, scheme=scheme, c=c)
        return self._cache[key]

    def with_boundary(self, **changes: BoundaryCondition) -> ProblemSpec:
        """Copy with some segments' conditions replaced."""

        boundary = {**self.boundary, **changes}
        return ProblemSpec(
            partition=self.partition,
            material=self.material,
            boundary=boundary,
            source=self.source,
            initial=self.initial,
            exact=self.exact,
            exact_gradient=self.exact_gradient,
            label=self.label,
        )
