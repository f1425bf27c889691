from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..approximation import OperatorSet, Order, shape_eval, shape_gradient
from ..errors import MissingOperator
from ..geometry import FaceKind
from ..geometry.types import Face
from .config import SolverConfig
from .flux import check_penalties, estimate_kbar
from .problem import BoundaryCondition, ProblemSpec
from .quadrature import face_rule
from .system import DiscreteSystem, LoadAssembler, TripletBuilder

logger = logging.getLogger(__name__)

STRONG_TOL = 1.0e-9


@dataclass(eq=False)
class AssemblyContext:
    """Shared state of one assembly pass."""

    spec: ProblemSpec
    config: SolverConfig
    order: Order
    dt: float | None = None
    operators: OperatorSet = field(init=False)
    kbar: float = field(init=False)
    K: TripletBuilder = field(init=False)
    C: TripletBuilder = field(init=False)
    loads: LoadAssembler = field(init=False)

    def __post_init__(self) -> None:
        spec, config = self.spec, self.config
        check_penalties(config, spec.dim)
        spec.validate()
        scheme = "rbf" if self.order == "quadratic" else config.gradient_scheme
        self.operators = spec.operators(self.order, scheme, config.rbf_c)
        if len(self.operators) != spec.n:
            raise MissingOperator(f"{len(self.operators)} operators for {spec.n} points")
        self.kbar = estimate_kbar(spec, config, self.dt)
        self.K = TripletBuilder(spec.n)
        self.C = TripletBuilder(spec.n)
        self.loads = LoadAssembler(spec.n)

    @property
    def partition(self):
        return self.spec.partition

    @property
    def points(self) -> np.ndarray:
        return self.spec.partition.points

    def support(self, i: int) -> np.ndarray:
        return self.operators[i].support

    def N(self, i: int, x: np.ndarray) -> np.ndarray:
        """Trial shape row(s) of cell i at x."""

        return shape_eval(self.operators.shape(i), x)

    def G(self, i: int, x: np.ndarray) -> np.ndarray:
        """Trial gradient rows of cell i at x, shape (dim, m+1)."""

        return shape_gradient(self.operators.shape(i), x)

    def k(self, i: int, x: np.ndarray) -> np.ndarray:
        return self.spec.material.k(x, anchor=self.points[i])

    def flux(self, i: int, x: np.ndarray, normal: np.ndarray) -> np.ndarray:
        """n^T k grad(N) of cell i at x."""

        return normal @ self.k(i, x) @ self.G(i, x)

    def face_points(self, face: Face) -> tuple[np.ndarray, np.ndarray]:
        return face_rule(self.partition, face, self.config.n_face_points)

    def sides(self, face: Face):
        """(cell, other cell or None, outward normal) for every row a face touches."""

        yield face.owner, face.neighbor, face.normal
        if face.is_internal:
            yield face.neighbor, face.owner, -face.normal

    def condition(self, face: Face) -> BoundaryCondition:
        return self.spec.condition(face)

    def strong_rows(self) -> dict[int, BoundaryCondition]:
        """Points lying on a Dirichlet face of their own cell."""

        if not self.config.strong_dirichlet:
            return {}
        tol = STRONG_TOL * self.partition.diameter
        rows: dict[int, BoundaryCondition] = {}
        for face in self.partition.external_faces:
            if face.kind is not FaceKind.DIRICHLET:
                continue
            point = self.points[face.owner]
            if abs(np.dot(face.normal, point - face.centroid)) <= tol:
                rows.setdefault(face.owner, self.condition(face))
        return rows

    def finish(self) -> DiscreteSystem:
        strong = self.strong_rows()
        if strong:
            self.K.discard_rows(strong)
            self.C.discard_rows(strong)
            self.loads.discard_rows(strong)
            for row, bc in strong.items():
                self.K.add_row(row, [row], [1.0])
                self.loads.add([row], self.points[row], 1.0, bc.value)
        self.loads.finalize()
        anchored = bool(strong) or any(
            face.kind in (FaceKind.DIRICHLET, FaceKind.ROBIN) for face in self.partition.external_faces
        )
        system = DiscreteSystem(
            C=self.C.build(),
            K=self.K.build(),
            loads=self.loads,
            method=self.config.method,
            partition=self.partition,
            kbar=self.kbar,
            anchored=anchored,
            strong_rows=tuple(sorted(strong)),
        )
        logger.info(
            "Assembled %s system: n=%d, nnz(K)=%d, nnz(C)=%d, kbar=%.4g",
            system.method,
            system.n,
            system.K.nnz,
            system.C.nnz,
            system.kbar,
        )
        return system
