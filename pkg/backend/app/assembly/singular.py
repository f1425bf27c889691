"""Singular-solution Petrov-Galerkin assembly.

The test function of cell i is the fundamental solution of the steady
operator with the cell's own constant conductivity, centred at one source
point outside the domain and normalized to 1 at the hosted point. Its
conductivity divergence vanishes, so K holds face integrals only.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import NormalizationSingular, SourcePointInsideDomain
from ..geometry import FaceKind, Partition
from ..geometry.topology import point_in_cell
from .base import AssemblyContext
from .config import SolverConfig
from .problem import ProblemSpec
from .quadrature import cell_rule
from .system import DiscreteSystem

logger = logging.getLogger(__name__)

# the 2D test function needs ln sqrt(r^T k^-1 r) >= 1 on every cell
MIN_LOG_ARGUMENT = np.e
MAX_DOUBLINGS = 60


def fundamental(x: np.ndarray, source: np.ndarray, inv_k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """psi and grad psi of the anisotropic fundamental solution at points x."""

    r = np.atleast_2d(x) - source
    Ar = r @ inv_k
    s = np.einsum("qi,qi->q", r, Ar)
    if r.shape[1] == 2:
        return 0.5 * np.log(s), Ar / s[:, None]
    return s**-0.5, -(s**-1.5)[:, None] * Ar


def local_tensor(k: np.ndarray, policy: str) -> np.ndarray:
    return np.diag(np.diag(k)) if policy == "diagonal" else np.asarray(k)


def _log_arguments(partition: Partition, source: np.ndarray, inverses: np.ndarray) -> float:
    smallest = np.inf
    for cell in partition.cells:
        sample = np.vstack([partition.cell_coords(cell), partition.points[cell.point]])
        r = sample - source
        s = np.einsum("qi,ij,qj->q", r, inverses[cell.point], r)
        smallest = min(smallest, float(np.sqrt(s.min())))
    return smallest


def place_source_point(partition: Partition, config: SolverConfig, inverses: np.ndarray) -> np.ndarray:
    """The bounding-box corner pushed outward by ``offset * diameter``."""

    if config.pg3_source_point is not None:
        source = np.asarray(config.pg3_source_point, dtype=float)
        if source.shape != (partition.dim,):
            raise SourcePointInsideDomain(f"Source point must have {partition.dim} coordinates")
        lower, upper = partition.vertices.min(axis=0), partition.vertices.max(axis=0)
        if np.all(source >= lower) and np.all(source <= upper):
            if any(point_in_cell(partition, cell, source) for cell in partition.cells):
                raise SourcePointInsideDomain(f"Source point {source.tolist()} lies inside the domain")
        return source

    if config.pg3_source_offset <= 0.0:
        raise SourcePointInsideDomain("The source point offset must be positive")
    lower, upper = partition.vertices.min(axis=0), partition.vertices.max(axis=0)
    direction = lower - 0.5 * (lower + upper)
    direction /= np.linalg.norm(direction)
    distance = config.pg3_source_offset * partition.diameter
    source = lower + distance * direction
    if partition.dim == 2:
        for _ in range(MAX_DOUBLINGS):
            if _log_arguments(partition, source, inverses) >= MIN_LOG_ARGUMENT:
                break
            distance *= 2.0
            source = lower + distance * direction
        else:
            raise NormalizationSingular("Could not place a source point with a positive test function")
        if distance > config.pg3_source_offset * partition.diameter:
            logger.warning("Moved the singular-solution source point to %s", np.round(source, 6).tolist())
    return source


@dataclass(frozen=True, eq=False)
class SingularTests:
    """Normalized test functions of every cell."""

    source: np.ndarray
    inverses: np.ndarray
    scale: np.ndarray

    def value(self, i: int, x: np.ndarray) -> np.ndarray:
        psi, _ = fundamental(x, self.source, self.inverses[i])
        return psi / self.scale[i]

    def gradient(self, i: int, x: np.ndarray) -> np.ndarray:
        _, grad = fundamental(x, self.source, self.inverses[i])
        return grad / self.scale[i]


def build_tests(spec: ProblemSpec, config: SolverConfig) -> SingularTests:
    points = spec.partition.points
    tensors = spec.material.k(points)
    inverses = np.array([np.linalg.inv(local_tensor(k, config.pg3_local_k)) for k in tensors])
    source = place_source_point(spec.partition, config, inverses)
    scale = np.array([fundamental(points[i], source, inverses[i])[0][0] for i in range(spec.n)])
    tiny = 1.0e-12 * max(float(np.abs(scale).max()), 1.0e-300)
    bad = np.flatnonzero(np.abs(scale) <= tiny)
    if len(bad):
        raise NormalizationSingular(f"Test function vanishes at point {int(bad[0])}")
    return SingularTests(source=source, inverses=inverses, scale=scale)


def assemble_singular(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> DiscreteSystem:
    ctx = AssemblyContext(spec, config, order="linear", dt=dt)
    if dt is not None:
        logger.warning("Singular-solution assembly is intended for steady problems; transient C is approximate")
    tests = build_tests(spec, config)
    material, points = spec.material, ctx.points
    eta1, eta2, kbar = config.eta1, config.eta2, ctx.kbar
    tensors = material.k(points)

    def flux(i: int, x: np.ndarray, n: np.ndarray) -> np.ndarray:
        return n @ tensors[i] @ ctx.G(i, x)

    for cell in ctx.partition.cells:
        i = cell.point
        ids = ctx.support(i)
        quad_points, weights = cell_rule(ctx.partition, cell, config.pg3_cell_rule)
        psi = tests.value(i, quad_points)
        capacity = material.rho_c(quad_points, anchor=points[i])
        row = np.einsum("q,qm->m", weights * capacity * psi, ctx.N(i, quad_points))
        ctx.C.add_row(i, ids, row)
        for x, w, p in zip(quad_points, weights, psi):
            ctx.loads.add([i], x, w * p, spec.source)

    for face in ctx.partition.faces:
        bc = None if face.is_internal else ctx.condition(face)
        gamma = eta2 * face.h / kbar
        for i, j, n in ctx.sides(face):
            ids_i = ctx.support(i)
            ids = ids_i if j is None else np.concatenate([ids_i, ctx.support(j)])
            row = np.zeros(len(ids))
            kn = tensors[i] @ n
            for x, w in zip(*ctx.face_points(face)):
                psi = float(tests.value(i, x)[0])
                g = float(tests.gradient(i, x)[0] @ kn)
                N = ctx.N(i, x)
                if j is not None:
                    m = len(ids_i)
                    row[:m] += w * eta1 / face.h * kbar * psi * N
                    row[m:] += w * (
                        -eta1 / face.h * kbar * psi * ctx.N(j, x) - psi * flux(j, x, n) + g * ctx.N(j, x)
                    )
                    continue
                F = flux(i, x, n)
                if face.kind is FaceKind.DIRICHLET:
                    penalty = eta2 / face.h * kbar
                    row += w * ((penalty * psi - g) * N - psi * F)
                    ctx.loads.add([i], x, w * (penalty * psi - 2.0 * g), bc.value)
                    continue
                # outward-flux consistency terms shared by N, R and S faces
                row += w * (psi * F + g * N)
                weight = 2.0 * psi + gamma * g
                if face.kind in (FaceKind.NEUMANN, FaceKind.CRACK):
                    row += w * gamma * g * F
                    ctx.loads.add([i], x, w * weight, bc.value)
                elif face.kind is FaceKind.ROBIN:
                    h = float(bc.h(x[None, :])[0])
                    row += w * (gamma * g * F + h * weight * N)
                    ctx.loads.add([i], x, w * weight, bc.robin_load)
                elif face.kind is FaceKind.SYMMETRIC:
                    normal_k = float(n @ tensors[i] @ n)
                    row += w * (-2.0 * psi * F + weight * normal_k * (n @ ctx.G(i, x)))
            ctx.K.add_row(i, ids, row)

    return ctx.finish()
