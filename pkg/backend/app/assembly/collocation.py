from __future__ import annotations

import numpy as np

from ..approximation import SECOND_PAIRS
from ..geometry import FaceKind
from ..materials import divergence_k
from .base import AssemblyContext
from .config import SolverConfig
from .problem import ProblemSpec
from .system import DiscreteSystem


def operator_weights(k: np.ndarray, div_k: np.ndarray) -> np.ndarray:
    """Coefficients of div(k grad u) on the derivative vector D u."""

    dim = k.shape[0]
    second = [k[a, b] * (1.0 if a == b else 2.0) for a, b in SECOND_PAIRS[dim]]
    return np.concatenate([div_k, second])


def assemble_collocation(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> DiscreteSystem:
    """Strong-form rows at every hosted point with face-averaged penalty terms.

    Uses quadratic RBF-DQ trial functions; C is diagonal for any point layout.
    """

    ctx = AssemblyContext(spec, config, order="quadratic", dt=dt)
    material, points = spec.material, ctx.points
    eta1, eta2, kbar = config.eta1, config.eta2, ctx.kbar

    for i in range(spec.n):
        op = ctx.operators[i]
        x = points[i]
        weights = operator_weights(material.k(x), divergence_k(material, op, points))
        ctx.K.add_row(i, op.support, -weights @ op.B)
        ctx.C.add_row(i, [i], [material.rho_c(x)])
        ctx.loads.add([i], x, 1.0, spec.source)

    for face in ctx.partition.faces:
        bc = None if face.is_internal else ctx.condition(face)
        for i, j, n in ctx.sides(face):
            ids_i = ctx.support(i)
            ids = ids_i if j is None else np.concatenate([ids_i, ctx.support(j)])
            row = np.zeros(len(ids))
            for x, w in zip(*ctx.face_points(face)):
                w = w / face.area
                N = ctx.N(i, x)
                if j is not None:
                    jump = np.concatenate([N, -ctx.N(j, x)])
                    row += w * eta1 / face.h**2 * kbar * jump
                elif face.kind is FaceKind.DIRICHLET:
                    row += w * eta2 / face.h**2 * kbar * N
                    ctx.loads.add([i], x, w * eta2 / face.h**2 * kbar, bc.value)
                elif face.kind in (FaceKind.NEUMANN, FaceKind.CRACK):
                    row += w * eta2 / face.h * ctx.flux(i, x, n)
                    ctx.loads.add([i], x, w * eta2 / face.h, bc.value)
                elif face.kind is FaceKind.ROBIN:
                    h = float(bc.h(x[None, :])[0])
                    row += w * eta2 / face.h * (ctx.flux(i, x, n) + h * N)
                    ctx.loads.add([i], x, w * eta2 / face.h, bc.robin_load)
                elif face.kind is FaceKind.SYMMETRIC:
                    row += w * eta2 / face.h * kbar * (n @ ctx.G(i, x))
            ctx.K.add_row(i, ids, row)

    return ctx.finish()
