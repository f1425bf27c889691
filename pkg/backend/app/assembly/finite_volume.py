from __future__ import annotations

import numpy as np

from ..geometry import FaceKind
from .base import AssemblyContext
from .config import SolverConfig
from .problem import ProblemSpec
from .system import DiscreteSystem


def assemble_finite_volume(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> DiscreteSystem:
    """Per-cell heat balance with averaged face fluxes and interior penalties.

    Row i integrates the governing equation over cell i against a unit test
    function; the mass and source terms use one point at the hosted point.
    """

    ctx = AssemblyContext(spec, config, order="linear", dt=dt)
    material = spec.material
    eta1, eta2, kbar = config.eta1, config.eta2, ctx.kbar

    for cell in ctx.partition.cells:
        i = cell.point
        xc = ctx.points[i]
        capacity = material.rho_c(xc, anchor=ctx.points[i])
        ctx.C.add_row(i, ctx.support(i), cell.measure * capacity * ctx.N(i, xc))
        ctx.loads.add([i], xc, cell.measure, spec.source)

    for face in ctx.partition.internal_faces:
        a, b, n = face.owner, face.neighbor, face.normal
        ids = np.concatenate([ctx.support(a), ctx.support(b)])
        penalty = eta1 / face.h * kbar
        row = np.zeros(len(ids))
        for x, w in zip(*ctx.face_points(face)):
            average = 0.5 * np.concatenate([ctx.flux(a, x, n), ctx.flux(b, x, n)])
            jump = np.concatenate([ctx.N(a, x), -ctx.N(b, x)])
            row += w * (-average + penalty * jump)
        # the neighbour sees the opposite normal and the opposite jump
        ctx.K.add_row(a, ids, row)
        ctx.K.add_row(b, ids, -row)

    for face in ctx.partition.external_faces:
        a, n = face.owner, face.normal
        ids = ctx.support(a)
        bc = ctx.condition(face)
        for x, w in zip(*ctx.face_points(face)):
            if face.kind is FaceKind.DIRICHLET:
                penalty = eta2 / face.h * kbar
                ctx.K.add_row(a, ids, w * (-ctx.flux(a, x, n) + penalty * ctx.N(a, x)))
                ctx.loads.add([a], x, w * penalty, bc.value)
            elif face.kind in (FaceKind.NEUMANN, FaceKind.CRACK):
                ctx.loads.add([a], x, w, bc.value)
            elif face.kind is FaceKind.ROBIN:
                h = float(bc.h(x[None, :])[0])
                ctx.K.add_row(a, ids, w * h * ctx.N(a, x))
                ctx.loads.add([a], x, w, bc.robin_load)
            elif face.kind is FaceKind.SYMMETRIC:
                tangential = n @ ctx.k(a, x) @ (np.eye(spec.dim) - np.outer(n, n))
                ctx.K.add_row(a, ids, -w * tangential @ ctx.G(a, x))

    return ctx.finish()
