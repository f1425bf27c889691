"""Symmetric interior-penalty Galerkin assembly (baseline FPM).

Test and trial spaces coincide: the linear local trial functions of every
cell. Volume terms use one point at the hosted point of each cell.
"""
from __future__ import annotations

import numpy as np

from ..geometry import FaceKind
from .base import AssemblyContext
from .config import SolverConfig
from .problem import ProblemSpec
from .system import DiscreteSystem


def assemble_galerkin(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> DiscreteSystem:
    ctx = AssemblyContext(spec, config, order="linear", dt=dt)
    material = spec.material
    eta1, eta2, kbar = config.eta1, config.eta2, ctx.kbar

    for cell in ctx.partition.cells:
        i = cell.point
        ids = ctx.support(i)
        xc = ctx.points[i]
        N = ctx.N(i, xc)
        G = ctx.G(i, xc)
        ctx.K.add_block(ids, ids, cell.measure * G.T @ ctx.k(i, xc) @ G)
        capacity = material.rho_c(xc, anchor=ctx.points[i])
        ctx.C.add_block(ids, ids, cell.measure * capacity * np.outer(N, N))
        ctx.loads.add(ids, xc, cell.measure * N, spec.source)

    for face in ctx.partition.internal_faces:
        a, b, n = face.owner, face.neighbor, face.normal
        ids = np.concatenate([ctx.support(a), ctx.support(b)])
        penalty = eta1 / face.h * kbar
        for x, w in zip(*ctx.face_points(face)):
            jump = np.concatenate([ctx.N(a, x), -ctx.N(b, x)])
            average = 0.5 * np.concatenate([ctx.flux(a, x, n), ctx.flux(b, x, n)])
            block = -np.outer(jump, average) - np.outer(average, jump) + penalty * np.outer(jump, jump)
            ctx.K.add_block(ids, ids, w * block)

    for face in ctx.partition.external_faces:
        a, n = face.owner, face.normal
        ids = ctx.support(a)
        bc = ctx.condition(face)
        for x, w in zip(*ctx.face_points(face)):
            N = ctx.N(a, x)
            if face.kind is FaceKind.DIRICHLET:
                F = ctx.flux(a, x, n)
                penalty = eta2 / face.h * kbar
                ctx.K.add_block(ids, ids, w * (-np.outer(N, F) - np.outer(F, N) + penalty * np.outer(N, N)))
                ctx.loads.add(ids, x, w * (penalty * N - F), bc.value)
            elif face.kind in (FaceKind.NEUMANN, FaceKind.CRACK):
                ctx.loads.add(ids, x, w * N, bc.value)
            elif face.kind is FaceKind.ROBIN:
                h = float(bc.h(x[None, :])[0])
                ctx.K.add_block(ids, ids, w * h * np.outer(N, N))
                ctx.loads.add(ids, x, w * N, bc.robin_load)
            elif face.kind is FaceKind.SYMMETRIC:
                tangential = n @ ctx.k(a, x) @ (np.eye(spec.dim) - np.outer(n, n))
                ctx.K.add_block(ids, ids, -w * np.outer(N, tangential @ ctx.G(a, x)))

    return ctx.finish()
