"""Semi-discrete system assembly for the Galerkin and Petrov-Galerkin variants."""
from __future__ import annotations

from typing import Callable

from ..errors import ConfigurationError
from .collocation import assemble_collocation
from .config import SolverConfig
from .finite_volume import assemble_finite_volume
from .flux import estimate_kbar, jump_and_average
from .galerkin import assemble_galerkin
from .problem import ADIABATIC, BoundaryCondition, ProblemSpec, dirichlet, neumann, robin, symmetric
from .singular import assemble_singular
from .system import DiscreteSystem, StructureReport, structure_report

Assembler = Callable[[ProblemSpec, SolverConfig, "float | None"], DiscreteSystem]

ASSEMBLERS: dict[str, Assembler] = {
    "fpm": assemble_galerkin,
    "pg1": assemble_collocation,
    "pg2": assemble_finite_volume,
    "pg3": assemble_singular,
}


def assemble(spec: ProblemSpec, config: SolverConfig, dt: float | None = None) -> DiscreteSystem:
    try:
        assembler = ASSEMBLERS[config.method]
    except KeyError as exc:
        raise ConfigurationError(f"Unknown method '{config.method}'") from exc
    return assembler(spec, config, dt)


__all__ = [
    "ADIABATIC",
    "ASSEMBLERS",
    "BoundaryCondition",
    "DiscreteSystem",
    "ProblemSpec",
    "SolverConfig",
    "StructureReport",
    "assemble",
    "assemble_collocation",
    "assemble_finite_volume",
    "assemble_galerkin",
    "assemble_singular",
    "dirichlet",
    "estimate_kbar",
    "jump_and_average",
    "neumann",
    "robin",
    "structure_report",
    "symmetric",
]
