"""Run catalog cases end to end and sweep penalty grids."""
from __future__ import annotations

import hashlib
import json
import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from ..assembly import DiscreteSystem, ProblemSpec, SolverConfig, assemble
from ..config import Settings, get_settings
from ..errors import ConfigurationError, FpmError, NoExactSolution
from ..schemas import ErrorReportRead, RunRequest, SweepCellRead, SweepRequest
from ..timeint import TransientSolution, run_transient, solve_steady
from .catalog import BenchmarkCase, get_case
from .export import export_field, write_results_csv
from .norms import centroid_fields, error_norms, time_averaged_e0

logger = logging.getLogger(__name__)

RESULTS_FILE = "results.csv"
# sweep cells beyond this error are reported as diverged
DIVERGED_E0 = 1.0e3


@dataclass(frozen=True, eq=False)
class ResolvedRun:
    """A RunRequest with every default filled in from the case and the settings."""

    case: BenchmarkCase
    variant: str | None
    points: int
    layout: str
    seed: int
    config: SolverConfig
    dt: float | None
    T: float | None

    @property
    def transient(self) -> bool:
        return self.dt is not None

    def config_hash(self) -> str:
        payload = {
            "case": self.case.case_id,
            "variant": self.variant,
            "points": self.points,
            "layout": self.layout,
            "seed": self.seed,
            "dt": self.dt,
            "T": self.T,
            "solver": self.config.model_dump(mode="json"),
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:12]


@dataclass(eq=False)
class RunResult:
    report: ErrorReportRead
    spec: ProblemSpec
    system: DiscreteSystem
    values: np.ndarray
    transient: TransientSolution | None = None
    files: list[Path] = field(default_factory=list)


def resolve(request: RunRequest | SweepRequest, settings: Settings | None = None) -> ResolvedRun:
    settings = settings or get_settings()
    case = get_case(request.case)
    eta1, eta2 = case.penalty(request.method)
    single = isinstance(request, RunRequest)
    if single and request.eta1 is not None:
        eta1 = request.eta1
    if single and request.eta2 is not None:
        eta2 = request.eta2
    options = {}
    if single:
        options = {
            "rbf_c": request.rbf_c,
            "kbar": request.kbar or "auto",
            "strong_dirichlet": bool(request.strong_dirichlet),
        }
    config = SolverConfig(method=request.method, eta1=eta1, eta2=eta2, **options)
    dt = T = None
    if case.transient:
        dt = request.dt or case.dt
        T = request.T or case.T
    return ResolvedRun(
        case=case,
        variant=(request.variant or case.variants[0]) if case.variants else None,
        points=request.points or case.default_points,
        layout=request.layout or case.layouts[0],
        seed=request.seed if request.seed is not None else settings.random_seed,
        config=config,
        dt=dt,
        T=T,
    )


def build_spec(run: ResolvedRun) -> ProblemSpec:
    return run.case.build(run.points, layout=run.layout, seed=run.seed, variant=run.variant)


def solve(spec: ProblemSpec, run: ResolvedRun) -> tuple[DiscreteSystem, np.ndarray, TransientSolution | None]:
    system = assemble(spec, run.config, run.dt)
    if not run.transient:
        return system, solve_steady(system), None
    solution = run_transient(system, spec, run.dt, run.T)
    return system, solution.final, solution


def _export_snapshots(spec: ProblemSpec, run: ResolvedRun, values: np.ndarray, solution, out: Path) -> list[Path]:
    operators = spec.operators("linear", run.config.gradient_scheme, run.config.rbf_c)
    centroids = spec.partition.centroids
    snapshots = [(0, values)] if solution is None else list(enumerate(solution.values))
    files = []
    for stamp, u in snapshots:
        _, gradient = centroid_fields(u, operators, centroids)
        title = f"case {run.case.case_id} {run.config.method} stamp {stamp}"
        files.append(export_field(spec.partition, u, gradient, out / f"field_t{stamp:04d}.vtk", title))
    return files


def run_case(request: RunRequest, settings: Settings | None = None) -> RunResult:
    """Assemble and solve one case, compute its error report and write the requested files."""

    settings = settings or get_settings()
    run = resolve(request, settings)
    started = time.perf_counter()
    spec = build_spec(run)
    system, values, solution = solve(spec, run)

    e0 = e1 = ebar0 = None
    if spec.has_exact:
        operators = spec.operators("linear", run.config.gradient_scheme, run.config.rbf_c)
        e0, e1 = error_norms(values, spec, operators, run.T or 0.0)
        if solution is not None:
            ebar0 = time_averaged_e0(solution, spec, operators)
    wall = time.perf_counter() - started if settings.record_wall_time else None

    structure = system.structure
    report = ErrorReportRead(
        case_id=run.case.case_id,
        variant=run.variant,
        method=run.config.method,
        n_points=spec.n,
        eta1=run.config.eta1,
        eta2=run.config.eta2,
        e0=e0,
        e1=e1,
        ebar0=ebar0,
        nband_k=structure.nband_k,
        nband_c=structure.nband_c,
        is_c_diagonal=structure.is_c_diagonal,
        wall_s=wall,
        config_hash=run.config_hash(),
    )
    logger.info(
        "Case %s/%s: n=%d e0=%s e1=%s ebar0=%s",
        report.case_id,
        report.method,
        report.n_points,
        "-" if e0 is None else f"{e0:.3e}",
        "-" if e1 is None else f"{e1:.3e}",
        "-" if ebar0 is None else f"{ebar0:.3e}",
    )

    files: list[Path] = []
    if request.out is not None:
        out = Path(request.out)
        files.append(write_results_csv(report, out / RESULTS_FILE))
        if request.vtk:
            files += _export_snapshots(spec, run, values, solution, out)
    return RunResult(report=report, spec=spec, system=system, values=values, transient=solution, files=files)


def _sweep_cell(spec: ProblemSpec, run: ResolvedRun, eta1: float, eta2: float) -> SweepCellRead:
    try:
        config = SolverConfig(**{**run.config.model_dump(), "eta1": eta1, "eta2": eta2})
        cell_run = replace(run, config=config)
        _, values, _ = solve(spec, cell_run)
        e0, _ = error_norms(values, spec, t=run.T or 0.0)
    except (FpmError, ValidationError, np.linalg.LinAlgError) as exc:
        logger.warning("Sweep cell eta1=%g eta2=%g failed: %s", eta1, eta2, exc)
        return SweepCellRead(eta1=eta1, eta2=eta2, e0=None, status="failed")
    if not np.isfinite(e0) or e0 > DIVERGED_E0:
        return SweepCellRead(eta1=eta1, eta2=eta2, e0=None, status="diverged")
    return SweepCellRead(eta1=eta1, eta2=eta2, e0=e0, status="ok")


def sweep_penalties(request: SweepRequest, settings: Settings | None = None) -> list[SweepCellRead]:
    """e0 over the (eta1, eta2) grid; failed cells are recorded, not raised."""

    run = resolve(request, settings)
    spec = build_spec(run)
    if not spec.has_exact:
        raise NoExactSolution(f"Case {run.case.case_id} has no exact solution to sweep against")
    cells = [_sweep_cell(spec, run, eta1, eta2) for eta1 in request.eta1 for eta2 in request.eta2]
    logger.info(
        "Sweep %s/%s: %d cells, %d ok",
        run.case.case_id,
        run.config.method,
        len(cells),
        sum(cell.status == "ok" for cell in cells),
    )
    return cells


# transient refinement studies start from a tenth of the catalog step
REFINEMENT_DT_FACTOR = 0.1


def refinement_dt(case: BenchmarkCase, base_points: int, points: int, base_dt: float | None = None) -> float | None:
    """Time step of one refinement level, shrunk in proportion to the point spacing."""

    if not case.transient:
        return None
    start = base_dt if base_dt is not None else REFINEMENT_DT_FACTOR * case.dt
    return start * (base_points / points) ** (1.0 / case.dim)


def refinement_study(request: RunRequest, levels: Sequence[int], settings: Settings | None = None) -> list[RunResult]:
    """Run ``request`` at every point count in ``levels``; transient cases refine dt with h."""

    if not levels:
        raise ConfigurationError("A refinement study needs at least one level")
    case = get_case(request.case)
    results = []
    for points in levels:
        dt = refinement_dt(case, levels[0], points, request.dt)
        level = request.model_copy(update={"points": points, "dt": dt})
        results.append(run_case(level, settings))
    logger.info(
        "Refinement %s/%s: %s",
        request.case,
        request.method,
        ", ".join(f"n={r.report.n_points} e0={r.report.e0}" for r in results),
    )
    return results
