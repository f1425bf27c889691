"""Command-line entry point: run benchmark cases, sweep penalties and inspect mesh files."""
from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from backend.app.config import configure_logging, get_settings
from backend.app.errors import ConfigurationError, FpmError
from backend.app.schemas import RunRequest, SweepRequest

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3

# flags that are not request fields
_CLI_ONLY = {"command", "config", "log_level", "record", "file"}


def read_config_file(path: Path) -> dict[str, str]:
    """Flatten an INI file; keys in later sections win."""

    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keep "T" distinct from "t"
    try:
        with path.open(encoding="utf-8") as handle:
            parser.read_string("[DEFAULT]\n" + handle.read(), source=str(path))
    except OSError as exc:
        raise ConfigurationError(f"Cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigurationError(f"Malformed config file {path}: {exc}") from exc
    values = dict(parser.defaults())
    for section in parser.sections():
        values.update(parser.items(section))
    return {key.replace("-", "_"): value for key, value in values.items() if key.replace("-", "_") not in _CLI_ONLY}


def parse_float_list(text: str | Sequence[float]) -> list[float]:
    if not isinstance(text, str):
        return [float(v) for v in text]
    try:
        return [float(item) for item in text.replace(";", ",").split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"Expected a comma-separated list of numbers, got '{text}'") from exc


def merge_options(file_values: dict[str, Any], args: argparse.Namespace) -> dict[str, Any]:
    merged = dict(file_values)
    merged.update({key: value for key, value in vars(args).items() if value is not None and key not in _CLI_ONLY})
    return merged


def _add_case_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--case", default=None, help="Catalog case id, e.g. 1.1 or 2.7.")
    parser.add_argument("--method", default=None, choices=("fpm", "pg1", "pg2", "pg3"))
    parser.add_argument("--variant", default=None, help="Material block and lateral sides for 1.3-1.6.")
    parser.add_argument("--points", type=int, default=None, help="Approximate number of Fragile Points.")
    parser.add_argument("--layout", default=None, choices=("uniform", "random"))
    parser.add_argument("--seed", type=int, default=None, help="Seed for random point clouds.")
    parser.add_argument("--dt", type=float, default=None, help="Backward Euler time step.")
    parser.add_argument("--T", type=float, default=None, help="Final time.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Meshless Fragile Points heat-conduction solver and benchmark harness."
    )
    parser.add_argument("--config", type=Path, default=None, help="INI file whose keys mirror the flags.")
    parser.add_argument("--log-level", default=None, help="Logging level (default from FPM_LOG_LEVEL).")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one benchmark case.")
    _add_case_arguments(run)
    run.add_argument("--eta1", type=float, default=None)
    run.add_argument("--eta2", type=float, default=None)
    run.add_argument("--rbf-c", dest="rbf_c", type=float, default=None)
    run.add_argument("--kbar", type=float, default=None)
    run.add_argument("--strong-dirichlet", dest="strong_dirichlet", action="store_true", default=None)
    run.add_argument("--out", type=Path, default=None, help="Directory for results.csv and VTK files.")
    run.add_argument("--vtk", action="store_true", default=None, help="Write field_t<stamp>.vtk snapshots.")
    run.add_argument("--record", action="store_true", help="Also store the run in the results ledger.")

    sweep = commands.add_parser("sweep", help="Tabulate e0 over a grid of penalty parameters.")
    _add_case_arguments(sweep)
    sweep.add_argument("--eta1", default=None, help="Comma-separated eta1 values.")
    sweep.add_argument("--eta2", default=None, help="Comma-separated eta2 values.")
    sweep.add_argument("--record", action="store_true", help="Also store the grid in the results ledger.")

    refine = commands.add_parser("refine", help="Run one case at several point counts, refining dt with h.")
    _add_case_arguments(refine)
    refine.add_argument("--levels", default=None, help="Comma-separated point counts, coarsest first.")

    info = commands.add_parser("mesh-info", help="Summarize a plain-text mesh file.")
    info.add_argument("file", type=Path)
    return parser


def _record(report=None, *, cells=None, request=None) -> None:
    from backend.app import crud
    from backend.app.db import SessionLocal, init_database

    init_database()
    with SessionLocal() as db:
        if report is not None:
            crud.record_run(db, report=report)
        else:
            crud.record_sweep(db, case_id=request.case, method=request.method, cells=cells)
    print("✅ Stored in the results ledger.")


def command_run(options: dict[str, Any], record: bool) -> int:
    from backend.app.services import run_case

    request = RunRequest.model_validate(options)
    print(f"➡️ Running case {request.case} with {request.method.upper()}...", flush=True)
    result = run_case(request)
    report = result.report
    print(json.dumps(report.model_dump(), indent=2))
    for path in result.files:
        print(f"✅ Wrote {path}")
    if record:
        _record(report)
    return EXIT_OK


def command_sweep(options: dict[str, Any], record: bool) -> int:
    from backend.app.services import sweep_penalties

    options = {**options}
    for key in ("eta1", "eta2"):
        if key in options:
            options[key] = parse_float_list(options[key])
    request = SweepRequest.model_validate(options)
    print(f"➡️ Sweeping {len(request.eta1)}x{len(request.eta2)} penalties on case {request.case}...", flush=True)
    cells = sweep_penalties(request)
    print(f"{'eta1':>10} {'eta2':>10} {'e0':>12}  status")
    for cell in cells:
        e0 = "-" if cell.e0 is None else f"{cell.e0:.4e}"
        print(f"{cell.eta1:>10g} {cell.eta2:>10g} {e0:>12}  {cell.status}")
    if record:
        _record(cells=cells, request=request)
    return EXIT_OK


def command_refine(options: dict[str, Any]) -> int:
    from backend.app.services import refinement_study

    options = {**options}
    levels = [int(n) for n in parse_float_list(options.pop("levels", None) or "100,400,1600")]
    request = RunRequest.model_validate(options)
    print(f"➡️ Refining case {request.case} over {len(levels)} levels...", flush=True)
    results = refinement_study(request, levels)
    print(f"{'points':>8} {'dt':>10} {'e0':>12}")
    for level, result in zip(levels, results):
        dt = result.transient.dt if result.transient is not None else None
        e0 = "-" if result.report.e0 is None else f"{result.report.e0:.4e}"
        print(f"{level:>8d} {'-' if dt is None else f'{dt:.3g}':>10} {e0:>12}")
    return EXIT_OK


def command_mesh_info(path: Path) -> int:
    from backend.app.ingestion import mesh_info

    path = path.expanduser().resolve()
    if not path.exists():
        raise ConfigurationError(f"Mesh file not found: {path}")
    print(json.dumps(mesh_info(path).model_dump(), indent=2))
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level or get_settings().log_level)
    try:
        if args.command == "mesh-info":
            return command_mesh_info(args.file)
        file_values = read_config_file(args.config) if args.config else {}
        options = merge_options(file_values, args)
        if args.command == "run":
            return command_run(options, args.record)
        if args.command == "refine":
            return command_refine(options)
        return command_sweep(options, args.record)
    except (ConfigurationError, ValidationError) as exc:
        print(f"❌ Configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FpmError as exc:
        print(f"❌ {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
