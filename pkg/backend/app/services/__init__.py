"""Benchmark harness: case catalog, reference solutions, error norms, runs and exports."""
from .catalog import CATALOG, BenchmarkCase, get_case, list_cases
from .export import export_field, write_results_csv
from .norms import ErrorNorms, error_norms, time_averaged_e0
from .runner import RunResult, refinement_study, run_case, sweep_penalties

__all__ = [
    "CATALOG",
    "BenchmarkCase",
    "ErrorNorms",
    "RunResult",
    "error_norms",
    "export_field",
    "get_case",
    "list_cases",
    "refinement_study",
    "run_case",
    "sweep_penalties",
    "time_averaged_e0",
    "write_results_csv",
]
