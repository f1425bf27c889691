from __future__ import annotations

from collections.abc import Iterable

from sqlalchemy import select
from sqlalchemy.orm import Session

from . import models, schemas


def record_run(db: Session, *, report: schemas.ErrorReportRead) -> models.BenchmarkRun:
    """Insert a run, replacing any earlier run with the same case, method and config hash."""

    statement = select(models.BenchmarkRun).where(
        models.BenchmarkRun.case_id == report.case_id,
        models.BenchmarkRun.method == report.method,
        models.BenchmarkRun.config_hash == report.config_hash,
    )
    for stale in db.execute(statement).scalars():
        db.delete(stale)
    db_run = models.BenchmarkRun(**report.model_dump())
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    return db_run


def list_runs(
    db: Session, *, case_id: str | None = None, method: str | None = None, limit: int = 100
) -> list[models.BenchmarkRun]:
    statement = select(models.BenchmarkRun).order_by(models.BenchmarkRun.id.desc()).limit(limit)
    if case_id is not None:
        statement = statement.where(models.BenchmarkRun.case_id == case_id)
    if method is not None:
        statement = statement.where(models.BenchmarkRun.method == method)
    return list(db.execute(statement).scalars())


def record_sweep(
    db: Session, *, case_id: str, method: str, cells: Iterable[schemas.SweepCellRead]
) -> list[models.SweepCell]:
    db_cells = [
        models.SweepCell(case_id=case_id, method=method, eta1=c.eta1, eta2=c.eta2, e0=c.e0, status=c.status)
        for c in cells
    ]
    db.add_all(db_cells)
    db.commit()
    for db_cell in db_cells:
        db.refresh(db_cell)
    return db_cells
