from __future__ import annotations

from fastapi import APIRouter, Depends
from sqlalchemy.orm import Session

from .. import crud, schemas
from ..db import get_db, init_database
from ..services import list_cases, run_case, sweep_penalties

router = APIRouter()


@router.on_event("startup")
def on_startup() -> None:
    init_database()


@router.get("/cases", response_model=list[schemas.CaseSummary])
def get_cases() -> list[schemas.CaseSummary]:
    return list_cases()


@router.post("/runs", response_model=schemas.BenchmarkRunRead)
def create_run(request: schemas.RunRequest, db: Session = Depends(get_db)) -> schemas.BenchmarkRunRead:
    # files are a CLI concern; the service only writes to the ledger
    result = run_case(request.model_copy(update={"out": None, "vtk": False}))
    return crud.record_run(db, report=result.report)


@router.get("/runs", response_model=list[schemas.BenchmarkRunRead])
def get_runs(
    case_id: str | None = None,
    method: schemas.Method | None = None,
    limit: int = 100,
    db: Session = Depends(get_db),
) -> list[schemas.BenchmarkRunRead]:
    return crud.list_runs(db, case_id=case_id, method=method, limit=limit)


@router.post("/sweeps", response_model=list[schemas.SweepCellRead])
def create_sweep(request: schemas.SweepRequest, db: Session = Depends(get_db)) -> list[schemas.SweepCellRead]:
    cells = sweep_penalties(request)
    return crud.record_sweep(db, case_id=request.case, method=request.method, cells=cells)
