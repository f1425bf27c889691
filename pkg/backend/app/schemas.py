from __future__ import annotations

from datetime import datetime
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Method = Literal["fpm", "pg1", "pg2", "pg3"]


class MeshNode(BaseModel):
    id: int
    coords: tuple[float, ...]


class MeshElement(BaseModel):
    id: int
    type: Literal["tri", "quad", "tet", "hex"]
    nodes: list[int]


class MeshBoundary(BaseModel):
    segment: str
    nodes: list[int]
    kind: Literal["D", "N", "R", "S"]


class MeshDocument(BaseModel):
    dim: Literal[2, 3]
    nodes: list[MeshNode] = []
    elements: list[MeshElement] = []
    boundary: list[MeshBoundary] = []


class MeshInfo(BaseModel):
    dim: int
    n_points: int
    n_internal_faces: int
    n_external_faces: int
    measure: float
    segments: list[str] = []
    mean_h: float


class RunRequest(BaseModel):
    """One benchmark run; every field mirrors a CLI flag / config-file key."""

    model_config = ConfigDict(extra="forbid")

    case: str
    method: Method
    variant: str | None = None
    points: int | None = Field(default=None, ge=1)
    layout: Literal["uniform", "random"] | None = None
    seed: int | None = None
    eta1: float | None = Field(default=None, ge=0.0)
    eta2: float | None = Field(default=None, gt=0.0)
    dt: float | None = Field(default=None, gt=0.0)
    T: float | None = Field(default=None, gt=0.0)
    rbf_c: float | None = Field(default=None, gt=0.0)
    kbar: float | None = Field(default=None, gt=0.0)
    strong_dirichlet: bool | None = None
    out: Path | None = None
    vtk: bool = False


class SweepRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    case: str
    method: Method
    variant: str | None = None
    eta1: list[float] = Field(min_length=1)
    eta2: list[float] = Field(min_length=1)
    points: int | None = Field(default=None, ge=1)
    layout: Literal["uniform", "random"] | None = None
    seed: int | None = None
    dt: float | None = Field(default=None, gt=0.0)
    T: float | None = Field(default=None, gt=0.0)


class ErrorReportRead(BaseModel):
    case_id: str
    variant: str | None = None
    method: str
    n_points: int
    eta1: float
    eta2: float
    e0: float | None = None
    e1: float | None = None
    ebar0: float | None = None
    nband_k: int
    nband_c: int
    is_c_diagonal: bool
    wall_s: float | None = None
    config_hash: str


class BenchmarkRunRead(ErrorReportRead):
    model_config = ConfigDict(from_attributes=True)

    id: int
    created_at: datetime


class SweepCellRead(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    eta1: float
    eta2: float
    e0: float | None = None
    status: str


class CaseSummary(BaseModel):
    case_id: str
    title: str
    dim: int
    transient: bool
    has_exact: bool
    default_points: int
