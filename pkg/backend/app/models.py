from __future__ import annotations

from datetime import datetime, timezone

from sqlalchemy import Boolean, DateTime, Float, Integer, String
from sqlalchemy.orm import Mapped, mapped_column

from .db import Base


def _now() -> datetime:
    return datetime.now(timezone.utc)


class BenchmarkRun(Base):
    __tablename__ = "benchmark_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, index=True)
    case_id: Mapped[str] = mapped_column(String(16), nullable=False, index=True)
    variant: Mapped[str | None] = mapped_column(String(64), nullable=True)
    method: Mapped[str] = mapped_column(String(8), nullable=False, index=True)
    n_points: Mapped[int] = mapped_column(Integer, nullable=False)
    eta1: Mapped[float] = mapped_column(Float, nullable=False)
    eta2: Mapped[float] = mapped_column(Float, nullable=False)
    e0: Mapped[float | None] = mapped_column(Float, nullable=True)
    e1: Mapped[float | None] = mapped_column(Float, nullable=True)
    ebar0: Mapped[float | None] = mapped_column(Float, nullable=True)
    nband_k: Mapped[int] = mapped_column(Integer, nullable=False)
    nband_c: Mapped[int] = mapped_column(Integer, nullable=False)
    is_c_diagonal: Mapped[bool] = mapped_column(Boolean, nullable=False, default=False)
    wall_s: Mapped[float | None] = mapped_column(Float, nullable=True)
    config_hash: Mapped[str] = mapped_column(String(32), nullable=False, index=True)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), nullable=False, default=_now)


class SweepCell(Base):
    __tablename__ = "sweep_cells"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, index=True)
    case_id: Mapped[str] = mapped_column(String(16), nullable=False, index=True)
    method: Mapped[str] = mapped_column(String(8), nullable=False)
    eta1: Mapped[float] = mapped_column(Float, nullable=False)
    eta2: Mapped[float] = mapped_column(Float, nullable=False)
    e0: Mapped[float | None] = mapped_column(Float, nullable=True)
    status: Mapped[str] = mapped_column(String(16), nullable=False)
    created_at: Mapped[datetime] = mapped_column(DateTime(timezone=True), nullable=False, default=_now)
