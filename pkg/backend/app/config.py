from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="FPM_", env_file=".env", env_file_encoding="utf-8")

    app_name: str = "Fragile Points Heat Conduction"
    database_url: str = Field(default="sqlite:///./fpm_results.db")
    results_dir: Path = Field(default=Path("./results"))
    log_level: str = Field(default="INFO")
    random_seed: int = Field(default=20210117)
    record_wall_time: bool = Field(default=True)
    default_eta1: float = Field(default=1.0, ge=0.0)
    default_eta2: float = Field(default=1.0e5, gt=0.0)
    rbf_shape_2d: float = Field(default=4.0, gt=0.0)
    rbf_shape_3d: float = Field(default=10.0, gt=0.0)


@lru_cache
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: str | int | None = None) -> None:
    """Install one stream handler on the root logger (idempotent)."""

    resolved = level if level is not None else get_settings().log_level
    root = logging.getLogger()
    if not any(getattr(handler, "_fpm", False) for handler in root.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._fpm = True  # type: ignore[attr-defined]
        root.addHandler(handler)
    root.setLevel(resolved if isinstance(resolved, int) else str(resolved).upper())
