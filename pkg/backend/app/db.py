"""Engine and sessions of the results ledger."""
from collections.abc import Iterator

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker

from .config import get_settings


class Base(DeclarativeBase):
    pass


def make_engine(url: str) -> Engine:
    # sqlite connections are handed across FastAPI worker threads
    connect_args = {"check_same_thread": False} if url.startswith("sqlite") else {}
    return create_engine(url, connect_args=connect_args)


engine = make_engine(get_settings().database_url)
SessionLocal = sessionmaker(bind=engine, autoflush=False)


def get_db() -> Iterator[Session]:
    with SessionLocal() as db:
        yield db


def init_database(bind: Engine | None = None) -> None:
    """Create the ledger tables if they do not already exist."""

    from . import models  # noqa: F401 (registers the tables)

    Base.metadata.create_all(bind=bind or engine)
