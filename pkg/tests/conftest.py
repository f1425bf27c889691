from __future__ import annotations

import os
import tempfile
from pathlib import Path

# the ledger and CSV output must not depend on the developer's environment
_LEDGER_DIR = Path(tempfile.mkdtemp(prefix="fpm-tests-"))
os.environ.setdefault("FPM_DATABASE_URL", f"sqlite:///{_LEDGER_DIR / 'ledger.db'}")
os.environ.setdefault("FPM_RECORD_WALL_TIME", "false")
os.environ.setdefault("FPM_LOG_LEVEL", "WARNING")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from backend.app.assembly import ProblemSpec, dirichlet  # noqa: E402
from backend.app.geometry import (  # noqa: E402
    Box,
    build_structured_partition,
    build_voronoi_partition,
    sample_points,
)
from backend.app.materials import homogeneous  # noqa: E402

K2 = np.array([[2.0, 0.5], [0.5, 1.0]])
K3 = np.array([[2.0, 0.3, 0.1], [0.3, 1.5, 0.2], [0.1, 0.2, 1.0]])


def linear_field(x: np.ndarray, t: float = 0.0) -> np.ndarray:
    """u* = 1 + 2x - y (+ 0.5z)."""

    x = np.atleast_2d(x)
    u = 1.0 + 2.0 * x[:, 0] - x[:, 1]
    if x.shape[1] == 3:
        u = u + 0.5 * x[:, 2]
    return u


def linear_gradient(x: np.ndarray, t: float = 0.0) -> np.ndarray:
    x = np.atleast_2d(x)
    grad = [2.0, -1.0] if x.shape[1] == 2 else [2.0, -1.0, 0.5]
    return np.tile(grad, (len(x), 1))


@pytest.fixture
def unit_square() -> Box:
    return Box((0.0, 0.0), (1.0, 1.0))


@pytest.fixture
def quad_grid(unit_square):
    _, partition = build_structured_partition(unit_square, (3, 3), "quad")
    return partition


@pytest.fixture
def voronoi_20(unit_square):
    return build_voronoi_partition(sample_points(unit_square, 20, "random", seed=3), unit_square)


@pytest.fixture
def hex_grid():
    _, partition = build_structured_partition(Box.cube(1.0), (3, 3, 3), "hex")
    return partition


def patch_problem(partition, k=None) -> ProblemSpec:
    dim = partition.dim
    tensor = k if k is not None else (K2 if dim == 2 else K3)
    return ProblemSpec(
        partition=partition,
        material=homogeneous(tensor),
        boundary={"*": dirichlet(linear_field)},
        initial=lambda x: linear_field(x),
        exact=linear_field,
        exact_gradient=linear_gradient,
        label="patch",
    )
