from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp

from ..geometry import Partition
from .problem import DataFn

logger = logging.getLogger(__name__)


class TripletBuilder:
    """Collects (row, col, value) contributions of a sparse matrix."""

    def __init__(self, n: int) -> None:
        self.n = n
        self._rows: list[np.ndarray] = []
        self._cols: list[np.ndarray] = []
        self._vals: list[np.ndarray] = []

    def add_row(self, row: int, cols: np.ndarray, values: np.ndarray) -> None:
        cols = np.asarray(cols, dtype=np.int64)
        self._rows.append(np.full(len(cols), row, dtype=np.int64))
        self._cols.append(cols)
        self._vals.append(np.asarray(values, dtype=float).ravel())

    def add_block(self, rows: np.ndarray, cols: np.ndarray, block: np.ndarray) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        R, Cc = np.meshgrid(rows, cols, indexing="ij")
        self._rows.append(R.ravel())
        self._cols.append(Cc.ravel())
        self._vals.append(np.asarray(block, dtype=float).ravel())

    def discard_rows(self, rows: Iterable[int]) -> None:
        dropped = np.fromiter(rows, dtype=np.int64)
        if not len(dropped) or not self._rows:
            return
        keep = [~np.isin(r, dropped) for r in self._rows]
        self._rows = [r[k] for r, k in zip(self._rows, keep)]
        self._cols = [c[k] for c, k in zip(self._cols, keep)]
        self._vals = [v[k] for v, k in zip(self._vals, keep)]

    def build(self) -> sp.csc_matrix:
        """CSC matrix with duplicates summed, exact zeros dropped and sorted indices."""

        if self._rows:
            rows = np.concatenate(self._rows)
            cols = np.concatenate(self._cols)
            vals = np.concatenate(self._vals)
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
            vals = np.zeros(0)
        keep = vals != 0.0
        matrix = sp.coo_matrix((vals[keep], (rows[keep], cols[keep])), shape=(self.n, self.n)).tocsc()
        matrix.sum_duplicates()
        matrix.sort_indices()
        return matrix


@dataclass(eq=False)
class _LoadGroup:
    fn: DataFn
    points: list[np.ndarray] = field(default_factory=list)
    rows: list[np.ndarray] = field(default_factory=list)
    cols: list[np.ndarray] = field(default_factory=list)
    vals: list[np.ndarray] = field(default_factory=list)
    count: int = 0


class LoadAssembler:
    """Sparse load operators applied to data sampled at fixed points.

    Each data function (source, Dirichlet value, Neumann flux, Robin h*u_R)
    gets its own group; ``q(t)`` samples every function once and multiplies.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self._groups: dict[int, _LoadGroup] = {}
        self._operators: list[tuple[DataFn, np.ndarray, sp.csr_matrix]] | None = None

    def add(self, rows: np.ndarray, point: np.ndarray, coefficients: np.ndarray, fn: DataFn | None) -> None:
        """q[rows] += coefficients * fn(point, t)."""

        if fn is None:
            return
        group = self._groups.setdefault(id(fn), _LoadGroup(fn))
        rows = np.atleast_1d(np.asarray(rows, dtype=np.int64))
        group.points.append(np.asarray(point, dtype=float)[None, :])
        group.rows.append(rows)
        group.cols.append(np.full(len(rows), group.count, dtype=np.int64))
        group.vals.append(np.broadcast_to(np.asarray(coefficients, dtype=float), rows.shape).copy())
        group.count += 1
        self._operators = None

    def discard_rows(self, rows: Iterable[int]) -> None:
        dropped = np.fromiter(rows, dtype=np.int64)
        if not len(dropped):
            return
        for group in self._groups.values():
            group.vals = [np.where(np.isin(r, dropped), 0.0, v) for r, v in zip(group.rows, group.vals)]
        self._operators = None

    def finalize(self) -> None:
        operators = []
        for group in self._groups.values():
            if not group.count:
                continue
            rows = np.concatenate(group.rows)
            cols = np.concatenate(group.cols)
            vals = np.concatenate(group.vals)
            keep = vals != 0.0
            op = sp.coo_matrix((vals[keep], (rows[keep], cols[keep])), shape=(self.n, group.count)).tocsr()
            operators.append((group.fn, np.vstack(group.points), op))
        self._operators = operators

    def __call__(self, t: float) -> np.ndarray:
        if self._operators is None:
            self.finalize()
        q = np.zeros(self.n)
        for fn, points, op in self._operators or ():
            if op.nnz:
                q += op @ np.asarray(fn(points, t), dtype=float)
        return q

    @property
    def n_terms(self) -> int:
        return sum(group.count for group in self._groups.values())


class StructureReport(NamedTuple):
    nband_k: int
    nband_c: int
    is_c_diagonal: bool


def _band(matrix: sp.spmatrix) -> int:
    copy = sp.csc_matrix(matrix, copy=True)
    copy.eliminate_zeros()
    if copy.shape[1] == 0:
        return 0
    return int(np.diff(copy.indptr).max())


def structure_report(system: DiscreteSystem) -> StructureReport:
    """Maximum nonzeros per column of K and C, and whether C is diagonal."""

    C = sp.csc_matrix(system.C, copy=True)
    C.eliminate_zeros()
    offdiag = C - sp.diags(C.diagonal())
    offdiag.eliminate_zeros()
    return StructureReport(_band(system.K), _band(C), offdiag.nnz == 0)


@dataclass(frozen=True, eq=False)
class DiscreteSystem:
    """C du/dt + K u = q(t) on the hosted points; row/column i is point i."""

    C: sp.csc_matrix
    K: sp.csc_matrix
    loads: LoadAssembler
    method: str
    partition: Partition
    kbar: float
    anchored: bool
    strong_rows: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return self.K.shape[0]

    def q(self, t: float = 0.0) -> np.ndarray:
        return self.loads(t)

    @property
    def structure(self) -> StructureReport:
        return structure_report(self)
