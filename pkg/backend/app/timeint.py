"""Steady solves and Backward Euler time marching of C du/dt + K u = q(t)."""
from __future__ import annotations

import logging
import weakref
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .assembly import DiscreteSystem, ProblemSpec
from .errors import ConfigurationError, FactorizationFailure, SingularSystem

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1.0e-9

_factor_cache: weakref.WeakKeyDictionary[DiscreteSystem, dict[float, object]] = weakref.WeakKeyDictionary()


def _factorize(matrix: sp.spmatrix, what: str):
    try:
        return splu(sp.csc_matrix(matrix))
    except RuntimeError as exc:
        if "singular" in str(exc).lower():
            raise SingularSystem(f"{what} is singular: {exc}") from exc
        raise FactorizationFailure(f"Could not factorize {what}: {exc}") from exc
    except (ValueError, MemoryError) as exc:
        raise FactorizationFailure(f"Could not factorize {what}: {exc}") from exc


def _relative_residual(matrix: sp.spmatrix, u: np.ndarray, rhs: np.ndarray) -> float:
    scale = max(float(np.abs(rhs).max(initial=0.0)), float(np.abs(matrix @ u).max(initial=0.0)), 1.0e-300)
    return float(np.abs(matrix @ u - rhs).max(initial=0.0)) / scale


def solve_steady(system: DiscreteSystem, t: float = 0.0) -> np.ndarray:
    """Solve K u = q(t) by sparse LU with one step of iterative refinement."""

    if not system.anchored:
        raise SingularSystem("No Dirichlet or Robin boundary fixes the temperature level")
    lu = _factorize(system.K, "K")
    q = system.q(t)
    u = lu.solve(q)
    if not np.all(np.isfinite(u)):
        raise SingularSystem("Steady solve produced non-finite temperatures")
    residual = _relative_residual(system.K, u, q)
    if residual >= RESIDUAL_TOL:
        u = u + lu.solve(q - system.K @ u)
        residual = _relative_residual(system.K, u, q)
    if residual >= RESIDUAL_TOL:
        raise FactorizationFailure(f"Steady residual {residual:.3e} exceeds {RESIDUAL_TOL:g}")
    logger.info("Steady %s solve: n=%d, residual=%.2e", system.method, system.n, residual)
    return u


def _implicit_factor(system: DiscreteSystem, dt: float):
    per_step = _factor_cache.setdefault(system, {})
    if dt not in per_step:
        per_step[dt] = _factorize(system.C / dt + system.K, "C/dt + K")
        logger.debug("Factorized C/dt + K for dt=%g", dt)
    return per_step[dt]


def step_backward_euler(system: DiscreteSystem, u_n: np.ndarray, t_n: float, dt: float) -> np.ndarray:
    """(C/dt + K) u_{n+1} = (C/dt) u_n + q(t_n + dt)."""

    if dt <= 0.0:
        raise ConfigurationError(f"Time step must be positive, got {dt}")
    lu = _implicit_factor(system, dt)
    rhs = system.C @ np.asarray(u_n, dtype=float) / dt + system.q(t_n + dt)
    u = lu.solve(rhs)
    if not np.all(np.isfinite(u)):
        raise FactorizationFailure(f"Backward Euler step at t={t_n + dt:g} produced non-finite values")
    return u


@dataclass(frozen=True, eq=False)
class TransientSolution:
    times: np.ndarray
    values: np.ndarray
    method: str
    dt: float

    def __post_init__(self) -> None:
        if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0.0):
            raise ValueError("Time stamps must start at 0 and increase strictly")
        if self.values.shape[0] != len(self.times):
            raise ValueError("One snapshot per time stamp is required")

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    def at(self, t: float) -> np.ndarray:
        """Nodal temperatures at t, linearly interpolated between snapshots."""

        if t < 0.0 or t > self.times[-1] * (1.0 + 1.0e-12):
            raise ValueError(f"t={t} lies outside [0, {self.times[-1]}]")
        if len(self.times) == 1:
            return self.values[0]
        k = min(max(int(np.searchsorted(self.times, t, side="right")) - 1, 0), len(self.times) - 2)
        t0, t1 = self.times[k], self.times[k + 1]
        s = min(max((t - t0) / (t1 - t0), 0.0), 1.0)
        return (1.0 - s) * self.values[k] + s * self.values[k + 1]

    def history(self, point: int) -> np.ndarray:
        return self.values[:, point]


def run_transient(
    system: DiscreteSystem,
    spec: ProblemSpec,
    dt: float,
    T: float,
    u0: np.ndarray | None = None,
) -> TransientSolution:
    """March from u(x, 0) to T; a final partial step lands exactly on T."""

    if dt <= 0.0:
        raise ConfigurationError(f"Time step must be positive, got {dt}")
    if T < dt * (1.0 - 1.0e-12):
        raise ConfigurationError(f"Final time {T} is shorter than one step {dt}")
    n_steps = int(np.ceil(T / dt - 1.0e-9))
    times = np.minimum(dt * np.arange(n_steps + 1), T)
    times[-1] = T

    steps = np.full(n_steps, dt)
    remainder = T - (n_steps - 1) * dt
    if abs(remainder - dt) > 1.0e-9 * dt:
        steps[-1] = remainder

    u = spec.initial_values() if u0 is None else np.asarray(u0, dtype=float).copy()
    values = np.empty((n_steps + 1, system.n))
    values[0] = u
    for step in range(n_steps):
        u = step_backward_euler(system, u, float(times[step]), float(steps[step]))
        values[step + 1] = u
    logger.info("Transient %s run: %d steps of dt=%g to T=%g", system.method, n_steps, dt, T)
    return TransientSolution(times=times, values=values, method=system.method, dt=dt)
