from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp

from backend.app.assembly import ProblemSpec, SolverConfig, assemble, dirichlet
from backend.app.assembly.system import DiscreteSystem, LoadAssembler
from backend.app.errors import ConfigurationError
from backend.app.materials import homogeneous
from backend.app.timeint import (
    TransientSolution,
    _factor_cache,
    run_transient,
    solve_steady,
    step_backward_euler,
)


def scalar_system(partition, lam: float) -> DiscreteSystem:
    return DiscreteSystem(
        C=sp.csc_matrix([[1.0]]),
        K=sp.csc_matrix([[lam]]),
        loads=LoadAssembler(1),
        method="fpm",
        partition=partition,
        kbar=1.0,
        anchored=True,
    )


def heat_problem(partition, initial: float = 0.0, wall: float = 1.0) -> ProblemSpec:
    return ProblemSpec(
        partition=partition,
        material=homogeneous(1.0, dim=2),
        boundary={"*": dirichlet(wall)},
        initial=initial,
    )


def test_backward_euler_on_a_scalar_equation(quad_grid):
    system = scalar_system(quad_grid, 3.0)
    u = step_backward_euler(system, np.array([2.0]), 0.0, 0.1)
    assert u[0] == pytest.approx(2.0 / 1.3)
    assert step_backward_euler(system, np.zeros(1), 0.0, 0.1)[0] == 0.0
    with pytest.raises(ConfigurationError):
        step_backward_euler(system, u, 0.0, 0.0)


def test_time_stamps_end_on_the_final_time(quad_grid):
    system = scalar_system(quad_grid, 1.0)
    spec = heat_problem(quad_grid)
    solution = run_transient(system, spec, 0.3, 1.0, u0=np.ones(1))
    np.testing.assert_allclose(solution.times, [0.0, 0.3, 0.6, 0.9, 1.0])
    expected = [1.0, 1 / 1.3, 1 / 1.3**2, 1 / 1.3**3, 1 / (1.3**3 * 1.1)]
    np.testing.assert_allclose(solution.history(0), expected)
    short, full = sorted(_factor_cache[system])
    assert full == 0.3
    assert short == pytest.approx(0.1)

    even = run_transient(scalar_system(quad_grid, 1.0), spec, 0.25, 1.0, u0=np.ones(1))
    np.testing.assert_allclose(even.times, [0.0, 0.25, 0.5, 0.75, 1.0])


def test_run_transient_rejects_bad_steps(quad_grid):
    system = scalar_system(quad_grid, 1.0)
    spec = heat_problem(quad_grid)
    with pytest.raises(ConfigurationError):
        run_transient(system, spec, 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        run_transient(system, spec, 0.5, 0.2)


def test_equilibrium_is_preserved(quad_grid):
    spec = heat_problem(quad_grid, initial=2.0, wall=2.0)
    system = assemble(spec, SolverConfig(method="fpm"), dt=0.05)
    solution = run_transient(system, spec, 0.05, 0.5)
    np.testing.assert_allclose(solution.values, 2.0, atol=1e-8)


@pytest.mark.parametrize("method", ["fpm", "pg2"])
def test_transient_relaxes_to_the_steady_state(method, quad_grid):
    spec = heat_problem(quad_grid)
    system = assemble(spec, SolverConfig(method=method), dt=0.05)
    solution = run_transient(system, spec, 0.05, 2.0)
    np.testing.assert_allclose(solution.values[0], 0.0)
    np.testing.assert_allclose(solution.final, solve_steady(system), atol=1e-4)
    assert len(_factor_cache[system]) == 1


def test_interpolation_between_snapshots(quad_grid):
    solution = TransientSolution(
        times=np.array([0.0, 1.0, 2.0]),
        values=np.array([[0.0, 1.0], [2.0, 3.0], [4.0, 7.0]]),
        method="fpm",
        dt=1.0,
    )
    np.testing.assert_allclose(solution.at(0.5), [1.0, 2.0])
    np.testing.assert_allclose(solution.at(2.0), [4.0, 7.0])
    np.testing.assert_allclose(solution.history(1), [1.0, 3.0, 7.0])
    with pytest.raises(ValueError):
        solution.at(2.5)
    with pytest.raises(ValueError):
        TransientSolution(times=np.array([0.0, 0.0]), values=np.zeros((2, 1)), method="fpm", dt=1.0)
