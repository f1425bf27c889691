from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from pydantic import ValidationError

from backend.app.approximation import shape_eval, shape_gradient
from backend.app.assembly import (
    ProblemSpec,
    SolverConfig,
    assemble,
    dirichlet,
    estimate_kbar,
    jump_and_average,
    neumann,
    symmetric,
)
from backend.app.errors import NonPositivePenalty, SingularSystem, SourcePointInsideDomain
from backend.app.geometry import Box, build_structured_partition, displace_points, with_points
from backend.app.materials import homogeneous
from backend.app.timeint import solve_steady

from .conftest import K2, linear_field, patch_problem

METHODS = ("fpm", "pg1", "pg2", "pg3")


def config_for(method: str, dim: int, **extra) -> SolverConfig:
    options: dict = {"method": method, "eta1": 1.0, "eta2": 1.0e5}
    if method == "pg3":
        # full-tensor test functions; the default diagonal policy misses off-diagonal k
        options.update(face_points=3 if dim == 2 else 6, pg3_local_k="full")
    if method == "pg1" and dim == 3:
        options["rbf_c"] = 3.0
    options.update(extra)
    return SolverConfig(**options)


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("fixture", ["quad_grid", "voronoi_20", "hex_grid"])
def test_linear_patch(method, fixture, request):
    partition = request.getfixturevalue(fixture)
    spec = patch_problem(partition)
    system = assemble(spec, config_for(method, partition.dim))
    u = solve_steady(system)
    np.testing.assert_allclose(u, linear_field(partition.points), atol=1e-7)


def test_singular_default_policy_misses_full_anisotropy(quad_grid):
    spec = patch_problem(quad_grid)
    u = solve_steady(assemble(spec, SolverConfig(method="pg3")))
    assert np.abs(u - linear_field(quad_grid.points)).max() > 1e-5


@pytest.mark.parametrize("fixture", ["quad_grid", "voronoi_20"])
def test_singular_default_policy_passes_orthotropic_patch(fixture, request):
    partition = request.getfixturevalue(fixture)
    spec = patch_problem(partition, k=np.diag([2.0, 0.5]))
    u = solve_steady(assemble(spec, SolverConfig(method="pg3", face_points=3)))
    np.testing.assert_allclose(u, linear_field(partition.points), atol=1e-7)


@pytest.mark.parametrize("method", METHODS)
def test_linear_patch_with_neumann_faces(method, quad_grid):
    # n . k grad u for u = 1 + 2x - y: 3.5 on x = 1, zero on y = 0 and y = 1
    spec = ProblemSpec(
        partition=quad_grid,
        material=homogeneous(K2),
        boundary={"xmin": dirichlet(linear_field), "xmax": neumann(3.5), "*": neumann(0.0)},
    )
    u = solve_steady(assemble(spec, config_for(method, 2)))
    np.testing.assert_allclose(u, linear_field(quad_grid.points), atol=1e-7)


@pytest.mark.parametrize("method", METHODS)
def test_constant_dirichlet_data(method, voronoi_20):
    spec = ProblemSpec(partition=voronoi_20, material=homogeneous(1.0, dim=2), boundary={"*": dirichlet(3.0)})
    u = solve_steady(assemble(spec, config_for(method, 2)))
    np.testing.assert_allclose(u, 3.0, atol=1e-8)


def test_galerkin_stiffness_is_symmetric_for_isotropic_media(voronoi_20):
    spec = ProblemSpec(partition=voronoi_20, material=homogeneous(2.0, dim=2), boundary={"*": dirichlet(0.0)})
    K = assemble(spec, SolverConfig(method="fpm")).K
    asymmetry = abs(K - K.T).max()
    assert asymmetry <= 1e-10 * abs(K).max()


def test_all_neumann_problem_is_singular(quad_grid):
    spec = ProblemSpec(partition=quad_grid, material=homogeneous(1.0, dim=2), boundary={"*": neumann(0.0)})
    system = assemble(spec, SolverConfig(method="pg2"))
    assert not system.anchored
    with pytest.raises(SingularSystem):
        solve_steady(system)


@pytest.mark.parametrize("method", ["fpm", "pg2"])
def test_symmetric_faces_match_zero_flux_for_isotropic_media(method, quad_grid):
    base = {"xmin": dirichlet(0.0), "xmax": dirichlet(1.0)}
    material = homogeneous(1.5, dim=2)
    sym = ProblemSpec(partition=quad_grid, material=material, boundary={**base, "*": symmetric()})
    flux = ProblemSpec(partition=quad_grid, material=material, boundary={**base, "*": neumann(0.0)})
    a = assemble(sym, SolverConfig(method=method))
    b = assemble(flux, SolverConfig(method=method))
    np.testing.assert_allclose(a.K.toarray(), b.K.toarray(), atol=1e-12)
    np.testing.assert_allclose(solve_steady(a), solve_steady(b), atol=1e-12)


def test_symmetric_faces_differ_from_zero_flux_for_anisotropic_media(quad_grid):
    base = {"xmin": dirichlet(0.0), "xmax": dirichlet(1.0)}
    sym = ProblemSpec(partition=quad_grid, material=homogeneous(K2), boundary={**base, "*": symmetric()})
    flux = sym.with_boundary(ymin=neumann(0.0), ymax=neumann(0.0))
    a = assemble(sym, SolverConfig(method="fpm")).K
    b = assemble(flux, SolverConfig(method="fpm")).K
    assert abs(a - b).max() > 1e-6


def test_capacity_is_diagonal_off_centroid(quad_grid):
    moved = displace_points(quad_grid, 0.4, seed=5)
    spec = patch_problem(moved, k=np.eye(2))
    for method in ("fpm", "pg1", "pg2"):
        structure = assemble(spec, config_for(method, 2), dt=0.01).structure
        assert structure.is_c_diagonal, method
        assert structure.nband_c == 1
    pg3 = assemble(spec, config_for("pg3", 2), dt=0.01).structure
    assert not pg3.is_c_diagonal


def test_capacity_uses_the_hosted_point(quad_grid):
    moved = displace_points(quad_grid, 0.4, seed=5)
    spec = ProblemSpec(partition=moved, material=homogeneous(1.0, dim=2), boundary={"*": dirichlet(0.0)})
    for method in ("fpm", "pg2"):
        C = assemble(spec, SolverConfig(method=method), dt=0.01).C
        np.testing.assert_allclose(C.diagonal(), moved.measures, rtol=1e-12)


def test_finite_volume_is_sparser_than_galerkin():
    _, partition = build_structured_partition(Box((0.0, 0.0), (1.0, 1.0)), (5, 5))
    spec = patch_problem(partition, k=np.eye(2))
    fpm = assemble(spec, config_for("fpm", 2)).structure
    pg2 = assemble(spec, config_for("pg2", 2)).structure
    assert pg2.nband_k < fpm.nband_k


def test_strong_dirichlet_rows(quad_grid):
    coords = quad_grid.points.copy()
    coords[0, 0] = 0.0  # onto the xmin face of its cell
    moved = with_points(quad_grid, coords)
    spec = patch_problem(moved)
    system = assemble(spec, config_for("fpm", 2, strong_dirichlet=True))
    assert system.strong_rows == (0,)
    row = system.K.getrow(0).toarray().ravel()
    np.testing.assert_allclose(row, np.eye(moved.n_cells)[0])
    np.testing.assert_allclose(solve_steady(system), linear_field(moved.points), atol=1e-7)


def test_jump_and_average(quad_grid):
    internal = quad_grid.internal_faces[0]
    external = quad_grid.external_faces[0]
    assert jump_and_average(internal, 3.0, 1.0) == (2.0, 2.0)
    assert jump_and_average(external, 7.0) == (7.0, 7.0)
    with pytest.raises(ValueError):
        jump_and_average(internal, 3.0)


def test_kbar_estimates(quad_grid):
    identity = ProblemSpec(partition=quad_grid, material=homogeneous(1.0, dim=2), boundary={"*": dirichlet(0.0)})
    assert estimate_kbar(identity, SolverConfig()) == pytest.approx(1.0)
    diag = ProblemSpec(partition=quad_grid, material=homogeneous(np.diag([2.0, 2.0])), boundary={"*": dirichlet(0.0)})
    assert estimate_kbar(diag, SolverConfig()) == pytest.approx(2.0)
    assert estimate_kbar(diag, SolverConfig(kbar=7.5)) == 7.5

    _, fine = build_structured_partition(Box((0.0, 0.0), (1.0, 1.0)), (10, 10))
    transient = ProblemSpec(partition=fine, material=homogeneous(1.0, dim=2), boundary={"*": dirichlet(0.0)})
    assert estimate_kbar(transient, SolverConfig(), dt=0.001) == pytest.approx(10.0)


def test_penalty_validation(quad_grid):
    with pytest.raises(ValidationError):
        SolverConfig(eta1=-1.0)
    with pytest.raises(ValidationError):
        SolverConfig(eta2=0.0)
    with pytest.raises(ValidationError):
        SolverConfig(face_points=11)
    spec = patch_problem(quad_grid)
    with pytest.raises(NonPositivePenalty):
        assemble(spec, SolverConfig.model_construct(method="fpm", eta1=-1.0, eta2=1.0e5))


def test_singular_source_point_must_be_outside(quad_grid):
    spec = patch_problem(quad_grid)
    with pytest.raises(SourcePointInsideDomain):
        assemble(spec, SolverConfig(method="pg3", pg3_source_point=(0.5, 0.5)))


def test_transient_systems_are_well_formed(voronoi_20):
    spec = patch_problem(voronoi_20, k=np.eye(2))
    for method in METHODS:
        system = assemble(spec, config_for(method, 2), dt=0.01)
        assert isinstance(system.C, sp.csc_matrix)
        assert system.C.shape == (20, 20)
        assert system.kbar >= 1.0
        if method in ("fpm", "pg1"):
            assert system.C.diagonal().min() > 0.0


def dense_rows(spec: ProblemSpec):
    """N and grad N of every cell's linear trial function as rows over all n points."""

    operators = spec.operators("linear")

    def N(i, x):
        shape = operators.shape(i)
        row = np.zeros(spec.n)
        row[shape.support] = shape_eval(shape, x)
        return row

    def G(i, x):
        shape = operators.shape(i)
        rows = np.zeros((spec.dim, spec.n))
        rows[:, shape.support] = shape_gradient(shape, x)
        return rows

    return N, G


@pytest.mark.parametrize("method", ["fpm", "pg2"])
def test_stiffness_matches_a_dense_recomputation(method, quad_grid):
    eta1, eta2 = 1.0, 50.0
    spec = ProblemSpec(partition=quad_grid, material=homogeneous(K2), boundary={"*": dirichlet(0.0)})
    system = assemble(spec, SolverConfig(method=method, eta1=eta1, eta2=eta2, kbar=1.0))
    N, G = dense_rows(spec)
    points = quad_grid.points
    expected = np.zeros((spec.n, spec.n))

    if method == "fpm":
        for cell in quad_grid.cells:
            i = cell.point
            grad = G(i, points[i])
            expected += cell.measure * grad.T @ K2 @ grad
    for face in quad_grid.faces:
        a, n, x, w = face.owner, face.normal, face.centroid, face.area
        if face.is_internal:
            b = face.neighbor
            jump = N(a, x) - N(b, x)
            average = 0.5 * (n @ K2 @ G(a, x) + n @ K2 @ G(b, x))
            if method == "fpm":
                penalty = eta1 / face.h * np.outer(jump, jump)
                expected += w * (-np.outer(jump, average) - np.outer(average, jump) + penalty)
            else:
                row = w * (-average + eta1 / face.h * jump)
                expected[a] += row
                expected[b] -= row
        else:
            value, flux = N(a, x), n @ K2 @ G(a, x)
            if method == "fpm":
                expected += w * (-np.outer(value, flux) - np.outer(flux, value) + eta2 / face.h * np.outer(value, value))
            else:
                expected[a] += w * (-flux + eta2 / face.h * value)

    assert quad_grid.n_cells <= 9
    np.testing.assert_allclose(system.K.toarray(), expected, rtol=0.0, atol=1e-6 * np.abs(expected).max())
