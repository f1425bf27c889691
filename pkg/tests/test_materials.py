from __future__ import annotations

import numpy as np
import pytest

from backend.app.approximation import build_operators
from backend.app.errors import ConfigurationError, UnknownPreset
from backend.app.geometry import build_structured_partition, compute_supports
from backend.app.materials import (
    PRESETS,
    MaterialField,
    MaterialRegion,
    axis_graded,
    divergence_k,
    fg_preset,
    gradation,
    grad_k,
    homogeneous,
    piecewise,
    recommended_penalty_window,
)

K_HAT = np.array([[1.0, 0.5], [0.5, 2.0]])


def test_homogeneous_scalar_needs_a_dimension():
    with pytest.raises(ConfigurationError):
        homogeneous(2.0)
    material = homogeneous(2.0, rho=3.0, c=4.0, dim=3)
    x = np.zeros((5, 3))
    np.testing.assert_allclose(material.k(x), np.broadcast_to(2.0 * np.eye(3), (5, 3, 3)))
    np.testing.assert_allclose(material.rho_c(x), 12.0)
    assert material.is_isotropic(x)


def test_non_symmetric_tensor_is_rejected():
    with pytest.raises(ConfigurationError):
        homogeneous([[1.0, 0.2], [0.1, 1.0]])


def test_check_positive_flags_indefinite_conductivity():
    material = homogeneous([[1.0, 2.0], [2.0, 1.0]])
    with pytest.raises(ConfigurationError, match="positive-definite"):
        material.check_positive(np.array([[0.5, 0.5]]))
    homogeneous(K_HAT).check_positive(np.array([[0.5, 0.5]]))


@pytest.mark.parametrize("name", PRESETS)
def test_gradation_derivatives_match_finite_differences(name):
    f, df = gradation(name, 0.8, length=2.0)
    y = np.linspace(0.1, 1.9, 7)
    step = 1e-6
    np.testing.assert_allclose(df(y), (f(y + step) - f(y - step)) / (2 * step), rtol=1e-6)


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        gradation("cubic", 1.0)
    with pytest.raises(ConfigurationError):
        fg_preset("cubic", 1.0, K_HAT)


def test_fg_preset_scales_k_and_heat_capacity():
    material = fg_preset("exp1", 2.0, K_HAT)
    x = np.array([[0.3, 0.5]])
    np.testing.assert_allclose(material.k(x)[0], np.e * K_HAT)
    np.testing.assert_allclose(material.rho_c(x), [np.e])
    assert not material.is_isotropic(x)
    dk = material.dk_fn(x)[0]
    np.testing.assert_allclose(dk[1], 2.0 * np.e * K_HAT)
    np.testing.assert_allclose(dk[0], 0.0)


def test_axis_graded_only_changes_one_component():
    base = np.diag([2.0, 1.0, 1.5]) + 0.1 * (np.ones((3, 3)) - np.eye(3))
    material = axis_graded(base, (0, 1), axis=2, slope=0.5, length=10.0)
    k = material.k(np.array([10.0, 0.0, 4.0]))
    assert k[0, 1] == pytest.approx(0.1 * 1.2)
    assert k[1, 0] == pytest.approx(0.1 * 1.2)
    assert k[0, 2] == pytest.approx(0.1)
    assert k[0, 0] == pytest.approx(2.0)


def test_piecewise_samples_at_the_anchor():
    left = MaterialRegion(1.0, contains=lambda x: x[:, 0] < 0.5)
    material = piecewise([left], MaterialRegion(10.0, rho=2.0), dim=2)
    x = np.array([[0.2, 0.5], [0.8, 0.5]])
    np.testing.assert_allclose(material.k(x)[:, 0, 0], [1.0, 10.0])
    np.testing.assert_allclose(material.rho_c(x), [1.0, 2.0])
    # a quadrature point across the interface still sees its cell's material
    anchored = material.k(np.array([[0.55, 0.5]]), anchor=np.array([0.45, 0.5]))
    assert anchored[0, 0, 0] == pytest.approx(1.0)


def test_piecewise_regions_need_a_rule():
    with pytest.raises(ConfigurationError):
        piecewise([MaterialRegion(1.0)], MaterialRegion(2.0))


def test_grad_k_falls_back_to_the_operator(quad_grid):
    operators = build_operators(quad_grid, compute_supports(quad_grid))
    linear = MaterialField(
        dim=2,
        k_fn=lambda x: (1.0 + 2.0 * x[:, 0])[:, None, None] * np.eye(2),
        rho_fn=lambda x: np.ones(len(x)),
        c_fn=lambda x: np.ones(len(x)),
    )
    dk = grad_k(linear, operators[4], quad_grid.points)
    np.testing.assert_allclose(dk[0], 2.0 * np.eye(2), atol=1e-10)
    np.testing.assert_allclose(dk[1], 0.0, atol=1e-10)


def test_piecewise_divergence_sees_the_interface(unit_square):
    _, grid = build_structured_partition(unit_square, (4, 4), "quad")
    operators = build_operators(grid, compute_supports(grid, True), order="quadratic", scheme="rbf")
    upper = MaterialRegion(2.0, contains=lambda x: x[:, 1] > 0.5)
    material = piecewise([upper], MaterialRegion(1.0), dim=2)
    points = grid.points
    for op in operators.operators:
        div = divergence_k(material, op, points)
        samples = material.k(points[op.support])[:, 0, 0]
        if np.ptp(samples) == 0.0:
            np.testing.assert_allclose(div, 0.0, atol=1e-9)
        elif abs(points[op.home, 1] - 0.5) < 0.25:
            # k rises upward across y = 0.5
            assert div[1] > 0.0


def test_penalty_windows():
    assert recommended_penalty_window("fpm", 2).contains(1.0, 1e5)
    assert not recommended_penalty_window("fpm", 3).contains(1.0, 1e5)
    assert recommended_penalty_window("PG1", 2).contains(0.0, 1e5)
    with pytest.raises(ConfigurationError):
        recommended_penalty_window("fem", 2)
