from __future__ import annotations

import numpy as np
import pytest

from backend.app.approximation import (
    ShapeFunction,
    build_gfd,
    build_operators,
    build_rbf_dq,
    shape_eval,
    shape_gradient,
    transform_to_standard,
)
from backend.app.approximation.rbf_dq import multiquadric_derivatives
from backend.app.errors import ConfigurationError, DegenerateAxis, MissingOperator, RankDeficientSupport
from backend.app.geometry import compute_supports

HOME = np.array([0.3, 0.4])
RING = HOME + 0.1 * np.array(
    [[1.0, 0.0], [0.7, 0.8], [-0.2, 1.1], [-1.0, 0.1], [-0.6, -0.9], [0.1, -1.0], [0.9, -0.6], [0.4, 0.3]]
)


def affine(points: np.ndarray) -> np.ndarray:
    return 3.0 - 2.0 * points[:, 0] + 5.0 * points[:, 1]


def test_gfd_reproduces_affine_gradients():
    op = build_gfd(HOME, RING)
    values = affine(np.vstack([HOME, RING]))
    np.testing.assert_allclose(op.gradient @ values, [-2.0, 5.0], atol=1e-10)
    np.testing.assert_allclose(op.B.sum(axis=1), 0.0, atol=1e-9)


def test_gfd_rejects_thin_supports():
    with pytest.raises(RankDeficientSupport):
        build_gfd(HOME, RING[:1])
    collinear = HOME + np.array([[0.1, 0.1], [-0.2, -0.2], [0.3, 0.3]])
    with pytest.raises(RankDeficientSupport):
        build_gfd(HOME, collinear)


def test_transform_to_standard_bounds():
    xi, lengths = transform_to_standard(HOME, RING)
    assert np.abs(xi).max() == pytest.approx(1.0)
    np.testing.assert_allclose(np.abs(xi).max(axis=0), 1.0)
    np.testing.assert_allclose(lengths, np.abs(RING - HOME).max(axis=0))


def test_transform_to_standard_rejects_degenerate_axes():
    flat = np.array([[0.5, 0.4], [0.1, 0.4], [0.6, 0.4]])
    with pytest.raises(DegenerateAxis):
        transform_to_standard(HOME, flat)
    diagonal = HOME + np.array([[0.1, 0.2], [-0.1, -0.2]])
    with pytest.raises(DegenerateAxis):
        transform_to_standard(HOME, diagonal)


@pytest.mark.parametrize("order", ["linear", "quadratic"])
def test_rbf_dq_reproduces_affine_data(order):
    op = build_rbf_dq(HOME, RING, 4.0, order=order)
    values = affine(np.vstack([HOME, RING]))
    derivatives = op.B @ values
    np.testing.assert_allclose(derivatives[:2], [-2.0, 5.0], atol=1e-8)
    if order == "quadratic":
        assert op.B.shape == (5, len(RING) + 1)
        np.testing.assert_allclose(derivatives[2:], 0.0, atol=1e-8)
    else:
        assert op.B.shape == (2, len(RING) + 1)


def test_rbf_dq_second_derivative_on_a_uniform_stencil():
    # the linearly completed basis lands near 2.12 here
    grid = np.array([[i, j] for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)], dtype=float) * 0.1
    op = build_rbf_dq(np.zeros(2), grid, 4.0, order="quadratic")
    values = np.concatenate([[0.0], grid[:, 0] ** 2])
    u_x, _, u_xx, _, _ = op.B @ values
    assert abs(u_x) < 1e-10
    assert u_xx == pytest.approx(2.0, rel=0.1)


def test_gfd_on_a_cross_stencil():
    h = 0.05
    cross = np.array([[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
    op = build_gfd(np.zeros(2), cross)
    values = np.concatenate([[0.0], 5.0 * cross[:, 0] - cross[:, 1]])
    np.testing.assert_allclose(op.gradient @ values, [5.0, -1.0], atol=1e-12)


def test_transform_scales_each_axis_separately():
    xi, lengths = transform_to_standard(np.zeros(2), np.array([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]]))
    np.testing.assert_allclose(lengths, [2.0, 1.0])
    np.testing.assert_allclose(xi, [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


def test_shape_function_interpolates_home_and_affine_fields():
    op = build_gfd(HOME, RING, home_id=0, support_ids=np.arange(len(RING) + 1))
    shape = ShapeFunction(op)
    weights = shape_eval(shape, HOME)
    np.testing.assert_allclose(weights, np.eye(len(RING) + 1)[0], atol=1e-12)

    values = affine(np.vstack([HOME, RING]))
    x = HOME + np.array([0.03, -0.02])
    assert shape_eval(shape, x) @ values == pytest.approx(affine(x[None, :])[0])
    np.testing.assert_allclose(shape_gradient(shape, x) @ values, [-2.0, 5.0], atol=1e-10)
    several = np.array([HOME, x])
    assert shape_eval(shape, several).shape == (2, len(RING) + 1)


def test_operator_set_on_a_grid(quad_grid):
    supports = compute_supports(quad_grid)
    operators = build_operators(quad_grid, supports)
    assert len(operators) == quad_grid.n_cells
    values = affine(quad_grid.points)
    np.testing.assert_allclose(operators.gradients(values), np.tile([-2.0, 5.0], (9, 1)), atol=1e-10)
    assert operators.shape(4).support[0] == 4
    with pytest.raises(MissingOperator):
        operators[quad_grid.n_cells]


def test_quadratic_operators_need_rbf(quad_grid):
    with pytest.raises(ConfigurationError):
        build_operators(quad_grid, compute_supports(quad_grid, True), order="quadratic", scheme="gfd")
    operators = build_operators(quad_grid, compute_supports(quad_grid, True), order="quadratic", scheme="rbf")
    assert operators.c == 4.0
    assert all(op.B.shape[0] == 5 for op in operators.operators)


def test_rbf_dq_is_exact_on_its_own_span():
    c = 1.0
    xi, lengths = transform_to_standard(HOME, RING)
    nodes = np.vstack([np.zeros(2), xi])
    poly = np.vstack([np.ones(len(nodes)), nodes.T])
    lam = np.random.default_rng(5).normal(size=len(nodes))
    # enforce sum lam = 0 and sum lam xi = 0
    lam -= poly.T @ np.linalg.solve(poly @ poly.T, poly @ lam)

    psi = np.sqrt(np.sum((nodes[:, None, :] - nodes[None, :, :]) ** 2, axis=-1) + c**2)
    values = psi @ lam + 1.0 + 2.0 * nodes[:, 0] - nodes[:, 1]
    expected = multiquadric_derivatives(nodes, c) @ lam + np.array([2.0, -1.0, 0.0, 0.0, 0.0])
    expected /= np.array([lengths[0], lengths[1], lengths[0] ** 2, lengths[1] ** 2, lengths[0] * lengths[1]])

    op = build_rbf_dq(HOME, RING, c, order="quadratic")
    np.testing.assert_allclose(op.B @ values, expected, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize("scheme", ["gfd", "rbf"])
def test_weights_are_translation_invariant(scheme):
    shift = np.array([10.0, -7.0])
    if scheme == "gfd":
        here, there = build_gfd(HOME, RING), build_gfd(HOME + shift, RING + shift)
    else:
        here = build_rbf_dq(HOME, RING, 4.0, order="quadratic")
        there = build_rbf_dq(HOME + shift, RING + shift, 4.0, order="quadratic")
    assert np.abs(here.B - there.B).max() <= 1e-9 * np.abs(here.B).max()
