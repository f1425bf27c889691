"""Linearly complete multiquadric RBF differential quadrature.

The interpolant on the scaled support is

    u(xi) = sum_i lambda_i psi_i(xi) + zeta_0 + zeta . xi,   psi_i = sqrt(|xi - xi_i|^2 + c^2)

with the moment conditions sum lambda_i = 0 and sum lambda_i xi_i = 0. The
conditions are eliminated by expressing the multipliers of a simplex of
``dim + 1`` nodes through the others, which leaves ``m + 1`` basis functions
g_j. With G[j, k] = g_j(xi_k), the derivative weights at the home point are
B_xi = (D g(0)) G^-T, rescaled to physical derivatives by the support lengths.
"""
from __future__ import annotations

import logging

import numpy as np
import scipy.linalg

from ..errors import InsufficientSupport, SingularBasis
from .operator import DERIVATIVE_ROWS, SECOND_PAIRS, DqOperator, Order
from .scaling import transform_to_standard

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1.0e12


def multiquadric_derivatives(centers: np.ndarray, c: float, at: np.ndarray | None = None) -> np.ndarray:
    """Rows of D applied to every multiquadric centered at ``centers``.

    Evaluated at ``at`` (default: the origin); shape (rows of D, n centers).
    """

    dim = centers.shape[1]
    point = np.zeros(dim) if at is None else np.asarray(at, dtype=float)
    delta = point - centers
    psi = np.sqrt(np.sum(delta**2, axis=1) + c**2)
    rows = [delta[:, a] / psi for a in range(dim)]
    for a, b in SECOND_PAIRS[dim]:
        kron = 1.0 if a == b else 0.0
        rows.append(kron / psi - delta[:, a] * delta[:, b] / psi**3)
    return np.array(rows)


def _simplex(xi: np.ndarray) -> list[int]:
    """Greedy choice of ``dim`` support rows that span with the home point."""

    dim = xi.shape[1]
    chosen = [int(np.argmax(np.linalg.norm(xi, axis=1)))]
    while len(chosen) < dim:
        basis = xi[chosen]
        if dim == 2:
            score = np.abs(basis[0, 0] * xi[:, 1] - basis[0, 1] * xi[:, 0])
        elif len(chosen) == 1:
            score = np.linalg.norm(np.cross(basis[0], xi), axis=1)
        else:
            score = np.abs(xi @ np.cross(basis[0], basis[1]))
        score[chosen] = -1.0
        best = int(np.argmax(score))
        if score[best] <= 1.0e-10:
            raise SingularBasis("Supports do not span the space around the home point")
        chosen.append(best)
    return chosen


def _physical_scaling(lengths: np.ndarray, order: Order) -> np.ndarray:
    dim = len(lengths)
    factors = list(lengths)
    if order == "quadratic":
        factors += [lengths[a] * lengths[b] for a, b in SECOND_PAIRS[dim]]
    return np.array(factors)


def build_rbf_dq(
    home: np.ndarray,
    supports: np.ndarray,
    c: float,
    *,
    order: Order = "quadratic",
    home_id: int = 0,
    support_ids: np.ndarray | None = None,
) -> DqOperator:
    home = np.asarray(home, dtype=float)
    supports = np.atleast_2d(np.asarray(supports, dtype=float))
    dim = home.shape[0]
    m = len(supports)
    n_rows = len(DERIVATIVE_ROWS[dim])
    needed = n_rows if order == "quadratic" else dim
    if m < needed:
        raise InsufficientSupport(f"{order} RBF-DQ needs {needed} supports, got {m}")

    xi_supports, lengths = transform_to_standard(home, supports)
    simplex = [k + 1 for k in _simplex(xi_supports)]
    perm = np.array([0, *simplex, *[k for k in range(1, m + 1) if k not in simplex]])
    nodes = np.vstack([np.zeros(dim), xi_supports])[perm]

    poly = np.vstack([np.ones(m + 1), nodes.T])                  # (dim+1, m+1)
    block = poly[:, : dim + 1]
    diff = nodes[:, None, :] - nodes[None, :, :]
    phi = np.sqrt(np.sum(diff**2, axis=-1) + c**2)                 # phi[k, i] = psi_i(xi_k)
    try:
        weights = scipy.linalg.solve(block, poly[:, dim + 1:])     # (dim+1, m-dim)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SingularBasis(f"Linear completion block is singular: {exc}") from exc

    basis = np.empty((m + 1, m + 1))
    basis[: dim + 1] = poly
    basis[dim + 1:] = (phi[:, dim + 1:] - phi[:, : dim + 1] @ weights).T

    d_psi = multiquadric_derivatives(nodes, c)                    # (n_rows, m+1)
    d_basis = np.zeros((n_rows, m + 1))
    d_basis[np.arange(dim), 1 + np.arange(dim)] = 1.0
    d_basis[:, dim + 1:] = d_psi[:, dim + 1:] - d_psi[:, : dim + 1] @ weights

    condition = np.linalg.cond(basis)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise SingularBasis(f"RBF interpolation matrix condition {condition:.3e} exceeds {CONDITION_LIMIT:.0e}")
    lu = scipy.linalg.lu_factor(basis)
    b_xi = scipy.linalg.lu_solve(lu, d_basis.T).T                # (D g0) G^-T

    # restore exact reproduction of affine data
    target = np.zeros((n_rows, dim + 1))
    target[np.arange(dim), 1 + np.arange(dim)] = 1.0
    samples = poly.T                                              # (m+1, dim+1)
    residual = b_xi @ samples - target
    b_xi = b_xi - residual @ np.linalg.solve(samples.T @ samples, samples.T)

    B = np.empty_like(b_xi)
    B[:, perm] = b_xi
    if order == "linear":
        B = B[:dim]
    B = B / _physical_scaling(lengths, order)[:, None]

    ids = np.arange(m + 1) if support_ids is None else np.asarray(support_ids)
    return DqOperator(home=home_id, support=ids, B=B, lengths=lengths, order=order, origin=home)
