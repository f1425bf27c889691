"""Reference solutions for benchmark cases without a closed-form field.

All three are one-dimensional: graded slabs solved by the method of lines,
the thermal-shock slab by its Fourier series and the convectively heated
slab by its eigenfunction series.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SlabSolution:
    """u(s, t) and du/ds(s, t) of a one-dimensional solution along one axis."""

    axis: int
    value: Callable[[np.ndarray, float], np.ndarray]
    slope: Callable[[np.ndarray, float], np.ndarray]

    def exact(self, x: np.ndarray, t: float) -> np.ndarray:
        return self.value(np.atleast_2d(x)[:, self.axis], t)

    def exact_gradient(self, x: np.ndarray, t: float) -> np.ndarray:
        x = np.atleast_2d(x)
        grad = np.zeros_like(x, dtype=float)
        grad[:, self.axis] = self.slope(x[:, self.axis], t)
        return grad


def graded_slab(
    f: Callable[[np.ndarray], np.ndarray],
    k_normal: float,
    length: float,
    u_low: float,
    u_high: float,
    T: float,
    *,
    nodes: int = 801,
    axis: int = 1,
) -> SlabSolution:
    """f u_t = k_normal (f u_s)_s on [0, L], u(0) = u_low, u(L) = u_high, u(s, 0) = u_low.

    Conservative second-order differences in space, stiff BDF in time.
    """

    s = np.linspace(0.0, length, nodes)
    ds = s[1] - s[0]
    capacity = f(s[1:-1])
    face = f(0.5 * (s[1:] + s[:-1]))

    def rhs(t: float, interior: np.ndarray) -> np.ndarray:
        u = np.concatenate([[u_low], interior, [u_high]])
        flux = face * np.diff(u) / ds
        return k_normal * np.diff(flux) / ds / capacity

    sol = solve_ivp(
        rhs,
        (0.0, T),
        np.full(nodes - 2, u_low),
        method="BDF",
        dense_output=True,
        rtol=1.0e-9,
        atol=1.0e-10 * max(abs(u_low), abs(u_high), 1.0),
    )
    if not sol.success:
        raise RuntimeError(f"Reference slab solve failed: {sol.message}")
    logger.debug("Graded slab reference: %d nodes, %d steps", nodes, len(sol.t))

    def profile(t: float) -> np.ndarray:
        if t <= 0.0:
            return np.full(nodes, u_low)
        return np.concatenate([[u_low], sol.sol(min(t, T)), [u_high]])

    def value(y: np.ndarray, t: float) -> np.ndarray:
        return np.interp(y, s, profile(t))

    def slope(y: np.ndarray, t: float) -> np.ndarray:
        return np.interp(y, s, np.gradient(profile(t), ds))

    return SlabSolution(axis=axis, value=value, slope=slope)


def shock_slab(length: float, diffusivity: float = 1.0, *, terms: int = 400, axis: int = 2) -> SlabSolution:
    """u(0) = 0, u(L) = H(t), u(s, 0) = 0."""

    n = np.arange(1, terms + 1)
    coefficients = 2.0 * (-1.0) ** n / (n * np.pi)
    wave = n * np.pi / length

    def value(z: np.ndarray, t: float) -> np.ndarray:
        if t <= 0.0:
            return np.zeros_like(z, dtype=float)
        decay = np.exp(-diffusivity * wave**2 * t)
        return z / length + np.sin(np.outer(z, wave)) @ (coefficients * decay)

    def slope(z: np.ndarray, t: float) -> np.ndarray:
        if t <= 0.0:
            return np.zeros_like(z, dtype=float)
        decay = np.exp(-diffusivity * wave**2 * t)
        return 1.0 / length + np.cos(np.outer(z, wave)) @ (coefficients * wave * decay)

    return SlabSolution(axis=axis, value=value, slope=slope)


def robin_eigenvalues(h: float, length: float, count: int) -> np.ndarray:
    """Roots of lambda tan(lambda L) = h, one per branch of the tangent."""

    def g(lam: float) -> float:
        return lam * np.sin(lam * length) - h * np.cos(lam * length)

    roots = np.empty(count)
    for k in range(count):
        lo = k * np.pi / length
        hi = (k + 0.5) * np.pi / length
        roots[k] = brentq(g, lo, hi, xtol=1.0e-14)
    return roots


def robin_slab(
    h: float,
    length: float,
    ambient: float = 1.0,
    diffusivity: float = 1.0,
    *,
    terms: int = 200,
    axis: int = 2,
) -> SlabSolution:
    """Insulated at s = 0, q = h (ambient H(t) - u) at s = L, u(s, 0) = 0 (unit conductivity)."""

    lam = robin_eigenvalues(h, length, terms)
    sl = np.sin(lam * length)
    coefficients = 2.0 * sl / (lam * length + sl * np.cos(lam * length))

    def value(z: np.ndarray, t: float) -> np.ndarray:
        if t <= 0.0:
            return np.zeros_like(z, dtype=float)
        decay = np.exp(-diffusivity * lam**2 * t)
        return ambient * (1.0 - np.cos(np.outer(z, lam)) @ (coefficients * decay))

    def slope(z: np.ndarray, t: float) -> np.ndarray:
        if t <= 0.0:
            return np.zeros_like(z, dtype=float)
        decay = np.exp(-diffusivity * lam**2 * t)
        return ambient * (np.sin(np.outer(z, lam)) @ (coefficients * lam * decay))

    return SlabSolution(axis=axis, value=value, slope=slope)
