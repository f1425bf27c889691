"""Position-dependent conductivity, density and specific heat."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np

from .errors import ConfigurationError, UnknownPreset

logger = logging.getLogger(__name__)

Descriptor = Literal["analytic", "piecewise", "fg-preset"]
TensorFn = Callable[[np.ndarray], np.ndarray]
ScalarFn = Callable[[np.ndarray], np.ndarray]


def _as_tensor(k: float | Sequence[Sequence[float]] | np.ndarray, dim: int | None) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if k.ndim == 0:
        if dim is None:
            raise ConfigurationError("A scalar conductivity needs an explicit dimension")
        return float(k) * np.eye(dim)
    if k.shape not in ((2, 2), (3, 3)):
        raise ConfigurationError(f"Conductivity tensor must be 2x2 or 3x3, got {k.shape}")
    if not np.allclose(k, k.T):
        raise ConfigurationError("Conductivity tensor must be symmetric")
    return k


def _constant(value: float) -> ScalarFn:
    return lambda x: np.full(len(x), float(value))


@dataclass(frozen=True, eq=False)
class MaterialField:
    """k(x), rho(x), c(x) evaluated on arrays of points of shape (q, dim).

    ``dk_fn`` returns dk/dx_a for every axis, shape (q, dim, dim, dim), when
    the derivative is known in closed form. Piecewise fields are constant
    within a region and are sampled at the hosted point of the cell; they
    leave ``dk_fn`` unset so that a collocation row next to an interface sees
    the jump in k through its stencil.
    """

    dim: int
    k_fn: TensorFn
    rho_fn: ScalarFn
    c_fn: ScalarFn
    descriptor: Descriptor = "analytic"
    dk_fn: TensorFn | None = None
    label: str = "material"

    def k(self, x: np.ndarray, anchor: np.ndarray | None = None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        points = np.atleast_2d(x)
        if anchor is not None and self.descriptor == "piecewise":
            points = np.broadcast_to(np.asarray(anchor, dtype=float), points.shape)
        values = np.asarray(self.k_fn(points), dtype=float)
        return values[0] if single else values

    def rho(self, x: np.ndarray) -> np.ndarray:
        return self._scalar(self.rho_fn, x)

    def c(self, x: np.ndarray) -> np.ndarray:
        return self._scalar(self.c_fn, x)

    def rho_c(self, x: np.ndarray, anchor: np.ndarray | None = None) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if anchor is not None and self.descriptor == "piecewise":
            x = np.broadcast_to(np.asarray(anchor, dtype=float), x.shape)
        return self.rho(x) * self.c(x)

    @staticmethod
    def _scalar(fn: ScalarFn, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        values = np.asarray(fn(np.atleast_2d(x)), dtype=float)
        return values[0] if x.ndim == 1 else values

    def is_isotropic(self, x: np.ndarray) -> bool:
        tensors = self.k(np.atleast_2d(x))
        diag = np.einsum("qii->qi", tensors)
        off = tensors - np.einsum("qi,ij->qij", diag, np.eye(self.dim))
        return bool(np.allclose(off, 0.0) and np.allclose(diag, diag[:, :1]))

    def check_positive(self, x: np.ndarray) -> None:
        """Raise ConfigurationError unless k is SPD and rho, c > 0 at ``x``."""

        points = np.atleast_2d(np.asarray(x, dtype=float))
        tensors = self.k(points)
        if not np.allclose(tensors, np.swapaxes(tensors, 1, 2)):
            raise ConfigurationError(f"Conductivity of {self.label} is not symmetric")
        smallest = np.linalg.eigvalsh(tensors)[:, 0]
        bad = np.flatnonzero(smallest <= 0.0)
        if len(bad):
            raise ConfigurationError(
                f"Conductivity of {self.label} is not positive-definite at {points[bad[0]].tolist()}"
            )
        if np.any(self.rho(points) <= 0.0) or np.any(self.c(points) <= 0.0):
            raise ConfigurationError(f"Density and specific heat of {self.label} must be positive")


def homogeneous(
    k: float | Sequence[Sequence[float]] | np.ndarray,
    rho: float = 1.0,
    c: float = 1.0,
    *,
    dim: int | None = None,
    label: str = "homogeneous",
) -> MaterialField:
    tensor = _as_tensor(k, dim)
    d = tensor.shape[0]
    return MaterialField(
        dim=d,
        k_fn=lambda x: np.broadcast_to(tensor, (len(x), d, d)).copy(),
        rho_fn=_constant(rho),
        c_fn=_constant(c),
        descriptor="analytic",
        dk_fn=lambda x: np.zeros((len(x), d, d, d)),
        label=label,
    )


# gradation functions f(s) and f'(s) of s = delta * y / L
_GRADATIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "exp1": (np.exp, np.exp),
    "exp2": (
        lambda s: (np.exp(s) + 5.0 * np.exp(-s)) ** 2,
        lambda s: 2.0 * (np.exp(s) + 5.0 * np.exp(-s)) * (np.exp(s) - 5.0 * np.exp(-s)),
    ),
    "trig": (
        lambda s: (np.cos(s) + 5.0 * np.sin(s)) ** 2,
        lambda s: 2.0 * (np.cos(s) + 5.0 * np.sin(s)) * (5.0 * np.cos(s) - np.sin(s)),
    ),
    "power": (
        lambda s: (1.0 + s) ** 2,
        lambda s: 2.0 * (1.0 + s),
    ),
}
PRESETS = tuple(_GRADATIONS)


def gradation(name: str, delta: float, length: float = 1.0) -> tuple[Callable, Callable]:
    """f(y) and df/dy of a named gradation preset."""

    try:
        f, df = _GRADATIONS[name]
    except KeyError as exc:
        raise UnknownPreset(f"Unknown gradation preset '{name}' (expected one of {', '.join(PRESETS)})") from exc
    if delta < 0.0:
        raise ConfigurationError("Gradation exponent delta must be non-negative")
    if length <= 0.0:
        raise ConfigurationError("Gradation length must be positive")
    scale = delta / length
    return (lambda y: f(scale * y)), (lambda y: scale * df(scale * y))


def fg_preset(
    name: str,
    delta: float,
    k_hat: Sequence[Sequence[float]] | np.ndarray,
    *,
    length: float = 1.0,
    axis: int = 1,
) -> MaterialField:
    """Functionally graded medium: rho = 1, c = f(y), k = f(y) k_hat."""

    f, df = gradation(name, delta, length)
    base = _as_tensor(k_hat, None)
    dim = base.shape[0]

    def k_fn(x: np.ndarray) -> np.ndarray:
        return f(x[:, axis])[:, None, None] * base

    def dk_fn(x: np.ndarray) -> np.ndarray:
        out = np.zeros((len(x), dim, dim, dim))
        out[:, axis] = df(x[:, axis])[:, None, None] * base
        return out

    return MaterialField(
        dim=dim,
        k_fn=k_fn,
        rho_fn=_constant(1.0),
        c_fn=lambda x: f(x[:, axis]),
        descriptor="fg-preset",
        dk_fn=dk_fn,
        label=f"{name}(delta={delta:g})",
    )


def axis_graded(
    k_base: Sequence[Sequence[float]] | np.ndarray,
    component: tuple[int, int],
    axis: int,
    slope: float = 1.0,
    length: float = 1.0,
    *,
    rho: float = 1.0,
    c: float = 1.0,
) -> MaterialField:
    """k_ij(x) = k_base_ij (1 + slope x_axis / L) for one component (and its mirror)."""

    base = _as_tensor(k_base, None)
    dim = base.shape[0]
    mask = np.zeros((dim, dim))
    i, j = component
    mask[i, j] = mask[j, i] = 1.0
    graded = base * mask

    def k_fn(x: np.ndarray) -> np.ndarray:
        factor = slope * x[:, axis] / length
        return base + factor[:, None, None] * graded

    def dk_fn(x: np.ndarray) -> np.ndarray:
        out = np.zeros((len(x), dim, dim, dim))
        out[:, axis] = (slope / length) * graded
        return out

    return MaterialField(
        dim=dim,
        k_fn=k_fn,
        rho_fn=_constant(rho),
        c_fn=_constant(c),
        descriptor="analytic",
        dk_fn=dk_fn,
        label=f"graded k{i + 1}{j + 1} along axis {axis}",
    )


@dataclass(frozen=True, eq=False)
class MaterialRegion:
    k: float | Sequence[Sequence[float]] | np.ndarray
    rho: float = 1.0
    c: float = 1.0
    contains: Callable[[np.ndarray], np.ndarray] | None = field(default=None)


def piecewise(regions: Sequence[MaterialRegion], default: MaterialRegion, *, dim: int = 2) -> MaterialField:
    """Constant properties per region; the first region containing a point wins."""

    tensors = [_as_tensor(region.k, dim) for region in (*regions, default)]
    if any(t.shape[0] != dim for t in tensors):
        raise ConfigurationError("Every region must use the field's dimension")
    if any(region.contains is None for region in regions):
        raise ConfigurationError("Every non-default region needs a membership rule")

    def region_index(x: np.ndarray) -> np.ndarray:
        index = np.full(len(x), len(regions), dtype=int)
        for r in reversed(range(len(regions))):
            index[np.asarray(regions[r].contains(x), dtype=bool)] = r
        return index

    table_k = np.array(tensors)
    table_rho = np.array([region.rho for region in (*regions, default)], dtype=float)
    table_c = np.array([region.c for region in (*regions, default)], dtype=float)
    return MaterialField(
        dim=dim,
        k_fn=lambda x: table_k[region_index(x)],
        rho_fn=lambda x: table_rho[region_index(x)],
        c_fn=lambda x: table_c[region_index(x)],
        descriptor="piecewise",
        label=f"piecewise({len(regions) + 1} regions)",
    )


def grad_k(material: MaterialField, operator, points: np.ndarray) -> np.ndarray:
    """dk/dx_a at the operator's home point, shape (dim, dim, dim).

    Closed-form derivatives are used when the field has them; otherwise the
    operator's gradient rows are applied to k sampled at the support points.
    """

    home = points[operator.home]
    if material.dk_fn is not None:
        return np.asarray(material.dk_fn(home[None, :]))[0]
    samples = material.k(points[operator.support])
    return np.tensordot(operator.gradient, samples, axes=(1, 0))


def divergence_k(material: MaterialField, operator, points: np.ndarray) -> np.ndarray:
    """(div k)_b = sum_a dk_ab / dx_a at the home point."""

    return np.einsum("aab->b", grad_k(material, operator, points))


class PenaltyWindow(NamedTuple):
    eta1: tuple[float, float]
    eta2: tuple[float, float]

    def contains(self, eta1: float, eta2: float) -> bool:
        return self.eta1[0] <= eta1 <= self.eta1[1] and self.eta2[0] <= eta2 <= self.eta2[1]


_PENALTY_WINDOWS = {
    ("fpm", 2): PenaltyWindow((1.0, 50.0), (50.0, np.inf)),
    ("fpm", 3): PenaltyWindow((0.1, 50.0), (50.0, 1.0e4)),
    ("pg1", 2): PenaltyWindow((0.0, 10.0), (1.0, np.inf)),
    ("pg1", 3): PenaltyWindow((0.0, 1.0e3), (10.0, np.inf)),
    ("pg2", 2): PenaltyWindow((0.1, 10.0), (10.0, np.inf)),
    ("pg2", 3): PenaltyWindow((0.1, 10.0), (10.0, np.inf)),
    ("pg3", 2): PenaltyWindow((0.1, 10.0), (10.0, np.inf)),
    ("pg3", 3): PenaltyWindow((0.1, 10.0), (10.0, np.inf)),
}


def recommended_penalty_window(method: str, dim: int) -> PenaltyWindow:
    try:
        return _PENALTY_WINDOWS[(method.lower(), dim)]
    except KeyError as exc:
        raise ConfigurationError(f"No penalty recommendation for method '{method}' in {dim}D") from exc
