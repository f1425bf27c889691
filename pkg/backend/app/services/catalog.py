"""Benchmark problems: 2D cases 1.1 to 1.8 and 3D cases 2.1 to 2.7."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..assembly import ProblemSpec, dirichlet, neumann, robin, symmetric
from ..errors import UnknownCase
from ..geometry import (
    Box,
    Polygon,
    build_masked_partition,
    build_structured_partition,
    build_voronoi_partition,
    compute_supports,
    insert_crack,
    relax_voronoi_partition,
    sample_points,
)
from ..geometry.types import Partition
from ..materials import MaterialRegion, axis_graded, fg_preset, gradation, homogeneous, piecewise
from ..schemas import CaseSummary, Method
from .reference import graded_slab, robin_slab, shock_slab

logger = logging.getLogger(__name__)

DEFAULT_PENALTIES = (1.0, 1.0e5)


def step(x: np.ndarray, t: float) -> np.ndarray:
    """Heaviside data switched on for t > 0."""

    return np.full(len(x), 1.0 if t > 0.0 else 0.0)


def _flux_data(gradient: Callable, normal: np.ndarray, k: np.ndarray) -> Callable:
    return lambda x, t: gradient(x, t) @ (k @ normal)


def _grid_counts(box: Box, n: int, *, even: bool = False) -> tuple[int, ...]:
    per_axis = max(1, round(n ** (1.0 / box.dim)))
    if even:
        per_axis = max(2, 2 * round(per_axis / 2))
    return (per_axis,) * box.dim


@dataclass(frozen=True)
class BenchmarkCase:
    """One catalog entry; ``build`` makes a fresh ProblemSpec."""

    case_id: str
    title: str
    dim: int
    builder: Callable[..., ProblemSpec]
    default_points: int
    transient: bool = False
    dt: float | None = None
    T: float | None = None
    has_exact: bool = False
    layouts: tuple[str, ...] = ("uniform",)
    penalties: dict[str, tuple[float, float]] = field(default_factory=dict)
    targets: dict[str, float] = field(default_factory=dict)
    block_targets: dict[str, dict[str, float]] = field(default_factory=dict)
    variants: tuple[str, ...] = ()

    def build(
        self,
        points: int | None = None,
        *,
        layout: str | None = None,
        seed: int = 0,
        variant: str | None = None,
    ) -> ProblemSpec:
        kwargs = {"points": points or self.default_points, "layout": layout or self.layouts[0], "seed": seed}
        if self.variants:
            kwargs["variant"] = variant or self.variants[0]
        spec = self.builder(**kwargs)
        logger.info("Built case %s with %d points", self.case_id, spec.n)
        return spec

    def penalty(self, method: Method) -> tuple[float, float]:
        return self.penalties.get(method, DEFAULT_PENALTIES)

    def target(self, method: Method, variant: str | None = None) -> float | None:
        """Published error of ``method``; graded cases key it by material block."""

        if self.block_targets:
            block = (variant or self.variants[0]).partition("/")[0]
            return self.block_targets.get(block, {}).get(method)
        return self.targets.get(method)

    def summary(self) -> CaseSummary:
        return CaseSummary(
            case_id=self.case_id,
            title=self.title,
            dim=self.dim,
            transient=self.transient,
            has_exact=self.has_exact,
            default_points=self.default_points,
        )


# 1.1 -- unit disk, all Dirichlet


def _disk_exact(x: np.ndarray, t: float) -> np.ndarray:
    s = x[:, 0] + x[:, 1]
    return np.exp(s) * np.cos(s + 4.0 * t)


def _disk_gradient(x: np.ndarray, t: float) -> np.ndarray:
    s = x[:, 0] + x[:, 1]
    d = np.exp(s) * (np.cos(s + 4.0 * t) - np.sin(s + 4.0 * t))
    return np.column_stack([d, d])


DISK_RELAX_SWEEPS = 10


def build_disk(points: int, layout: str, seed: int) -> ProblemSpec:
    """Uniform layouts are relaxed until every point sits at its cell centroid;
    random layouts keep their raw Voronoi cells."""

    disk = Polygon.circle((0.0, 0.0), 1.0, sides=64)
    cloud = sample_points(disk, points, layout, seed)
    if layout == "uniform":
        partition = relax_voronoi_partition(cloud, disk, DISK_RELAX_SWEEPS)
    else:
        partition = build_voronoi_partition(cloud, disk)
    return ProblemSpec(
        partition=partition,
        material=homogeneous(1.0, dim=2),
        boundary={"wall": dirichlet(_disk_exact)},
        initial=lambda x: _disk_exact(x, 0.0),
        exact=_disk_exact,
        exact_gradient=_disk_gradient,
        label="1.1",
    )


# 1.2 -- unit square, Neumann on x = 1

_C12 = np.sqrt(2.0)


def _square_exact(x: np.ndarray, t: float) -> np.ndarray:
    phase = np.pi * x / 2.0 - np.pi / 4.0
    return _C12 * np.exp(-np.pi**2 * t / 4.0) * (np.cos(phase[:, 0]) + np.cos(phase[:, 1]))


def _square_gradient(x: np.ndarray, t: float) -> np.ndarray:
    phase = np.pi * x / 2.0 - np.pi / 4.0
    return -_C12 * np.exp(-np.pi**2 * t / 4.0) * (np.pi / 2.0) * np.sin(phase)


def build_square(points: int, layout: str, seed: int) -> ProblemSpec:
    box = Box((0.0, 0.0), (1.0, 1.0))
    partition = build_voronoi_partition(sample_points(box, points, layout, seed), box)
    data = dirichlet(_square_exact)
    return ProblemSpec(
        partition=partition,
        material=homogeneous(1.0, dim=2),
        boundary={
            "xmax": neumann(_flux_data(_square_gradient, np.array([1.0, 0.0]), np.eye(2))),
            "*": data,
        },
        initial=lambda x: _square_exact(x, 0.0),
        exact=_square_exact,
        exact_gradient=_square_gradient,
        label="1.2",
    )


# 1.3 - 1.6 -- functionally graded square, Dirichlet bottom/top

FG_BLOCKS: dict[str, tuple[bool, np.ndarray]] = {
    "iso-homogeneous": (False, np.eye(2)),
    "iso-graded": (True, np.eye(2)),
    "aniso-graded": (True, np.array([[2.0, 1.0], [1.0, 2.0]])),
}
FG_VARIANTS = tuple(f"{block}/{side}" for block in FG_BLOCKS for side in ("symmetric", "free"))


def graded_square_builder(preset: str, delta: float, u_low: float, u_high: float, T: float) -> Callable:
    def build(points: int, layout: str, seed: int, variant: str) -> ProblemSpec:
        block, _, side = variant.partition("/")
        if block not in FG_BLOCKS or side not in ("symmetric", "free"):
            raise UnknownCase(f"Unknown variant '{variant}' (expected one of {', '.join(FG_VARIANTS)})")
        graded, k_hat = FG_BLOCKS[block]
        effective = delta if graded else 0.0
        box = Box((0.0, 0.0), (1.0, 1.0))
        if layout == "uniform":
            _, partition = build_structured_partition(box, _grid_counts(box, points), "quad")
        else:
            partition = build_voronoi_partition(sample_points(box, points, layout, seed), box)
        lateral = symmetric() if side == "symmetric" else neumann(0.0)
        exact = exact_gradient = None
        # the field depends on y alone unless anisotropic sides are left free
        if side == "symmetric" or k_hat[0, 1] == 0.0:
            f, _ = gradation(preset, effective)
            reference = graded_slab(f, float(k_hat[1, 1]), 1.0, u_low, u_high, T)
            exact, exact_gradient = reference.exact, reference.exact_gradient
        return ProblemSpec(
            partition=partition,
            material=fg_preset(preset, effective, k_hat),
            boundary={
                "ymin": dirichlet(u_low),
                "ymax": dirichlet(u_high),
                "xmin": lateral,
                "xmax": lateral,
            },
            initial=u_low,
            exact=exact,
            exact_gradient=exact_gradient,
            label=f"fg-{preset}-{variant}",
        )

    return build


# 1.7 -- two-material square with an adiabatic crack

CRACK_HALF_WIDTH = 0.25


def build_cracked(points: int, layout: str, seed: int) -> ProblemSpec:
    box = Box((0.0, 0.0), (1.0, 1.0))
    _, partition = build_structured_partition(box, _grid_counts(box, points, even=True), "quad")
    crack = np.array([[-CRACK_HALF_WIDTH, 0.5], [CRACK_HALF_WIDTH, 0.5]])
    partition, _ = insert_crack(partition, compute_supports(partition), crack)
    material = piecewise(
        [MaterialRegion(2.0, contains=lambda x: x[:, 1] > 0.5)],
        MaterialRegion(1.0),
        dim=2,
    )
    return ProblemSpec(
        partition=partition,
        material=material,
        boundary={"ymax": dirichlet(100.0), "*": dirichlet(0.0)},
        label="1.7",
    )


# 1.8 -- orthotropic L-shape


def build_l_shape(points: int, layout: str, seed: int) -> ProblemSpec:
    shape = Polygon.l_shape(2.0)
    box = Box((0.0, 0.0), (2.0, 2.0))
    # three quarters of the box grid survive the mask
    per_axis = max(2, 2 * round(np.sqrt(4.0 * points / 3.0) / 2))
    _, partition = build_masked_partition(shape, box, (per_axis, per_axis), "quad")
    return ProblemSpec(
        partition=partition,
        material=homogeneous([[4.0, 0.0], [0.0, 7.0]]),
        boundary={"left": dirichlet(100.0), "right": dirichlet(0.0), "*": neumann(0.0)},
        label="1.8",
    )


# 2.1 -- anisotropic cube, steady, closed form

CUBE = 10.0
K21 = 1.0e-4 * np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.2], [0.0, 0.2, 1.0]])


def _cube_exact(x: np.ndarray, t: float) -> np.ndarray:
    X, Y, Z = x[:, 0], x[:, 1], x[:, 2]
    return Y**2 + Y - 5.0 * Y * Z + X * Z


def _cube_gradient(x: np.ndarray, t: float) -> np.ndarray:
    X, Y, Z = x[:, 0], x[:, 1], x[:, 2]
    return np.column_stack([Z, 2.0 * Y + 1.0 - 5.0 * Z, -5.0 * Y + X])


def _cube_partition(points: int, layout: str, seed: int) -> Partition:
    box = Box.cube(CUBE)
    if layout == "uniform":
        _, partition = build_structured_partition(box, _grid_counts(box, points), "hex")
        return partition
    return build_voronoi_partition(sample_points(box, points, layout, seed), box)


def build_anisotropic_cube(points: int, layout: str, seed: int) -> ProblemSpec:
    return ProblemSpec(
        partition=_cube_partition(points, layout, seed),
        material=homogeneous(K21),
        boundary={"*": dirichlet(_cube_exact)},
        exact=_cube_exact,
        exact_gradient=_cube_gradient,
        label="2.1",
    )


# 2.2 - 2.6 -- thermal shock on the top face

K23 = np.array([[1.0, 0.0, 0.0], [0.0, 1.5, 0.5], [0.0, 0.5, 1.0]])
K25 = np.array([[1.0, 0.5, 0.5], [0.5, 1.5, 0.5], [0.5, 0.5, 1.0]])


def shock_builder(case_id: str, material_fn: Callable, lateral_x: str) -> Callable:
    def build(points: int, layout: str, seed: int) -> ProblemSpec:
        exact = exact_gradient = None
        if case_id == "2.2":
            reference = shock_slab(CUBE)
            exact, exact_gradient = reference.exact, reference.exact_gradient
        side = symmetric() if lateral_x == "symmetric" else neumann(0.0)
        return ProblemSpec(
            partition=_cube_partition(points, layout, seed),
            material=material_fn(),
            boundary={
                "zmax": dirichlet(step),
                "zmin": dirichlet(0.0),
                "xmin": side,
                "xmax": side,
                "*": neumann(0.0),
            },
            initial=0.0,
            exact=exact,
            exact_gradient=exact_gradient,
            label=case_id,
        )

    return build


# 2.7 -- convective heating of the top face

def build_robin_cube(points: int, layout: str, seed: int) -> ProblemSpec:
    reference = robin_slab(1.0, CUBE)
    return ProblemSpec(
        partition=_cube_partition(points, layout, seed),
        material=homogeneous(1.0, dim=3),
        boundary={"zmax": robin(1.0, step), "*": neumann(0.0)},
        initial=0.0,
        exact=reference.exact,
        exact_gradient=reference.exact_gradient,
        label="2.7",
    )


# mean relative L2 error over the run, per material block
_FG_TARGETS: dict[str, dict[str, dict[str, float]]] = {
    "1.3": {
        "iso-homogeneous": {"fpm": 5.9e-3, "pg1": 6.3e-3, "pg2": 5.0e-3, "pg3": 5.6e-3},
        "iso-graded": {"fpm": 2.8e-2, "pg1": 6.6e-3, "pg2": 1.2e-2, "pg3": 9.5e-3},
        "aniso-graded": {"fpm": 3.1e-2, "pg1": 8.2e-3, "pg2": 1.4e-2, "pg3": 3.3e-2},
    },
    "1.4": {
        "iso-homogeneous": {"fpm": 5.0e-3, "pg1": 5.4e-3, "pg2": 7.1e-3, "pg3": 5.5e-3},
        "iso-graded": {"fpm": 1.3e-2, "pg1": 6.9e-3, "pg2": 8.7e-3, "pg3": 7.5e-3},
        "aniso-graded": {"fpm": 1.4e-2, "pg1": 8.6e-3, "pg2": 9.3e-3, "pg3": 9.8e-3},
    },
    "1.5": {
        "iso-homogeneous": {"fpm": 6.4e-3, "pg1": 6.8e-3, "pg2": 5.4e-3, "pg3": 6.0e-3},
        "iso-graded": {"fpm": 1.2e-2, "pg1": 4.0e-3, "pg2": 1.1e-2, "pg3": 8.9e-3},
        "aniso-graded": {"fpm": 1.4e-2, "pg1": 4.7e-3, "pg2": 1.3e-2, "pg3": 1.3e-2},
    },
    "1.6": {
        "iso-homogeneous": {"fpm": 5.9e-3, "pg1": 6.3e-3, "pg2": 5.0e-3, "pg3": 5.6e-3},
        "iso-graded": {"fpm": 3.0e-2, "pg1": 7.5e-3, "pg2": 1.7e-2, "pg3": 1.3e-2},
        "aniso-graded": {"fpm": 3.3e-2, "pg1": 8.7e-3, "pg2": 1.9e-2, "pg3": 3.3e-2},
    },
}
_SHOCK_PENALTIES = {m: (0.0 if m == "pg1" else 1.0, 20.0) for m in ("fpm", "pg1", "pg2", "pg3")}


def _register() -> dict[str, BenchmarkCase]:
    cases = [
        BenchmarkCase(
            "1.1",
            "Isotropic disk with an oscillating exact solution",
            2,
            build_disk,
            600,
            transient=True,
            dt=0.01,
            T=0.8,
            has_exact=True,
            layouts=("uniform", "random"),
            penalties={"pg1": (0.0, 1.0e5)},
            targets={"fpm": 5.2e-3, "pg1": 3.7e-3, "pg2": 8.6e-3, "pg3": 9.0e-3},
        ),
        BenchmarkCase(
            "1.2",
            "Isotropic square with a Neumann side",
            2,
            build_square,
            400,
            transient=True,
            dt=0.01,
            T=1.0,
            has_exact=True,
            layouts=("uniform", "random"),
            penalties={"pg1": (0.0, 1.0e5)},
            targets={"fpm": 8.6e-4, "pg1": 5.6e-3, "pg2": 5.1e-4, "pg3": 9.9e-4},
        ),
    ]
    for case_id, preset, delta, u_low, u_high, points in (
        ("1.3", "exp1", 3.0, 1.0, 20.0, 400),
        ("1.4", "exp2", 2.0, 1.0, 20.0, 121),
        ("1.5", "trig", 2.0, 0.0, 100.0, 441),
        ("1.6", "power", 3.0, 1.0, 20.0, 441),
    ):
        cases.append(
            BenchmarkCase(
                case_id,
                f"Functionally graded square ({preset}, delta={delta:g})",
                2,
                graded_square_builder(preset, delta, u_low, u_high, 0.8),
                points,
                transient=True,
                dt=0.01,
                T=0.8,
                has_exact=True,
                layouts=("uniform", "random"),
                penalties={"pg1": (0.0, 1.0e5)} if case_id != "1.3" else {},
                block_targets=_FG_TARGETS[case_id],
                variants=FG_VARIANTS,
            )
        )
    cases += [
        BenchmarkCase("1.7", "Two-material square with an adiabatic crack", 2, build_cracked, 1600),
        BenchmarkCase("1.8", "Orthotropic L-shaped plate", 2, build_l_shape, 218),
        BenchmarkCase(
            "2.1",
            "Anisotropic cube with a quadratic exact solution",
            3,
            build_anisotropic_cube,
            1000,
            has_exact=True,
            layouts=("uniform", "random"),
            targets={"fpm": 5.1e-3, "pg1": 2.8e-3, "pg2": 5.8e-4, "pg3": 9.9e-4},
        ),
        BenchmarkCase(
            "2.2",
            "Thermal shock on an isotropic cube",
            3,
            shock_builder("2.2", lambda: homogeneous(1.0, dim=3), "free"),
            1000,
            transient=True,
            dt=0.7,
            T=70.0,
            has_exact=True,
            penalties=_SHOCK_PENALTIES,
        ),
        BenchmarkCase(
            "2.3",
            "Thermal shock, homogeneous anisotropic, symmetric x faces",
            3,
            shock_builder("2.3", lambda: homogeneous(K23), "symmetric"),
            1000,
            transient=True,
            dt=0.7,
            T=70.0,
            penalties=_SHOCK_PENALTIES,
        ),
        BenchmarkCase(
            "2.4",
            "Thermal shock, k33 graded along z, symmetric x faces",
            3,
            shock_builder("2.4", lambda: axis_graded(K23, (2, 2), axis=2, length=CUBE), "symmetric"),
            1000,
            transient=True,
            dt=0.7,
            T=70.0,
            penalties=_SHOCK_PENALTIES,
        ),
        BenchmarkCase(
            "2.5",
            "Thermal shock, fully anisotropic, free lateral faces",
            3,
            shock_builder("2.5", lambda: homogeneous(K25), "free"),
            1000,
            transient=True,
            dt=0.7,
            T=70.0,
            penalties=_SHOCK_PENALTIES,
        ),
        BenchmarkCase(
            "2.6",
            "Steady state, fully anisotropic, k33 graded along z",
            3,
            shock_builder("2.6", lambda: axis_graded(K25, (2, 2), axis=2, length=CUBE), "free"),
            1000,
            penalties=_SHOCK_PENALTIES,
        ),
        BenchmarkCase(
            "2.7",
            "Convective heating of an isotropic cube",
            3,
            build_robin_cube,
            1000,
            transient=True,
            dt=1.0,
            T=100.0,
            has_exact=True,
            penalties=_SHOCK_PENALTIES,
        ),
    ]
    return {case.case_id: case for case in cases}


CATALOG: dict[str, BenchmarkCase] = _register()


def get_case(case_id: str) -> BenchmarkCase:
    try:
        return CATALOG[case_id]
    except KeyError as exc:
        raise UnknownCase(f"Unknown case '{case_id}' (known: {', '.join(CATALOG)})") from exc


def list_cases() -> list[CaseSummary]:
    return [case.summary() for case in CATALOG.values()]
