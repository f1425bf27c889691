from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

from ..schemas import Method


class SolverConfig(BaseModel):
    """Discretization parameters shared by the four assemblers.

    ``pg3_local_k="diagonal"`` builds the singular-solution test functions
    from the diagonal of k only. That reproduces linear fields exactly for
    isotropic and orthotropic media, but not when k has off-diagonal terms:
    an anisotropic linear patch then needs ``pg3_local_k="full"`` with
    ``face_points=3`` (2D).
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    method: Method = "fpm"
    eta1: float = Field(default=1.0, ge=0.0)
    eta2: float = Field(default=1.0e5, gt=0.0)
    rbf_c: PositiveFloat | None = None
    kbar: Union[Literal["auto"], PositiveFloat] = "auto"
    face_points: int | None = Field(default=None, ge=1, le=10)
    pg3_cell_rule: Literal["auto", "centroid", "subdivided"] = "auto"
    pg3_source_offset: float = Field(default=1.0, gt=0.0)
    pg3_source_point: tuple[float, ...] | None = None
    pg3_local_k: Literal["diagonal", "full"] = "diagonal"
    gradient_scheme: Literal["gfd", "rbf"] = "gfd"
    strong_dirichlet: bool = False

    @property
    def n_face_points(self) -> int:
        if self.face_points is not None:
            return self.face_points
        return 2 if self.method == "pg3" else 1
