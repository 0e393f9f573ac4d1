"""Basis expansion phi(V, C) for the outcome regression."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import DataError, ParameterError
from ..sem import Dataset


class BasisSpec(BaseModel):
    """Feature groups entering phi(V_i, C_i).

    Column order: intercept | V (z, zbar) | C (x_1..x_p, xbar_1..xbar_p) | z*x1 | x1^2 | x2^2 | x2^3
    """

    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    intercept: bool = True
    v_linear: bool = True
    c_linear: bool = True
    z_x1: bool = False
    x1_sq: bool = False
    x2_sq: bool = False
    x2_cube: bool = False

    @field_validator("intercept")
    @classmethod
    def _intercept_required(cls, value: bool) -> bool:
        if not value:
            raise ValueError("the intercept column is always present")
        return value

    @classmethod
    def correct(cls) -> "BasisSpec":
        return cls(name="correct", z_x1=True, x1_sq=True, x2_sq=True, x2_cube=True)

    @classmethod
    def misspecified(cls) -> "BasisSpec":
        return cls(name="misspecified")

    @classmethod
    def intercept_only(cls) -> "BasisSpec":
        return cls(name="intercept", v_linear=False, c_linear=False)

    @classmethod
    def from_name(cls, name: str) -> "BasisSpec":
        presets = {"correct": cls.correct, "misspecified": cls.misspecified, "intercept": cls.intercept_only}
        if name not in presets:
            raise ParameterError(f"Unknown basis preset '{name}', expected one of {sorted(presets)}")
        return presets[name]()

    @property
    def uses_x2(self) -> bool:
        return self.x2_sq or self.x2_cube

    def n_columns(self, x_dim: int) -> int:
        return (
            1
            + 2 * self.v_linear
            + 2 * x_dim * self.c_linear
            + sum([self.z_x1, self.x1_sq, self.x2_sq, self.x2_cube])
        )


def basis_features(v: np.ndarray, c: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Evaluate phi on summaries ``v (..., N, 2)`` and ``c (..., N, 2p)``; returns ``(..., N, q)``."""
    v = np.asarray(v, dtype=float)
    c = np.asarray(c, dtype=float)
    x_dim = c.shape[-1] // 2
    if basis.uses_x2 and x_dim < 2:
        raise DataError(f"Basis '{basis.name}' uses x2 but the data has {x_dim} covariate(s)")

    columns = [np.ones(v.shape[:-1])]
    if basis.v_linear:
        columns += [v[..., 0], v[..., 1]]
    if basis.c_linear:
        columns += [c[..., k] for k in range(c.shape[-1])]
    if basis.z_x1:
        columns.append(v[..., 0] * c[..., 0])
    if basis.x1_sq:
        columns.append(c[..., 0] ** 2)
    if basis.x2_sq:
        columns.append(c[..., 1] ** 2)
    if basis.x2_cube:
        columns.append(c[..., 1] ** 3)
    return np.stack(columns, axis=-1)


def design_matrix(dataset: Dataset, basis: BasisSpec) -> np.ndarray:
    """N x q design matrix of the observed summaries."""
    return basis_features(dataset.v, dataset.c, basis)
