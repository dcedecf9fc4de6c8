"""Periodic phase-space grids and bicubic Hermite jet fields.

A field is carried as four node arrays (value, d/dx, d/dv, d2/dxdv) on a
uniform grid over [0, Lx) x [-Lv, Lv), periodic in both directions.  Point
evaluation goes through the selected kernel backend; the jet assembly used
by the map update is plain array arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .errors import ConfigurationError


@dataclass(frozen=True)
class Domain:
    """Phase-space box: x-period Lx, v in [-Lv, Lv), effective core |v| <= v_star.

    ``l`` is the dimensionless field-coupling constant in the potential
    equation d2phi/dx2 = l * rho - 1.
    """

    Lx: float
    Lv: float
    v_star: float
    l: float = 1.0

    def __post_init__(self):
        if not self.Lx > 0:
            raise ConfigurationError(f"Lx must be positive, got {self.Lx}")
        if not 0 < self.v_star < self.Lv:
            raise ConfigurationError(
                f"need 0 < v_star < Lv, got v_star={self.v_star}, Lv={self.Lv}"
            )
        if not self.l > 0:
            raise ConfigurationError(f"coupling l must be positive, got {self.l}")


@dataclass
class Grid2D:
    """Uniform periodic grid; nodes exclude the duplicate periodic endpoint."""

    domain: Domain
    Nx: int
    Nv: int
    hx: float = field(init=False)
    hv: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.hx = self.domain.Lx / self.Nx
        self.hv = 2.0 * self.domain.Lv / self.Nv
        self.x = self.hx * np.arange(self.Nx)
        self.v = -self.domain.Lv + self.hv * np.arange(self.Nv)

    @property
    def x0(self) -> float:
        return 0.0

    @property
    def v0(self) -> float:
        return -self.domain.Lv

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinate arrays of shape (Nx, Nv)."""
        return np.meshgrid(self.x, self.v, indexing="ij")


def build_grid(domain: Domain, Nx: int, Nv: int) -> Grid2D:
    for name, n in (("Nx", Nx), ("Nv", Nv)):
        if n < 4 or n % 2 != 0:
            raise ConfigurationError(f"{name} must be even and >= 4, got {n}")
    return Grid2D(domain, Nx, Nv)


@dataclass
class HermiteField2D:
    """Node values and derivative data of a bicubic Hermite interpolant.

    Arrays are shaped (Nx, Nv), C-order (v fastest).
    """

    grid: Grid2D
    f: np.ndarray
    fx: np.ndarray
    fv: np.ndarray
    fxv: np.ndarray

    def __post_init__(self):
        shape = (self.grid.Nx, self.grid.Nv)
        for name in ("f", "fx", "fv", "fxv"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.shape != shape:
                raise ConfigurationError(
                    f"{name} has shape {arr.shape}, grid expects {shape}"
                )
            setattr(self, name, arr)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "HermiteField2D":
        shape = (grid.Nx, grid.Nv)
        return cls(grid, *(np.zeros(shape) for _ in range(4)))

    @classmethod
    def from_callables(cls, grid, f, fx, fv, fxv) -> "HermiteField2D":
        """Seed node data from closed-form value/derivative functions."""
        X, V = grid.meshes()
        return cls(grid, f(X, V), fx(X, V), fv(X, V), fxv(X, V))

    def arrays(self):
        return self.f, self.fx, self.fv, self.fxv

    def combine(self, others, weights) -> "HermiteField2D":
        """Weighted linear combination self*w[0] + others[i]*w[i+1] (node-wise)."""
        out = [weights[0] * a for a in self.arrays()]
        for fld, w in zip(others, weights[1:]):
            for k, a in enumerate(fld.arrays()):
                out[k] = out[k] + w * a
        return HermiteField2D(self.grid, *out)


def hermite_eval(field: HermiteField2D, x, v):
    """Tensor-product cubic Hermite evaluation, periodic in both directions."""
    g = field.grid
    xa, va = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64)
    )
    out = kernels.bicubic_eval(
        field.f, field.fx, field.fv, field.fxv,
        g.x0, g.v0, g.hx, g.hv,
        np.ascontiguousarray(xa.ravel()), np.ascontiguousarray(va.ravel()),
    )
    if xa.shape == ():
        return float(out[0])
    return out.reshape(xa.shape)


def hermite_eval_grad(field: HermiteField2D, x, v):
    """Value and analytic gradient of the interpolant at the query points."""
    g = field.grid
    xa, va = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64)
    )
    out, gx, gv = kernels.bicubic_eval_grad(
        field.f, field.fx, field.fv, field.fxv,
        g.x0, g.v0, g.hx, g.hv,
        np.ascontiguousarray(xa.ravel()), np.ascontiguousarray(va.ravel()),
    )
    if xa.shape == ():
        return float(out[0]), float(gx[0]), float(gv[0])
    return out.reshape(xa.shape), gx.reshape(xa.shape), gv.reshape(xa.shape)


def jet_from_stencil(s_pp, s_pm, s_mp, s_mm, eps: float):
    """Assemble (value, d/dx, d/dv, d2/dxdv) from 4 samples at (x+-eps, v+-eps).

    Sample s_ab is taken at (x + a*eps, v + b*eps) with a, b in {+, -}.
    Applied componentwise when the samples are arrays.
    """
    if eps <= 0:
        raise ConfigurationError(f"stencil distance must be positive, got {eps}")
    quarter = 0.25
    value = quarter * (s_pp + s_pm + s_mp + s_mm)
    ddx = (s_pp + s_pm - s_mp - s_mm) / (4.0 * eps)
    ddv = (s_pp - s_pm + s_mp - s_mm) / (4.0 * eps)
    ddxv = (s_pp - s_pm - s_mp + s_mm) / (4.0 * eps * eps)
    return value, ddx, ddv, ddxv
