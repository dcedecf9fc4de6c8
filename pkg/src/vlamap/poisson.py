"""Charge density, spectral 1D potential solve, upsampling and stream assembly.

The potential solve works on the x-grid of the sampling grid and is
upsampled to the velocity grid by zero padding; the stream function is then
assembled directly in Hermite node form (its cross derivative vanishes, so
no 2D transform is ever needed).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .grids import Grid2D, HermiteField2D
from .periodize import PeriodizedVelocity


@dataclass
class ScalarProfile1D:
    """Samples of a periodic profile (rho, phi or dphi/dx) on the x-grid."""

    samples: np.ndarray
    hx: float

    def __post_init__(self):
        self.samples = np.ascontiguousarray(self.samples, dtype=np.float64)

    @property
    def L(self) -> float:
        return self.hx * self.samples.size


def charge_density(f: np.ndarray, hv: float, hx: float) -> ScalarProfile1D:
    """Velocity integral of f by the periodic rectangle rule."""
    f = np.asarray(f, dtype=np.float64)
    return ScalarProfile1D(hv * f.sum(axis=1), hx)


def solve_poisson(rho: ScalarProfile1D, l: float = 1.0,
                  neutrality_tol: float = 1e-6) -> tuple[ScalarProfile1D, ScalarProfile1D]:
    """Solve d2phi/dx2 = l*rho - 1 with periodic BCs and zero-mean gauge.

    Returns (phi, dphi/dx), both sampled on the input grid.  The x-mean of
    l*rho should be 1 (neutral plasma); any residual lands in the gauged
    zero mode and triggers a warning.
    """
    n = rho.samples.size
    L = rho.L
    mean_rho = float(rho.samples.mean())
    if abs(l * mean_rho - 1.0) > neutrality_tol:
        warnings.warn(
            f"plasma is not neutral: mean(l*rho) = {l * mean_rho:.6g}, "
            "residual absorbed by the zero-mode gauge",
            RuntimeWarning,
            stacklevel=2,
        )
    rhs_hat = np.fft.rfft(1.0 - l * rho.samples)
    k = (2.0 * np.pi / L) * np.arange(rhs_hat.size)
    phi_hat = np.zeros_like(rhs_hat)
    phi_hat[1:] = rhs_hat[1:] / k[1:] ** 2
    phi = np.fft.irfft(phi_hat, n)
    dphi = np.fft.irfft(1j * k * phi_hat, n)
    return ScalarProfile1D(phi, rho.hx), ScalarProfile1D(dphi, rho.hx)


def zero_pad_upsample(profile: ScalarProfile1D, n_out: int) -> ScalarProfile1D:
    """Resample a band-limited profile onto a finer grid via spectral padding."""
    samples = profile.samples
    n_in = samples.size
    if n_out < n_in:
        raise ConfigurationError(f"cannot upsample from {n_in} to {n_out} points")
    if n_out % 2 != 0 or n_in % 2 != 0:
        raise ConfigurationError("zero padding expects even sample counts")
    if n_out == n_in:
        return ScalarProfile1D(samples.copy(), profile.hx)
    coef = np.fft.rfft(samples)
    out = np.zeros(n_out // 2 + 1, dtype=np.complex128)
    out[: n_in // 2] = coef[: n_in // 2]
    out[n_in // 2] = 0.5 * coef[n_in // 2]  # split the Nyquist pair
    upsampled = np.fft.irfft(out, n_out) * (n_out / n_in)
    return ScalarProfile1D(upsampled, profile.hx * n_in / n_out)


def assemble_stream(phi: ScalarProfile1D, dphi: ScalarProfile1D,
                    pv: PeriodizedVelocity, grid: Grid2D) -> HermiteField2D:
    """Hermite node data of the stream function on the velocity grid.

    psi(x, v) = g_int(v) - phi(x), so the nodal jet is separable:
    d/dx = -dphi, d/dv = g (the periodized velocity), cross derivative 0.
    """
    if phi.samples.size != grid.Nx or dphi.samples.size != grid.Nx:
        raise ConfigurationError(
            f"potential profiles have {phi.samples.size} samples, grid expects {grid.Nx}"
        )
    if pv.g.size != grid.Nv:
        raise ConfigurationError(
            f"periodized velocity has {pv.g.size} samples, grid expects {grid.Nv}"
        )
    shape = (grid.Nx, grid.Nv)
    val = pv.g_int[None, :] - phi.samples[:, None]
    fx = np.broadcast_to(-dphi.samples[:, None], shape).copy()
    fv = np.broadcast_to(pv.g[None, :], shape).copy()
    fxv = np.zeros(shape)
    return HermiteField2D(grid, val, fx, fv, fxv)


def velocity_at(psi: HermiteField2D, x, v):
    """Phase-space velocity (u1, u2) = (dpsi/dv, -dpsi/dx) at query points."""
    from .grids import hermite_eval_grad

    _, gx, gv = hermite_eval_grad(psi, x, v)
    return gv, -gx
