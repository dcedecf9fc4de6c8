"""Periodic extension of the phase-space velocity in the v-direction.

The advection velocity u1(v) must equal v on the effective core
|v| <= v_star yet be periodic over [-Lv, Lv).  This is arranged through
three profiles sampled on the v-grid:

* ``h``   -- smooth plateau: 1 on the core, dipping near the seam so its
             mean over the period vanishes (zero total circulation),
* ``g``   -- periodic antiderivative of h: the velocity itself, g(v) = v
             on the core,
* ``g_int`` -- periodic antiderivative of g: the v-part of the stream
             function, v^2/2 on the core (up to a constant).

``optimize_extension`` balances the interpolation error of the scheme
against the spectral error introduced by the finite extension band and
returns the cheapest usable extension length for a given grid size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigurationError,
    DegenerateInputError,
    PreconditionError,
    RootNotFoundError,
)


def _bump_normalization() -> float:
    # \int_{-1}^{1} exp(-1/(1-s^2)) ds by Gauss-Legendre; the integrand is
    # C-infinity with all derivatives vanishing at the endpoints, so 200
    # nodes are far beyond double precision needs.
    s, w = np.polynomial.legendre.leggauss(200)
    return float(w @ np.exp(-1.0 / (1.0 - s * s)))


_ETA_NORM = _bump_normalization()


def mollifier_eta(s):
    """Normalized compact bump: exp(-1/(1-s^2))/I on |s|<1, zero outside."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(-1.0 / (1.0 - si * si)) / _ETA_NORM
    if out.shape == ():
        return float(out)
    return out


def build_sigma(vnodes: np.ndarray, Lv: float, a: float) -> np.ndarray:
    """Raw seam-well profile: 1 minus a scaled bump centered on |v| = Lv."""
    if not 0 < a < Lv:
        raise ConfigurationError(f"extension length must satisfy 0 < a < Lv, got a={a}")
    v = np.asarray(vnodes, dtype=np.float64)
    return 1.0 - (Lv / a**2) * mollifier_eta((np.abs(v) - Lv) / a)


def build_h(sigma: np.ndarray) -> np.ndarray:
    """Shift and rescale sigma so the discrete mean is 0 and the max is 1."""
    sigma = np.asarray(sigma, dtype=np.float64)
    shifted = sigma - sigma.mean()
    peak = shifted.max()
    if peak <= 0:
        raise DegenerateInputError("profile has no shape after removing the mean")
    h = shifted / peak
    # Polish: the residual mean after rescaling is at rounding level; two
    # more shift/rescale passes pin mean(h) ~ 1e-17 while keeping max(h)=1.
    for _ in range(2):
        h = h - h.mean()
        h = h / h.max()
    return h


def periodic_antiderivative(samples: np.ndarray, period: float, zero_index: int) -> np.ndarray:
    """Spectral antiderivative of zero-mean periodic samples, zero at zero_index."""
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.size
    coef = np.fft.rfft(samples)
    if abs(coef[0]) / n > 1e-10 * max(1.0, np.abs(samples).max()):
        raise PreconditionError(
            f"samples must have zero mean, got {coef[0].real / n:.3e}"
        )
    k = np.arange(coef.size)
    scale = np.zeros(coef.size, dtype=np.complex128)
    scale[1:] = 1.0 / (1j * (2.0 * np.pi / period) * k[1:])
    if n % 2 == 0:
        scale[-1] = 0.0  # Nyquist mode has no odd antiderivative
    out = np.fft.irfft(coef * scale, n)
    return out - out[zero_index]


def build_g(h: np.ndarray, vnodes: np.ndarray) -> np.ndarray:
    """Periodic antiderivative of h pinned to g(0) = 0 (the velocity profile)."""
    v = np.asarray(vnodes, dtype=np.float64)
    n = v.size
    period = (v[1] - v[0]) * n
    zero_index = int(np.argmin(np.abs(v)))
    return periodic_antiderivative(h, period, zero_index)


@dataclass(frozen=True)
class PeriodizedVelocity:
    """Sampled periodic velocity profiles on a v-grid.

    ``h`` is the exact nodal derivative of ``g``, and ``g`` of ``g_int``,
    in the sense of the underlying trigonometric interpolant.
    """

    vnodes: np.ndarray
    h: np.ndarray
    g: np.ndarray
    g_int: np.ndarray
    a: float
    v_star: float

    @classmethod
    def build(cls, vnodes: np.ndarray, Lv: float, v_star: float,
              a: float | None = None, fine_min: int = 8192) -> "PeriodizedVelocity":
        if a is None:
            a = Lv - v_star
        if a > Lv - v_star + 1e-12:
            raise ConfigurationError(
                f"extension a={a} overlaps the core (Lv - v_star = {Lv - v_star})"
            )
        v = np.asarray(vnodes, dtype=np.float64)
        n = v.size

        # h with a zero discrete mean on the target grid.
        h = build_h(build_sigma(v, Lv, a))

        # g and g_int need the seam well resolved far beyond the target grid:
        # integrate spectrally on an aligned refinement, then restrict.  The
        # target nodes are a subset of the fine nodes, so the restriction is
        # exact; on the core this pins g = v and g_int = v^2/2 to ~1e-13.
        m = max(1, -(-fine_min // n))
        hv_f = 2.0 * Lv / (m * n)
        v_f = -Lv + hv_f * np.arange(m * n)
        h_f = build_h(build_sigma(v_f, Lv, a))
        zero_f = int(np.argmin(np.abs(v_f)))
        g_f = periodic_antiderivative(h_f, 2.0 * Lv, zero_f)
        g_int_f = periodic_antiderivative(g_f, 2.0 * Lv, zero_f)
        return cls(v, h, g_f[::m], g_int_f[::m], float(a), float(v_star))


def optimize_extension(N: int, v_star: float) -> tuple[float, float]:
    """Bisect for the extension length balancing scheme vs extension error.

    Returns ``(a, efficiency)`` with efficiency = v_star / (a + v_star).
    The residual being solved is the stationarity condition of the combined
    error model: fourth-order interpolation error of the scheme against the
    sub-exponential spectral decay of the compactly supported bump.
    """
    if N < 16:
        raise ConfigurationError(f"N must be >= 16, got {N}")
    if v_star <= 0:
        raise ConfigurationError(f"v_star must be positive, got {v_star}")

    def residual(a: float) -> float:
        n_a = a * N / (a + v_star)
        return (
            4.0 * (a + v_star) ** 3 / N**4
            - n_a ** (-1.75)
            * np.exp(-np.sqrt(n_a))
            * ((v_star / (4.0 * a)) * (2.0 * np.sqrt(n_a) + 7.0) - 1.0)
        )

    lo, hi = 1e-3 * v_star, v_star
    f_lo, f_hi = residual(lo), residual(hi)
    if not np.isfinite(f_lo) or not np.isfinite(f_hi) or f_lo * f_hi > 0:
        raise RootNotFoundError(
            f"no sign change on ({lo:.3e}, {hi:.3e}): residuals at ends "
            f"{f_lo:.3e}, {f_hi:.3e} (N={N}, v_star={v_star})"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = residual(mid)
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    a = 0.5 * (lo + hi)
    return a, v_star / (a + v_star)
