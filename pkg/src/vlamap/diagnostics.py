"""Conserved quantities, convergence orders, spectra and damping-rate fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InsufficientDataError


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    momentum: float
    e_kin: float
    e_pot: float
    e_tot: float
    e_det: float = 0.0
    n_submaps: int = 0
    wall_s: float = 0.0


@dataclass
class DiagnosticsSeries:
    records: list[DiagnosticsRecord] = field(default_factory=list)

    def append(self, rec: DiagnosticsRecord) -> None:
        if self.records and rec.t <= self.records[-1].t:
            raise ConfigurationError("record times must strictly increase")
        self.records.append(rec)

    def __len__(self) -> int:
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    @property
    def t(self) -> np.ndarray:
        return self.column("t")

    @property
    def e_pot(self) -> np.ndarray:
        return self.column("e_pot")


def moments(f: np.ndarray, hx: float, hv: float, vnodes: np.ndarray):
    """(mass, momentum, kinetic energy) by the periodic rectangle rule."""
    f = np.asarray(f, dtype=np.float64)
    cell = hx * hv
    col_sums = f.sum(axis=0)
    mass = cell * col_sums.sum()
    momentum = cell * (vnodes * col_sums).sum()
    e_kin = 0.5 * cell * (vnodes**2 * col_sums).sum()
    return mass, momentum, e_kin


def potential_energy(dphi: np.ndarray, hx: float) -> float:
    """(1/2) integral of the squared field, E = -dphi/dx."""
    dphi = np.asarray(dphi, dtype=np.float64)
    return 0.5 * hx * float((dphi**2).sum())


def conservation_errors(series: DiagnosticsSeries):
    """Absolute and relative drift of mass, momentum and total energy."""
    if len(series) == 0:
        raise InsufficientDataError("empty diagnostics series")
    out = {}
    for name in ("mass", "momentum", "e_tot"):
        col = series.column(name)
        abs_err = np.abs(col - col[0])
        denom = abs(col[0])
        out[name] = abs_err
        out[name + "_rel"] = abs_err / denom if denom > 0 else abs_err
    return out


def eoc(errors, refinement: float = 2.0) -> list[float]:
    """Experimental order of convergence per consecutive error pair.

    ``errors`` is ordered coarse to fine; entries with non-positive errors
    yield nan.
    """
    errors = list(errors)
    if len(errors) < 2:
        raise InsufficientDataError("need at least two errors for an order estimate")
    out = []
    for e_coarse, e_fine in zip(errors, errors[1:]):
        if e_coarse > 0 and e_fine > 0:
            out.append(float(np.log(e_coarse / e_fine) / np.log(refinement)))
        else:
            out.append(float("nan"))
    return out


def radial_spectrum(f: np.ndarray) -> np.ndarray:
    """Shell sums of 2D Fourier magnitudes over unit-width integer shells."""
    f = np.asarray(f, dtype=np.float64)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise ConfigurationError(f"expected a square 2D field, got shape {f.shape}")
    n = f.shape[0]
    coef = np.abs(np.fft.fft2(f)) / f.size
    k = np.fft.fftfreq(n) * n
    kmag = np.hypot(k[:, None], k[None, :])
    shells = np.rint(kmag).astype(np.int64)
    return np.bincount(shells.ravel(), weights=coef.ravel())


@dataclass
class DampingFit:
    gamma: float
    omega_r: float
    peak_times: np.ndarray
    peak_values: np.ndarray
    residual: float


def _refine_peak(t, y, i):
    # Parabolic refinement through (t, log y) at a strict 3-point maximum.
    lg = np.log(y[i - 1: i + 2])
    denom = lg[0] - 2.0 * lg[1] + lg[2]
    if denom >= 0:
        return t[i], y[i]
    shift = 0.5 * (lg[0] - lg[2]) / denom
    ts = t[i] + shift * (t[i + 1] - t[i])
    ys = np.exp(lg[1] - 0.25 * (lg[0] - lg[2]) * shift)
    return ts, ys


def find_peaks(t: np.ndarray, y: np.ndarray, threshold: float = 0.0,
               refine: bool = True):
    """Strict 3-point local maxima after t=0, at or above the threshold."""
    t = np.asarray(t, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pt, pv = [], []
    for i in range(1, t.size - 1):
        if t[i] <= 0 or y[i] < threshold:
            continue
        if y[i] > y[i - 1] and y[i] > y[i + 1]:
            if refine and y[i - 1] > 0 and y[i + 1] > 0:
                ti, yi = _refine_peak(t, y, i)
            else:
                ti, yi = t[i], y[i]
            pt.append(ti)
            pv.append(yi)
    return np.array(pt), np.array(pv)


def fit_damping(t: np.ndarray, epot: np.ndarray,
                threshold: float = 1e-17) -> DampingFit:
    """Field damping rate and frequency from the potential-energy peaks.

    The energy is quadratic in the field, so the fitted log-peak slope is
    2*gamma and the peak spacing is half the field period: gamma comes from
    half the least-squares slope, omega_r from pi over the mean spacing.
    """
    pt, pv = find_peaks(t, epot, threshold)
    if pt.size < 3:
        raise InsufficientDataError(
            f"need at least 3 peaks above {threshold:g}, found {pt.size}"
        )
    slope, intercept = np.polyfit(pt, np.log(pv), 1)
    resid = float(np.sqrt(np.mean((np.log(pv) - (slope * pt + intercept)) ** 2)))
    gamma = 0.5 * float(slope)
    omega_r = float(np.pi / np.mean(np.diff(pt)))
    return DampingFit(gamma, omega_r, pt, pv, resid)


def fit_damping_windows(t, epot, windows, threshold: float = 0.0):
    """Independent damping fits over a sequence of (t_lo, t_hi) windows."""
    t = np.asarray(t, dtype=np.float64)
    epot = np.asarray(epot, dtype=np.float64)
    fits = []
    for t_lo, t_hi in windows:
        sel = (t >= t_lo) & (t <= t_hi)
        if sel.sum() < 5:
            raise InsufficientDataError(f"window ({t_lo}, {t_hi}) has too few samples")
        fits.append(fit_damping(t[sel], epot[sel], threshold))
    return fits


def recurrence_time(k: float, dv: float) -> float:
    """Aliasing revival time of a velocity grid with spacing dv."""
    if k <= 0 or dv <= 0:
        raise ConfigurationError("k and dv must be positive")
    return 2.0 * np.pi / (k * dv)


def saturation_time(t: np.ndarray, epot: np.ndarray, t_min: float = 0.0) -> float:
    """Time at which a decaying oscillation's peak envelope bottoms out.

    The raw series passes near zero every half oscillation period, so the
    envelope (the sequence of local maxima) is what saturates, not the
    pointwise minimum.
    """
    t = np.asarray(t, dtype=np.float64)
    epot = np.asarray(epot, dtype=np.float64)
    pt, pv = find_peaks(t, epot)
    sel = pt > t_min
    if not sel.any():
        raise InsufficientDataError("no envelope peaks after t_min")
    idx = int(np.argmin(pv[sel]))
    return float(pt[sel][idx])


def revival_time(t: np.ndarray, epot: np.ndarray,
                 drop: float = 5e-2) -> float:
    """Peak time of the aliasing revival after the initial decay.

    The envelope first has to fall below ``drop`` times its initial level;
    the strongest envelope peak after that marks the revival.
    """
    pt, pv = find_peaks(np.asarray(t, float), np.asarray(epot, float))
    if pt.size < 2:
        raise InsufficientDataError("no envelope peaks to search")
    below = np.nonzero(pv < drop * pv[0])[0]
    if below.size == 0:
        raise InsufficientDataError("envelope never decayed below the drop level")
    # anchor at the turn-around (envelope minimum past the drop), then take
    # the strongest envelope peak after it
    start = below[0]
    turn = start + int(np.argmin(pv[start:]))
    idx = turn + int(np.argmax(pv[turn:]))
    return float(pt[idx])
