"""Benchmark experiment drivers: convergence sweeps, damping fits, recurrence.

These wrap the solvers into the parameter studies used for validation; the
CLI and the acceptance suite both call them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import DampingFit, eoc, fit_damping
from .flowmap import eval_composed, sample_pdf
from .grids import Domain
from .solver import CMMRun, SimulationConfig, run_cmm
from .spectral import run_spectral


def final_density(run: CMMRun) -> np.ndarray:
    """Density on the sampling grid at the final time of a finished run."""
    Xf, Vf = run.grid_f.meshes()
    return sample_pdf(run.stack, run.config.initial_condition(), Xf, Vf)


def final_map(run: CMMRun):
    Xf, Vf = run.grid_f.meshes()
    return eval_composed(run.stack, Xf, Vf)


def solution_errors(run: CMMRun, ref: CMMRun,
                    map_v_window: float | None = None) -> dict[str, float]:
    """L-infinity / drift error measures of a run against a reference run.

    ``map_v_window`` restricts the map-error norm to |v| <= window; the map
    carried in the velocity-extension band has no bearing on the advected
    density there, so convergence studies measure it where the density
    support lives.
    """
    df = float(np.abs(final_density(run) - final_density(ref)).max())
    Xa, Va = final_map(run)
    Xr, Vr = final_map(ref)
    d = np.maximum(np.abs(Xa - Xr), np.abs(Va - Vr))
    if map_v_window is not None:
        d = d[:, np.abs(run.grid_f.v) <= map_v_window]
    out = {"f": df, "map": float(d.max())}
    for name, key in (("mass", "M"), ("momentum", "P"), ("e_tot", "E")):
        col = run.series.column(name)
        out[key] = float(abs(col[-1] - col[0]))
    return out


@dataclass
class ConvergenceTable:
    labels: list[float]
    errors: dict[str, list[float]]

    def orders(self) -> dict[str, list[float]]:
        return {key: eoc(vals) for key, vals in self.errors.items()}

    def format(self, label_name: str) -> str:
        keys = list(self.errors)
        lines = ["\t".join([label_name, *[f"err_{k}" for k in keys],
                            *[f"eoc_{k}" for k in keys]])]
        orders = self.orders()
        for i, lab in enumerate(self.labels):
            row = [f"{lab:g}"]
            row += [f"{self.errors[k][i]:.3e}" for k in keys]
            row += ["-" if i == 0 else f"{orders[k][i - 1]:.2f}" for k in keys]
            lines.append("\t".join(row))
        return "\n".join(lines)


def spatial_convergence(base: SimulationConfig, Ns, N_ref: int) -> ConvergenceTable:
    """Map-grid refinement study against a fine self-reference run."""
    ref = run_cmm(base.with_overrides(N=N_ref))
    errors: dict[str, list[float]] = {k: [] for k in ("f", "map", "M", "P", "E")}
    for N in Ns:
        run = run_cmm(base.with_overrides(N=N))
        for key, val in solution_errors(run, ref).items():
            errors[key].append(val)
    return ConvergenceTable(list(Ns), errors)


def temporal_convergence(base: SimulationConfig, dts, dt_ref: float,
                         map_v_window: float | None = None) -> ConvergenceTable:
    """Time-step refinement study against a fine-dt reference run."""
    ref = run_cmm(base.with_overrides(dt=dt_ref))
    errors: dict[str, list[float]] = {k: [] for k in ("f", "map")}
    for dt in dts:
        run = run_cmm(base.with_overrides(dt=dt))
        err = solution_errors(run, ref, map_v_window)
        errors["f"].append(err["f"])
        errors["map"].append(err["map"])
    return ConvergenceTable(list(dts), errors)


def cross_solver_convergence(base: SimulationConfig, Ns, N_spectral: int,
                             dt_spectral: float | None = None) -> ConvergenceTable:
    """Map-grid refinement against a pseudo-spectral reference solution."""
    spec_cfg = base.with_overrides(N=N_spectral, N_f=N_spectral,
                                   N_psi=N_spectral, dt=dt_spectral)
    spec_run = run_spectral(spec_cfg)
    f_ref = spec_run.solver.physical(spec_run.state)
    errors: dict[str, list[float]] = {"f": []}
    for N in Ns:
        run = run_cmm(base.with_overrides(N=N, N_f=N_spectral, N_psi=N_spectral))
        errors["f"].append(float(np.abs(final_density(run) - f_ref).max()))
    return ConvergenceTable(list(Ns), errors)


def landau_domain(k: float, Lv: float = 4.0 * np.pi,
                  v_star: float = 3.8 * np.pi) -> Domain:
    return Domain(Lx=2.0 * np.pi / k, Lv=Lv, v_star=v_star)


def damping_config(k: float, N: int = 64, N_fine: int = 1024,
                   eps: float = 0.05, T: float | None = None,
                   dt: float = 1.0 / 32, delta_det: float = 0.05) -> SimulationConfig:
    if T is None:
        T = 50.0 if k <= 0.5 else 25.0
    return SimulationConfig(
        landau_domain(k), N=N, N_f=N_fine, N_psi=N_fine, T_final=T,
        ic="landau", eps=eps, k=k, dt=dt, delta_det=delta_det,
    )


def damping_sweep(ks, threshold: float = 1e-17, **cfg_kw) -> dict[float, DampingFit]:
    """Damping rate and frequency fits over a list of wave numbers."""
    fits = {}
    for k in ks:
        run = run_cmm(damping_config(k, **cfg_kw))
        fits[k] = fit_damping(run.series.t, run.series.e_pot, threshold)
    return fits


def format_damping_table(fits: dict[float, DampingFit]) -> str:
    lines = ["k\tgamma\tomega_r\tn_peaks\tfit_residual"]
    for k in sorted(fits):
        f = fits[k]
        lines.append(
            f"{k:g}\t{f.gamma:.4f}\t{f.omega_r:.4f}\t{f.peak_times.size}\t{f.residual:.2e}"
        )
    return "\n".join(lines)
