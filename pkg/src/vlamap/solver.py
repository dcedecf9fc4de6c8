"""Full solver pipeline: initial conditions, configuration and the time loop.

Each step samples the transported density on the sampling grid through the
composed map, solves for the potential there, upsamples onto the velocity
grid, assembles the stream function, and advects the map one step backward
with time-extrapolated velocities; remapping and diagnostics follow.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .diagnostics import DiagnosticsRecord, DiagnosticsSeries, moments, potential_energy
from .errors import ConfigurationError
from .flowmap import (
    SubmapStack,
    VelocityHistory,
    advect_map_step,
    extrapolated_velocity,
    identity_map,
    sample_pdf,
)
from .grids import Domain, Grid2D, build_grid
from .periodize import PeriodizedVelocity
from .poisson import assemble_stream, charge_density, solve_poisson, zero_pad_upsample


@dataclass(frozen=True)
class InitialCondition:
    """Closed-form phase-space density with known bounds."""

    name: str
    fn: object  # vectorized f0(x, v)
    sup: float
    inf: float = 0.0
    params: dict = field(default_factory=dict)

    def __call__(self, x, v):
        return self.fn(x, v)


def ic_landau(eps: float, k: float) -> InitialCondition:
    """Cosine-perturbed Maxwellian."""
    if eps < 0 or k <= 0:
        raise ConfigurationError(f"need eps >= 0 and k > 0, got eps={eps}, k={k}")
    norm = 1.0 / np.sqrt(2.0 * np.pi)

    def fn(x, v):
        return (1.0 + eps * np.cos(k * x)) * norm * np.exp(-0.5 * v * v)

    return InitialCondition("landau", fn, (1.0 + eps) * norm,
                            params={"eps": eps, "k": k})


def ic_two_stream(eps: float, k: float, v0: float) -> InitialCondition:
    """Two counter-propagating beams, even in v."""
    if eps < 0 or k <= 0 or v0 < 0:
        raise ConfigurationError(
            f"need eps >= 0, k > 0, v0 >= 0, got eps={eps}, k={k}, v0={v0}"
        )
    norm = 1.0 / (2.0 * np.sqrt(2.0 * np.pi))

    def fn(x, v):
        return (1.0 + eps * np.cos(k * x)) * norm * (
            np.exp(-0.5 * (v - v0) ** 2) + np.exp(-0.5 * (v + v0) ** 2)
        )

    sup = (1.0 + eps) * norm * (1.0 + np.exp(-2.0 * v0 * v0))
    return InitialCondition("two-stream", fn, float(sup),
                            params={"eps": eps, "k": k, "v0": v0})


def make_ic(name: str, eps: float, k: float, v0: float = 0.0) -> InitialCondition:
    if name == "landau":
        return ic_landau(eps, k)
    if name == "two-stream":
        return ic_two_stream(eps, k, v0)
    raise ConfigurationError(f"unknown initial condition {name!r}")


@dataclass
class SimulationConfig:
    """All knobs of a run; defaults follow the standard parameter tables."""

    domain: Domain
    N: int
    N_f: int
    N_psi: int
    T_final: float
    ic: str = "landau"
    eps: float = 0.05
    k: float = 0.5
    v0: float = 0.0
    dt: float | None = None          # None: conservative 1/(N_psi*Lv) rule
    delta_det: float = 0.05
    stencil_eps: float = 5e-3
    ext_a: float | None = None       # None: Lv - v_star
    diag_every: int = 1
    snapshot_every: int = 0          # steps between snapshots; 0 disables
    max_submaps: int = 512
    abort_on_support_exit: bool = False

    def __post_init__(self):
        if self.T_final <= 0:
            raise ConfigurationError(f"T_final must be positive, got {self.T_final}")
        if self.dt is not None and self.dt <= 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.delta_det <= 0:
            raise ConfigurationError(f"delta_det must be positive, got {self.delta_det}")
        if self.stencil_eps <= 0:
            raise ConfigurationError(
                f"stencil_eps must be positive, got {self.stencil_eps}"
            )
        if self.diag_every < 1 or self.snapshot_every < 0:
            raise ConfigurationError("invalid output cadence")

    @property
    def dt_effective(self) -> float:
        if self.dt is not None:
            return self.dt
        return 1.0 / (self.N_psi * self.domain.Lv)

    def initial_condition(self) -> InitialCondition:
        return make_ic(self.ic, self.eps, self.k, self.v0)

    def with_overrides(self, **kw) -> "SimulationConfig":
        return replace(self, **kw)


def preset_config(name: str) -> SimulationConfig:
    """Named parameter sets of the standard benchmark experiments."""
    if name == "landau-linear":
        dom = Domain(Lx=4.0 * np.pi, Lv=4.0 * np.pi, v_star=3.8 * np.pi)
        return SimulationConfig(dom, N=64, N_f=512, N_psi=512, T_final=10.0,
                                ic="landau", eps=0.05, k=0.5, dt=1.0 / 32)
    if name == "landau-nonlinear":
        dom = Domain(Lx=4.0 * np.pi, Lv=4.0 * np.pi, v_star=3.8 * np.pi)
        return SimulationConfig(dom, N=256, N_f=1024, N_psi=1024, T_final=100.0,
                                ic="landau", eps=0.5, k=0.5, dt=1.0 / 16,
                                delta_det=0.005)
    if name == "two-stream":
        dom = Domain(Lx=2.0 * np.pi / 0.2, Lv=5.0 * np.pi, v_star=4.75 * np.pi)
        return SimulationConfig(dom, N=64, N_f=512, N_psi=512, T_final=80.0,
                                ic="two-stream", eps=0.05, k=0.2, v0=3.0,
                                dt=1.0 / 16)
    raise ConfigurationError(f"unknown preset {name!r}")


PRESETS = ("landau-linear", "landau-nonlinear", "two-stream")


@dataclass
class Snapshot:
    t: float
    f: np.ndarray


@dataclass
class CMMRun:
    stack: SubmapStack
    series: DiagnosticsSeries
    snapshots: list[Snapshot]
    grid_f: Grid2D
    pv: PeriodizedVelocity
    config: SimulationConfig


def _check_ic_support(ic, grid_f: Grid2D, v_star: float) -> None:
    band = np.abs(grid_f.v) >= v_star
    if not band.any():
        return
    X, V = np.meshgrid(grid_f.x, grid_f.v[band], indexing="ij")
    peak = float(np.abs(ic(X, V)).max())
    if peak > 1e-10:
        warnings.warn(
            f"initial condition is not negligible outside |v| <= v_star "
            f"(max {peak:.3e}); the frozen velocity there is unphysical",
            RuntimeWarning,
            stacklevel=3,
        )


def run_cmm(config: SimulationConfig) -> CMMRun:
    """Run the characteristic-map solve up to T_final."""
    dom = config.domain
    dt = config.dt_effective
    n_steps = int(round(config.T_final / dt))
    if abs(n_steps * dt - config.T_final) > 1e-9 * max(1.0, config.T_final):
        raise ConfigurationError(
            f"T_final={config.T_final} is not an integer number of steps of dt={dt}"
        )

    grid_map = build_grid(dom, config.N, config.N)
    grid_f = build_grid(dom, config.N_f, config.N_f)
    grid_psi = build_grid(dom, config.N_psi, config.N_psi)
    pv = PeriodizedVelocity.build(grid_psi.v, dom.Lv, dom.v_star, config.ext_a)

    ic = config.initial_condition()
    _check_ic_support(ic, grid_f, dom.v_star)

    stack = SubmapStack(identity_map(grid_map), config.max_submaps)
    history = VelocityHistory()
    series = DiagnosticsSeries()
    snapshots: list[Snapshot] = []

    Xf, Vf = grid_f.meshes()
    band = np.abs(grid_f.v) > dom.v_star
    t_start = time.perf_counter()
    e_det_last = 0.0

    for step in range(n_steps + 1):
        t = step * dt
        f = sample_pdf(stack, ic, Xf, Vf)

        band_mass = grid_f.hx * grid_f.hv * float(np.abs(f[:, band]).sum())
        if band_mass > 1e-8:
            msg = (f"t={t:.6g}: density mass {band_mass:.3e} outside "
                   f"|v| <= v_star; support left the effective region")
            if config.abort_on_support_exit:
                raise ConfigurationError(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=2)

        rho = charge_density(f, grid_f.hv, grid_f.hx)
        # check neutrality once at setup; later drift is what the mass
        # diagnostics track, warning per step would just repeat it
        phi, dphi = solve_poisson(
            rho, dom.l, neutrality_tol=1e-6 if step == 0 else np.inf)

        if step % config.diag_every == 0 or step == n_steps:
            mass, momentum, e_kin = moments(f, grid_f.hx, grid_f.hv, grid_f.v)
            e_pot = potential_energy(dphi.samples, grid_f.hx)
            series.append(DiagnosticsRecord(
                t=t, mass=mass, momentum=momentum, e_kin=e_kin, e_pot=e_pot,
                e_tot=e_kin + e_pot, e_det=e_det_last,
                n_submaps=stack.n_submaps,
                wall_s=time.perf_counter() - t_start,
            ))
        if config.snapshot_every and (step % config.snapshot_every == 0
                                      or step == n_steps):
            snapshots.append(Snapshot(t, f.copy()))
        if step == n_steps:
            break

        phi_psi = zero_pad_upsample(phi, config.N_psi)
        dphi_psi = zero_pad_upsample(dphi, config.N_psi)
        psi = assemble_stream(phi_psi, dphi_psi, pv, grid_psi)
        history.push(t, psi)

        stages = (
            extrapolated_velocity(history, t + dt),
            extrapolated_velocity(history, t + 0.5 * dt),
            extrapolated_velocity(history, t),
        )
        stack.active = advect_map_step(stack.active, stages, dt, config.stencil_eps)
        _, e_det_last = stack.remap_if_needed(config.delta_det)

    return CMMRun(stack, series, snapshots, grid_f, pv, config)
