"""Characteristic-map solver for the periodized 1D+1D collisionless plasma
system, with a pseudo-spectral reference solver and shared diagnostics.
"""

from .backend import BACKEND
from .diagnostics import (
    DampingFit,
    DiagnosticsRecord,
    DiagnosticsSeries,
    eoc,
    fit_damping,
    moments,
    potential_energy,
    radial_spectrum,
    recurrence_time,
)
from .flowmap import (
    BackwardMap,
    SubmapStack,
    VelocityHistory,
    advect_map_step,
    eval_composed,
    extrapolated_velocity,
    identity_map,
    jacobian_det_error,
    sample_pdf,
    zoom_eval,
)
from .grids import (
    Domain,
    Grid2D,
    HermiteField2D,
    build_grid,
    hermite_eval,
    hermite_eval_grad,
    jet_from_stencil,
)
from .periodize import PeriodizedVelocity, mollifier_eta, optimize_extension
from .poisson import (
    ScalarProfile1D,
    assemble_stream,
    charge_density,
    solve_poisson,
    velocity_at,
    zero_pad_upsample,
)
from .solver import (
    CMMRun,
    InitialCondition,
    SimulationConfig,
    ic_landau,
    ic_two_stream,
    preset_config,
    run_cmm,
)
from .spectral import SpectralState, SpectralVlasov, dealias_23, run_spectral

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BackwardMap",
    "CMMRun",
    "DampingFit",
    "DiagnosticsRecord",
    "DiagnosticsSeries",
    "Domain",
    "Grid2D",
    "HermiteField2D",
    "InitialCondition",
    "PeriodizedVelocity",
    "ScalarProfile1D",
    "SimulationConfig",
    "SpectralState",
    "SpectralVlasov",
    "SubmapStack",
    "VelocityHistory",
    "advect_map_step",
    "assemble_stream",
    "build_grid",
    "charge_density",
    "dealias_23",
    "eoc",
    "eval_composed",
    "extrapolated_velocity",
    "fit_damping",
    "hermite_eval",
    "hermite_eval_grad",
    "ic_landau",
    "ic_two_stream",
    "identity_map",
    "jacobian_det_error",
    "jet_from_stencil",
    "moments",
    "mollifier_eta",
    "optimize_extension",
    "potential_energy",
    "preset_config",
    "radial_spectrum",
    "recurrence_time",
    "run_cmm",
    "run_spectral",
    "sample_pdf",
    "solve_poisson",
    "velocity_at",
    "zero_pad_upsample",
    "zoom_eval",
]
