"""Command-line interface reproducing the benchmark experiments.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io
from .backend import BACKEND
from .diagnostics import radial_spectrum
from .errors import (
    BlowUpError,
    InsufficientDataError,
    RootNotFoundError,
    StateError,
    VlamapError,
)
from .experiments import (
    cross_solver_convergence,
    damping_sweep,
    format_damping_table,
    spatial_convergence,
    temporal_convergence,
)
from .flowmap import zoom_eval
from .solver import PRESETS, SimulationConfig, preset_config, run_cmm
from .spectral import run_spectral


def _float_list(raw: str) -> list[float]:
    return [float(tok) for tok in raw.split(",") if tok]


def _int_list(raw: str) -> list[int]:
    return [int(tok) for tok in raw.split(",") if tok]


def _add_config_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=PRESETS, help="named experiment parameters")
    p.add_argument("--config", type=Path, help="key=value config file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--snapshot-every", type=int, default=None, metavar="STEPS")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a single config entry (repeatable)")


def _load_config(args) -> SimulationConfig:
    if args.config is not None:
        cfg = io.parse_config(args.config)
    elif args.preset is not None:
        cfg = preset_config(args.preset)
    else:
        raise VlamapError("either --preset or --config is required")
    overrides = {}
    for item in args.set:
        key, _, raw = item.partition("=")
        if not raw:
            raise VlamapError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = io._parse_value(key.strip(), raw.strip(), 0)
    if args.snapshot_every is not None:
        overrides["snapshot_every"] = args.snapshot_every
    if overrides:
        cfg = io.config_from_entries(
            {**_config_entries(cfg), **overrides}
        )
    return cfg


def _config_entries(cfg: SimulationConfig) -> dict:
    dom = cfg.domain
    return {
        "Lx": dom.Lx, "Lv": dom.Lv, "v_star": dom.v_star, "l": dom.l,
        "ic": cfg.ic, "eps": cfg.eps, "k": cfg.k, "v0": cfg.v0,
        "N": cfg.N, "N_f": cfg.N_f, "N_psi": cfg.N_psi,
        "T_final": cfg.T_final, "dt": cfg.dt, "delta_det": cfg.delta_det,
        "stencil_eps": cfg.stencil_eps, "ext_a": cfg.ext_a,
        "diag_every": cfg.diag_every, "snapshot_every": cfg.snapshot_every,
        "max_submaps": cfg.max_submaps,
        "abort_on_support_exit": cfg.abort_on_support_exit,
    }


def _write_outputs(out_dir: Path, tag: str, series, snapshots, cfg, command: str):
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = io.RunManifest(command=command, config_echo=_echo(cfg))
    csv_path = out_dir / f"{tag}_timeseries.csv"
    io.write_timeseries(series, csv_path)
    manifest.add(csv_path)
    for snap in snapshots:
        path = out_dir / f"{tag}_f_t{snap.t:08.3f}.bin"
        io.write_snapshot(snap.f, {"Lx": cfg.domain.Lx, "Lv": cfg.domain.Lv,
                                   "t": snap.t}, path)
        manifest.add(path)
        manifest.add(path.with_suffix(path.suffix + ".meta"))
    manifest.write(out_dir / f"{tag}_manifest.txt")
    return csv_path


def _echo(cfg: SimulationConfig) -> str:
    return "\n".join(f"{k} = {v}" for k, v in _config_entries(cfg).items())


def cmd_run_cmm(args) -> int:
    cfg = _load_config(args)
    run = run_cmm(cfg)
    csv_path = _write_outputs(args.out, "cmm", run.series, run.snapshots, cfg, "run-cmm")
    last = run.series.records[-1]
    print(f"run-cmm done: t={last.t:g}, {run.stack.n_submaps} submaps, "
          f"wall {last.wall_s:.1f}s, backend={BACKEND} -> {csv_path}")
    return 0


def cmd_run_spectral(args) -> int:
    cfg = _load_config(args)
    run = run_spectral(cfg)
    csv_path = _write_outputs(args.out, "spectral", run.series, run.snapshots,
                              cfg, "run-spectral")
    last = run.series.records[-1]
    print(f"run-spectral done: t={last.t:g}, wall {last.wall_s:.1f}s -> {csv_path}")
    return 0


def cmd_convergence_space(args) -> int:
    cfg = _load_config(args).with_overrides(delta_det=np.inf)
    table = spatial_convergence(cfg, args.n_list, args.n_ref)
    text = table.format("N")
    print(text)
    if args.out != Path("."):
        args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "convergence_space.tsv").write_text(text + "\n")
    return 0


def cmd_convergence_time(args) -> int:
    cfg = _load_config(args).with_overrides(delta_det=np.inf)
    table = temporal_convergence(cfg, args.dt_list, args.dt_ref)
    text = table.format("dt")
    print(text)
    if args.out != Path("."):
        args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "convergence_time.tsv").write_text(text + "\n")
    return 0


def cmd_convergence_cross(args) -> int:
    cfg = _load_config(args).with_overrides(delta_det=np.inf)
    table = cross_solver_convergence(cfg, args.n_list, args.n_spectral)
    text = table.format("N")
    print(text)
    (args.out / "convergence_cross.tsv").parent.mkdir(parents=True, exist_ok=True)
    (args.out / "convergence_cross.tsv").write_text(text + "\n")
    return 0


def cmd_damping_sweep(args) -> int:
    fits = damping_sweep(args.k, N=args.N, N_fine=args.n_fine)
    text = format_damping_table(fits)
    print(text)
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "damping.tsv").write_text(text + "\n")
    return 0


def cmd_zoom(args) -> int:
    cfg = _load_config(args)
    run = run_cmm(cfg)
    dom = cfg.domain
    cx, cv = args.center
    wx, wv = dom.Lx, 2 * dom.Lv
    args.out.mkdir(parents=True, exist_ok=True)
    ic = cfg.initial_condition()
    for level in range(args.levels + 1):
        window = (cx - wx / 2, cx + wx / 2, cv - wv / 2, cv + wv / 2)
        values = zoom_eval(run.stack, ic, window, args.resolution)
        path = args.out / f"zoom_level{level}.bin"
        io.write_snapshot(values, {"Lx": window[1] - window[0],
                                   "Lv": (window[3] - window[2]) / 2,
                                   "t": cfg.T_final}, path)
        print(f"zoom level {level}: window {tuple(round(w, 4) for w in window)} "
              f"-> {path}")
        wx /= args.factor
        wv /= args.factor
    return 0


def cmd_spectrum(args) -> int:
    if args.snapshot is not None:
        f, _ = io.read_snapshot(args.snapshot)
        spectra = {"f": radial_spectrum(f)}
    else:
        cfg = _load_config(args)
        run = run_cmm(cfg)
        Xf, Vf = run.grid_f.meshes()
        from .flowmap import sample_pdf
        spectra = {"f": radial_spectrum(
            sample_pdf(run.stack, cfg.initial_condition(), Xf, Vf))}
        for i, sub in enumerate([*run.stack.stored, run.stack.active]):
            spectra[f"submap{i}_x"] = radial_spectrum(sub.disp_x.f)
            spectra[f"submap{i}_v"] = radial_spectrum(sub.disp_v.f)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, spec in spectra.items():
        path = args.out / f"spectrum_{name}.csv"
        lines = ["k,R"] + [f"{k},{float(val)!r}" for k, val in enumerate(spec)]
        path.write_text("\n".join(lines) + "\n")
        print(f"spectrum {name}: {spec.size} shells -> {path}")
    return 0


def cmd_compare(args) -> int:
    fa, _ = io.read_snapshot(args.a)
    fb, _ = io.read_snapshot(args.b)
    if fa.shape != fb.shape:
        raise VlamapError(f"shape mismatch: {fa.shape} vs {fb.shape}")
    diff = float(np.abs(fa - fb).max())
    print(diff)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlamap",
        description="Characteristic-map and pseudo-spectral solvers for the "
                    "periodized 1D+1D collisionless plasma system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run-cmm", help="run the characteristic-map solver")
    _add_config_options(p)
    p.set_defaults(fn=cmd_run_cmm)

    p = sub.add_parser("run-spectral", help="run the pseudo-spectral solver")
    _add_config_options(p)
    p.set_defaults(fn=cmd_run_spectral)

    p = sub.add_parser("convergence-space", help="map-grid refinement study")
    _add_config_options(p)
    p.add_argument("--n-list", type=_int_list, default=[32, 64, 128, 256])
    p.add_argument("--n-ref", type=int, default=512)
    p.set_defaults(fn=cmd_convergence_space)

    p = sub.add_parser("convergence-time", help="time-step refinement study")
    _add_config_options(p)
    p.add_argument("--dt-list", type=_float_list, default=[1 / 16, 1 / 32, 1 / 64])
    p.add_argument("--dt-ref", type=float, default=1 / 256)
    p.set_defaults(fn=cmd_convergence_time)

    p = sub.add_parser("convergence-cross",
                       help="refinement study against the spectral solver")
    _add_config_options(p)
    p.add_argument("--n-list", type=_int_list, default=[32, 64, 128])
    p.add_argument("--n-spectral", type=int, default=256)
    p.set_defaults(fn=cmd_convergence_cross)

    p = sub.add_parser("damping-sweep", help="field damping fits over wave numbers")
    p.add_argument("--k", type=_float_list, required=True)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--n-fine", type=int, default=1024)
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(fn=cmd_damping_sweep)

    p = sub.add_parser("zoom", help="run and sample nested windows at full depth")
    _add_config_options(p)
    p.add_argument("--center", type=_float_list, default=[0.0, 0.0],
                   help="window center x,v")
    p.add_argument("--factor", type=float, default=4.0)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--resolution", type=int, default=256)
    p.set_defaults(fn=cmd_zoom)

    p = sub.add_parser("spectrum", help="radial spectra of a snapshot or submaps")
    _add_config_options(p)
    p.add_argument("--snapshot", type=Path, default=None)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("compare", help="L-infinity difference of two snapshots")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.set_defaults(fn=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.fn(args)
    except (BlowUpError, StateError, InsufficientDataError, RootNotFoundError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except VlamapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
