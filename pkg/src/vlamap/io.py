"""Configuration files, time-series CSV, binary snapshots and run manifests.

Config files are flat ``key = value`` text with ``#`` comments; snapshots
are raw little-endian float64 (row-major, v fastest) next to a key=value
sidecar describing the grid.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsRecord, DiagnosticsSeries
from .errors import ConfigParseError, ConfigurationError
from .grids import Domain
from .solver import PRESETS, SimulationConfig, preset_config

CSV_HEADER = "t,mass,momentum,e_kin,e_pot,e_tot,e_det,n_submaps,wall_s"

_FLOAT_KEYS = {
    "Lx", "Lv", "v_star", "l", "eps", "k", "v0", "dt", "T_final",
    "delta_det", "stencil_eps", "ext_a",
}
_INT_KEYS = {"N", "N_f", "N_psi", "diag_every", "snapshot_every", "max_submaps"}
_STR_KEYS = {"preset", "ic"}
_BOOL_KEYS = {"abort_on_support_exit"}


def _parse_value(key: str, raw: str, line: int):
    try:
        if key in _FLOAT_KEYS:
            return None if raw.lower() == "none" else float(raw)
        if key in _INT_KEYS:
            return int(raw)
        if key in _BOOL_KEYS:
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigParseError(f"cannot parse {key} = {raw!r}", line) from None


def parse_config(path) -> SimulationConfig:
    """Read a key=value config file, optionally layered over a preset."""
    text = Path(path).read_text()
    entries: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigParseError(f"expected key = value, got {stripped!r}", lineno)
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in (_FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _BOOL_KEYS):
            raise ConfigParseError(f"unknown key {key!r}", lineno)
        entries[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno

    try:
        return config_from_entries(entries)
    except ConfigurationError as exc:
        first = min(lines.values()) if lines else None
        raise ConfigParseError(str(exc), first) from exc


def config_from_entries(entries: dict) -> SimulationConfig:
    entries = dict(entries)
    preset = entries.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigurationError(
                f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}"
            )
        cfg = preset_config(str(preset))
        dom_kw = {k: entries.pop(k) for k in ("Lx", "Lv", "v_star", "l")
                  if k in entries}
        if dom_kw:
            merged = {"Lx": cfg.domain.Lx, "Lv": cfg.domain.Lv,
                      "v_star": cfg.domain.v_star, "l": cfg.domain.l}
            merged.update(dom_kw)
            entries["__domain__"] = Domain(**merged)
        cfg = cfg.with_overrides(**{
            ("domain" if k == "__domain__" else k): v for k, v in entries.items()
        })
        return cfg

    missing = [k for k in ("Lx", "Lv", "v_star") if k not in entries]
    if missing:
        raise ConfigurationError(
            f"config without preset must define {', '.join(missing)}"
        )
    domain = Domain(
        Lx=float(entries.pop("Lx")),
        Lv=float(entries.pop("Lv")),
        v_star=float(entries.pop("v_star")),
        l=float(entries.pop("l", 1.0)),
    )
    required = [k for k in ("N", "N_f", "N_psi", "T_final") if k not in entries]
    if required:
        raise ConfigurationError(f"missing required keys: {', '.join(required)}")
    return SimulationConfig(domain=domain, **entries)


def write_config(config: SimulationConfig, path) -> None:
    dom = config.domain
    pairs = [
        ("Lx", dom.Lx), ("Lv", dom.Lv), ("v_star", dom.v_star), ("l", dom.l),
        ("ic", config.ic), ("eps", config.eps), ("k", config.k), ("v0", config.v0),
        ("N", config.N), ("N_f", config.N_f), ("N_psi", config.N_psi),
        ("T_final", config.T_final), ("dt", config.dt),
        ("delta_det", config.delta_det), ("stencil_eps", config.stencil_eps),
        ("ext_a", config.ext_a), ("diag_every", config.diag_every),
        ("snapshot_every", config.snapshot_every),
        ("max_submaps", config.max_submaps),
        ("abort_on_support_exit", config.abort_on_support_exit),
    ]
    out = []
    for key, value in pairs:
        if isinstance(value, float):
            out.append(f"{key} = {value!r}")
        else:
            out.append(f"{key} = {value}")
    Path(path).write_text("\n".join(out) + "\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_timeseries(series: DiagnosticsSeries, path) -> None:
    rows = [CSV_HEADER]
    for r in series.records:
        rows.append(",".join([
            _fmt(r.t), _fmt(r.mass), _fmt(r.momentum), _fmt(r.e_kin),
            _fmt(r.e_pot), _fmt(r.e_tot), _fmt(r.e_det),
            str(r.n_submaps), _fmt(r.wall_s),
        ]))
    Path(path).write_text("\n".join(rows) + "\n")


def read_timeseries(path) -> DiagnosticsSeries:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigurationError(f"{path} is not a diagnostics CSV")
    series = DiagnosticsSeries()
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = line.split(",")
        series.append(DiagnosticsRecord(
            t=float(parts[0]), mass=float(parts[1]), momentum=float(parts[2]),
            e_kin=float(parts[3]), e_pot=float(parts[4]), e_tot=float(parts[5]),
            e_det=float(parts[6]), n_submaps=int(parts[7]), wall_s=float(parts[8]),
        ))
    return series


def write_snapshot(f: np.ndarray, meta: dict, path) -> None:
    """Raw float64 dump (row-major, v fastest) plus a key=value sidecar."""
    path = Path(path)
    arr = np.ascontiguousarray(f, dtype="<f8")
    arr.tofile(path)
    nx, nv = arr.shape
    side = {
        "nx": nx, "nv": nv,
        "Lx": meta.get("Lx"), "Lv": meta.get("Lv"),
        "t": meta.get("t"), "field_name": meta.get("field_name", "f"),
        "byte_order": "little",
    }
    text = "\n".join(f"{k} = {v!r}" if isinstance(v, float) else f"{k} = {v}"
                     for k, v in side.items())
    path.with_suffix(path.suffix + ".meta").write_text(text + "\n")


def read_snapshot(path) -> tuple[np.ndarray, dict]:
    path = Path(path)
    meta_path = path.with_suffix(path.suffix + ".meta")
    if not meta_path.exists():
        raise ConfigurationError(f"snapshot sidecar {meta_path} not found")
    meta: dict = {}
    for line in meta_path.read_text().splitlines():
        if not line.strip():
            continue
        key, _, raw = line.partition("=")
        meta[key.strip()] = raw.strip()
    nx, nv = int(meta["nx"]), int(meta["nv"])
    arr = np.fromfile(path, dtype="<f8").reshape(nx, nv)
    for key in ("Lx", "Lv", "t"):
        if key in meta and meta[key] not in ("None", None):
            meta[key] = float(meta[key])
    return arr, meta


@dataclass
class RunManifest:
    """Record of what a CLI invocation produced."""

    command: str
    config_echo: str
    started: float = field(default_factory=time.time)
    finished: float | None = None
    outputs: list[str] = field(default_factory=list)
    version: str = "0.1.0"

    def add(self, path) -> None:
        self.outputs.append(str(path))

    def write(self, path) -> None:
        self.finished = time.time()
        lines = [
            f"command = {self.command}",
            f"version = {self.version}",
            f"python = {sys.version.split()[0]}",
            f"started = {self.started!r}",
            f"finished = {self.finished!r}",
            "config:",
        ]
        lines += ["  " + ln for ln in self.config_echo.splitlines()]
        lines.append("outputs:")
        lines += ["  " + p for p in self.outputs]
        Path(path).write_text("\n".join(lines) + "\n")
