"""Config files, CSV series, binary snapshots and the command line."""

import numpy as np
import pytest

from vlamap import DiagnosticsRecord, DiagnosticsSeries, preset_config
from vlamap.cli import main
from vlamap.errors import ConfigParseError
from vlamap.io import (
    CSV_HEADER,
    parse_config,
    read_snapshot,
    read_timeseries,
    write_config,
    write_snapshot,
    write_timeseries,
)


def make_series(n=3):
    s = DiagnosticsSeries()
    rng = np.random.default_rng(0)
    for i in range(n):
        s.append(DiagnosticsRecord(
            t=float(i), mass=rng.uniform(1, 2), momentum=rng.uniform(-1, 1),
            e_kin=rng.uniform(), e_pot=rng.uniform(), e_tot=rng.uniform(),
            e_det=rng.uniform(0, 0.1), n_submaps=i, wall_s=0.5 * i,
        ))
    return s


class TestConfigFiles:
    def test_preset_roundtrip(self, tmp_path):
        cfg = preset_config("two-stream")
        path = tmp_path / "run.cfg"
        write_config(cfg, path)
        back = parse_config(path)
        assert back == cfg

    def test_landau_preset_values(self, tmp_path):
        path = tmp_path / "landau.cfg"
        path.write_text("preset = landau-linear\n")
        cfg = parse_config(path)
        assert cfg.k == 0.5 and cfg.eps == 0.05
        assert cfg.domain.Lv == pytest.approx(4 * np.pi)
        assert cfg.domain.v_star == pytest.approx(3.8 * np.pi)

    def test_preset_with_overrides(self, tmp_path):
        path = tmp_path / "over.cfg"
        path.write_text("preset = landau-linear\nN = 16\ndt = 0.25\n")
        cfg = parse_config(path)
        assert cfg.N == 16 and cfg.dt == 0.25
        assert cfg.k == 0.5  # untouched preset values survive

    def test_unknown_key_reports_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("preset = landau-linear\nwavenumber = 3\n")
        with pytest.raises(ConfigParseError, match="line 2"):
            parse_config(path)

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("# comment\nN = sixteen\n")
        with pytest.raises(ConfigParseError, match="line 2"):
            parse_config(path)

    def test_negative_dt_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("preset = landau-linear\ndt = -0.5\n")
        with pytest.raises(ConfigParseError):
            parse_config(path)

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "c.cfg"
        path.write_text("\n# settings\npreset = landau-linear  # inline\n\n")
        assert parse_config(path).k == 0.5


class TestTimeseries:
    def test_empty_series_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_timeseries(DiagnosticsSeries(), path)
        assert path.read_text() == CSV_HEADER + "\n"

    def test_roundtrip_bit_identical(self, tmp_path):
        s = make_series()
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_timeseries(s, p1)
        write_timeseries(read_timeseries(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(Exception):
            read_timeseries(path)


class TestSnapshots:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(2)
        f = rng.standard_normal((16, 24))
        path = tmp_path / "snap.bin"
        write_snapshot(f, {"Lx": 1.0, "Lv": 2.0, "t": 3.5}, path)
        back, meta = read_snapshot(path)
        assert np.array_equal(back, f)
        assert meta["t"] == 3.5
        assert meta["byte_order"] == "little"

    def test_file_size(self, tmp_path):
        path = tmp_path / "snap.bin"
        write_snapshot(np.zeros((64, 64)), {"Lx": 1.0, "Lv": 1.0, "t": 0.0}, path)
        assert path.stat().st_size == 64 * 64 * 8

    def test_v_fastest_layout(self, tmp_path):
        f = np.arange(12.0).reshape(3, 4)
        path = tmp_path / "s.bin"
        write_snapshot(f, {"Lx": 1.0, "Lv": 1.0, "t": 0.0}, path)
        raw = np.fromfile(path, dtype="<f8")
        assert np.array_equal(raw[:4], f[0])  # first x-row contiguous in v


def tiny_cfg(tmp_path, **extra):
    lines = ["preset = landau-linear", "N = 16", "N_f = 32", "N_psi = 32",
             "dt = 0.125", "T_final = 0.5"]
    lines += [f"{k} = {v}" for k, v in extra.items()]
    path = tmp_path / "tiny.cfg"
    path.write_text("\n".join(lines) + "\n")
    return path


class TestCli:
    def test_run_cmm_exit_zero(self, tmp_path, capsys):
        rc = main(["run-cmm", "--config", str(tiny_cfg(tmp_path)),
                   "--out", str(tmp_path / "out")])
        assert rc == 0
        assert (tmp_path / "out" / "cmm_timeseries.csv").exists()
        assert "run-cmm done" in capsys.readouterr().out

    def test_run_spectral_exit_zero(self, tmp_path):
        rc = main(["run-spectral", "--config", str(tiny_cfg(tmp_path)),
                   "--out", str(tmp_path / "outs")])
        assert rc == 0
        assert (tmp_path / "outs" / "spectral_timeseries.csv").exists()

    def test_unknown_subcommand_usage_error(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_config_is_usage_error(self, capsys):
        assert main(["run-cmm"]) == 1
        assert "error" in capsys.readouterr().err

    def test_compare_identical(self, tmp_path, capsys):
        f = np.ones((8, 8))
        a, b = tmp_path / "a.bin", tmp_path / "b.bin"
        write_snapshot(f, {"Lx": 1.0, "Lv": 1.0, "t": 0.0}, a)
        write_snapshot(f, {"Lx": 1.0, "Lv": 1.0, "t": 0.0}, b)
        assert main(["compare", str(a), str(b)]) == 0
        assert capsys.readouterr().out.strip() == "0.0"

    def test_snapshot_flag_and_manifest(self, tmp_path):
        out = tmp_path / "snaps"
        rc = main(["run-cmm", "--config", str(tiny_cfg(tmp_path)),
                   "--out", str(out), "--snapshot-every", "2"])
        assert rc == 0
        bins = sorted(out.glob("cmm_f_t*.bin"))
        assert len(bins) == 3  # t = 0, 0.25, 0.5
        manifest = (out / "cmm_manifest.txt").read_text()
        for b in bins:
            assert b.name in manifest

    def test_determinism_of_physics_columns(self, tmp_path):
        cfg = tiny_cfg(tmp_path)
        rows = []
        for sub in ("r1", "r2"):
            out = tmp_path / sub
            assert main(["run-cmm", "--config", str(cfg), "--out", str(out)]) == 0
            text = (out / "cmm_timeseries.csv").read_text().splitlines()
            # drop the wall-clock column; everything else must match exactly
            rows.append([",".join(line.split(",")[:-1]) for line in text])
        assert rows[0] == rows[1]

    def test_zoom_command(self, tmp_path):
        out = tmp_path / "zoom"
        rc = main(["zoom", "--config", str(tiny_cfg(tmp_path)),
                   "--out", str(out), "--levels", "2", "--factor", "4",
                   "--resolution", "16", "--center", "6.28,0.0"])
        assert rc == 0
        files = sorted(out.glob("zoom_level*.bin"))
        assert len(files) == 3
        for f in files:
            arr, _ = read_snapshot(f)
            assert arr.shape == (16, 16)
            assert np.isfinite(arr).all()

    def test_spectrum_of_snapshot(self, tmp_path, capsys):
        f = np.ones((16, 16))
        snap = tmp_path / "f.bin"
        write_snapshot(f, {"Lx": 1.0, "Lv": 1.0, "t": 0.0}, snap)
        out = tmp_path / "spec"
        assert main(["spectrum", "--snapshot", str(snap), "--out", str(out)]) == 0
        text = (out / "spectrum_f.csv").read_text().splitlines()
        assert text[0] == "k,R"
        assert float(text[1].split(",")[1]) == pytest.approx(1.0)
