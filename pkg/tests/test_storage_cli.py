import math
import os
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.cli import main
from strata.lattice import Lattice, SpectralField
from strata.simulate import SimState
from strata.storage import (
    CheckpointError,
    checkpoint_bytes,
    load_checkpoint,
    read_csv_columns,
    save_checkpoint,
    state_from_checkpoint,
    write_csv,
)


def _random_state(nx=4, ny=8, nz=4, seed=0, t=3.5):
    lat = Lattice(nx, ny, nz)
    rng = np.random.default_rng(seed)
    c = rng.normal(size=lat.shape) + 1j * rng.normal(size=lat.shape)
    return SimState(t, SpectralField(lat, c).symmetrized())


class TestCheckpoint:
    def test_roundtrip_bit_exact(self):
        st0 = _random_state(seed=7)
        back = state_from_checkpoint(checkpoint_bytes(st0))
        assert back.t == st0.t
        assert back.field.lattice == st0.field.lattice
        assert np.array_equal(back.field.coeffs, st0.field.coeffs)

    def test_file_roundtrip(self, tmp_path):
        st0 = _random_state(seed=1)
        path = tmp_path / "state.ckpt"
        save_checkpoint(path, st0)
        back = load_checkpoint(path)
        assert np.array_equal(back.field.coeffs, st0.field.coeffs)

    def test_corrupted_magic(self):
        data = checkpoint_bytes(_random_state())
        with pytest.raises(CheckpointError, match="magic"):
            state_from_checkpoint(b"XXXX" + data[4:])

    def test_bad_version(self):
        data = bytearray(checkpoint_bytes(_random_state()))
        data[4:8] = struct.pack("<I", 99)
        with pytest.raises(CheckpointError, match="version"):
            state_from_checkpoint(bytes(data))

    def test_truncation(self):
        data = checkpoint_bytes(_random_state())
        with pytest.raises(CheckpointError, match="size|truncated"):
            state_from_checkpoint(data[:-8])
        with pytest.raises(CheckpointError):
            state_from_checkpoint(data[:10])

    def test_golden_bytes_layout(self):
        # handcrafted little-endian file, as a foreign writer would produce it
        lat = Lattice(2, 2, 2, ly=8 * math.pi)
        coeffs = np.arange(8, dtype=np.complex128).reshape(2, 2, 2)
        coeffs = coeffs + 1j * (coeffs / 7.0)
        golden = (b"STCV" + struct.pack("<I", 1) + struct.pack("<III", 2, 2, 2)
                  + struct.pack("<d", 8 * math.pi) + struct.pack("<d", 1.25))
        for v in coeffs.ravel(order="C"):
            golden += struct.pack("<dd", v.real, v.imag)
        st = state_from_checkpoint(golden)
        assert st.t == 1.25
        assert st.field.lattice.ly == 8 * math.pi
        assert np.array_equal(st.field.coeffs, coeffs)
        # and our writer emits exactly those bytes back
        assert checkpoint_bytes(st) == golden

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
    def test_roundtrip_property(self, hx, hy, hz, seed):
        st0 = _random_state(2 * hx, 2 * hy, 2 * hz, seed=seed)
        back = state_from_checkpoint(checkpoint_bytes(st0))
        assert np.array_equal(back.field.coeffs, st0.field.coeffs)


class TestCsv:
    def test_roundtrip_with_manifest_comment(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv(path, ["t", "x"], [[0.0, 1.5], [1.0, 2.5]], manifest_name="m.ini")
        text = path.read_text()
        assert text.startswith("# manifest=m.ini\n")
        cols = read_csv_columns(path)
        assert cols["t"] == ["0", "1"]
        assert cols["x"] == ["1.5", "2.5"]


class TestCli:
    CFG = """
[lattice]
nx = 8
ny = 16
nz = 8

[init]
recipe = random
seed = 11
init_kmax = 2

[run]
epsilon = 1e-3
dt = 0.1
t_end = 2.0
output_every = 1.0
"""

    def _write_cfg(self, tmp_path, extra=""):
        cfg = tmp_path / "run.ini"
        cfg.write_text(self.CFG + extra)
        return str(cfg)

    def test_print_defaults(self, capsys):
        assert main(["linear", "--print-defaults"]) == 0
        out = capsys.readouterr().out
        assert "[lattice]" in out and "dt = 0.1" in out

    def test_linear_run_outputs(self, tmp_path, capsys):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "res"
        assert main(["linear", cfg, "--out", str(out)]) == 0
        csv_path = out / "linear_diagnostics.csv"
        assert csv_path.exists()
        assert (out / "linear_manifest.ini").exists()
        assert (out / "plot_linear.py").exists()
        cols = read_csv_columns(csv_path)
        assert len(cols["t"]) == 3  # t = 0, 1, 2
        text = csv_path.read_text()
        assert text.startswith("# manifest=linear_manifest.ini")
        manifest = (out / "linear_manifest.ini").read_text()
        assert "sigma_min_resolved" in manifest
        assert "seed = 11" in manifest

    def test_deterministic_csv_bytes(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["nonlinear", cfg, "--out", str(out_a), "--quiet"]) == 0
        assert main(["nonlinear", cfg, "--out", str(out_b), "--quiet"]) == 0
        a = (out_a / "nonlinear_diagnostics.csv").read_bytes()
        b = (out_b / "nonlinear_diagnostics.csv").read_bytes()
        assert a == b
        # different seed changes the bytes
        out_c = tmp_path / "c"
        assert main(["nonlinear", cfg, "--out", str(out_c), "--seed", "12",
                     "--quiet"]) == 0
        assert (out_c / "nonlinear_diagnostics.csv").read_bytes() != a

    def test_nonlinear_writes_checkpoint(self, tmp_path):
        cfg = self._write_cfg(tmp_path, extra="checkpoint_every = 1.0\n")
        out = tmp_path / "res"
        assert main(["nonlinear", cfg, "--out", str(out), "--quiet"]) == 0
        ckpts = sorted(p.name for p in out.glob("*.ckpt"))
        assert "nonlinear_final.ckpt" in ckpts
        assert len(ckpts) >= 3
        final = load_checkpoint(out / "nonlinear_final.ckpt")
        assert final.t == pytest.approx(2.0)

    def test_zero_epsilon_run(self, tmp_path):
        cfg = tmp_path / "zero.ini"
        cfg.write_text("[lattice]\nnx = 8\nny = 16\nnz = 8\n"
                       "[run]\nepsilon = 0\ndt = 0.1\nt_end = 1.0\n")
        out = tmp_path / "res"
        assert main(["linear", str(cfg), "--out", str(out)]) == 0
        cols = read_csv_columns(out / "linear_diagnostics.csv")
        assert all(float(x) == 0.0 for x in cols["theta_l2"])

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.ini"
        cfg.write_text("[run]\ndt = -1\n")
        assert main(["linear", str(cfg)]) == 2
        assert "config error" in capsys.readouterr().err
        assert main(["linear", str(tmp_path / "missing.ini")]) == 2

    def test_unknown_flag_is_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["linear", "--frobnicate"])
        assert exc.value.code == 2

    def test_threads_flag(self, tmp_path):
        cfg = self._write_cfg(tmp_path)
        out = tmp_path / "thr"
        assert main(["nonlinear", cfg, "--out", str(out), "--threads", "2",
                     "--quiet"]) == 0
        assert (out / "nonlinear_diagnostics.csv").exists()

    def test_strata_out_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("STRATA_OUT", str(tmp_path / "envout"))
        cfg = self._write_cfg(tmp_path)
        assert main(["linear", cfg, "--quiet"]) == 0
        assert (tmp_path / "envout" / "linear_diagnostics.csv").exists()

    def test_weights_table_contains_hand_value(self, tmp_path):
        out = tmp_path / "w"
        assert main(["weights", "table", "--iota", "10", "--out", str(out),
                     "--quiet"]) == 0
        cols = read_csv_columns(out / "weights_table_iota10.csv")
        rows = {float(t): float(w) for t, w in zip(cols["t"], cols["w_nr"])}
        assert rows[10.0] == pytest.approx(0.1, rel=1e-12)
        assert rows[7.5] == pytest.approx(1e-3, rel=1e-12)

    def test_weights_totalgrowth(self, tmp_path, capsys):
        out = tmp_path / "tg"
        assert main(["weights", "totalgrowth", "--iota-max", "100",
                     "--cstar", "1.0", "--out", str(out)]) == 0
        assert "pass=True" in capsys.readouterr().out

    def test_weights_ratio_sweep(self, tmp_path):
        out = tmp_path / "r"
        assert main(["weights", "ratios", "--samples", "500", "--lemma", "rNR",
                     "--out", str(out), "--quiet"]) == 0
        cols = read_csv_columns(out / "weights_ratio_sweeps.csv")
        assert cols["lemma"] == ["rNR"]
        assert float(cols["empirical_constant"][0]) <= 10.0

    def test_toy_liftup_prints_exponent(self, tmp_path, capsys):
        out = tmp_path / "toy"
        assert main(["toy", "liftup", "--out", str(out)]) == 0
        msg = capsys.readouterr().out
        assert "exponent" in msg
        val = float(msg.split("exponent:")[1].split("(")[0])
        assert val == pytest.approx(1.5, abs=0.1)
        assert (out / "toy_liftup.csv").exists()

    def test_fit_command(self, tmp_path, capsys):
        out = tmp_path / "fit"
        out.mkdir()
        t = np.geomspace(1, 100, 50)
        write_csv(out / "series.csv", ["t", "y"], np.c_[t, t**-2.5].tolist())
        assert main(["fit", str(out / "series.csv"), "--column", "y"]) == 0
        printed = capsys.readouterr().out.strip().splitlines()[-1]
        assert float(printed) == pytest.approx(-2.5, abs=1e-8)

    def test_fit_missing_column(self, tmp_path, capsys):
        out = tmp_path / "fit2"
        out.mkdir()
        write_csv(out / "series.csv", ["t", "y"], [[1.0, 1.0]] * 10)
        assert main(["fit", str(out / "series.csv"), "--column", "z"]) == 2

    def test_toy_orr_report(self, tmp_path, capsys):
        out = tmp_path / "orr"
        assert main(["toy", "orr", "--k", "1", "--kappa", "1.0",
                     "--out", str(out)]) == 0
        msg = capsys.readouterr().out
        assert "amp_nonresonant ~ eta^" in msg
        cols = read_csv_columns(out / "toy_orr.csv")
        amps = [float(x) for x in cols["amp_nonresonant"]]
        assert all(b > a for a, b in zip(amps, amps[1:]))  # growth in eta

    def test_toy_zeromode_report(self, tmp_path, capsys):
        out = tmp_path / "zm"
        assert main(["toy", "zeromode", "--tmax", "1e3", "--out", str(out)]) == 0
        assert "uniform constant" in capsys.readouterr().out
        cols = read_csv_columns(out / "toy_zeromode.csv")
        assert max(float(x) for x in cols["constant"]) <= 50.0

    def test_toy_summary_schema(self, tmp_path):
        out = tmp_path / "toy"
        assert main(["toy", "semigroup", "--m", "0", "1.5", "--out", str(out),
                     "--quiet"]) == 0
        cols = read_csv_columns(out / "toy_semigroup_summary.csv")
        assert list(cols) == ["model", "params", "fitted_exponent", "r2", "constant"]
        assert cols["model"] == ["semigroup", "semigroup"]

    def test_numerical_abort_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "boom.ini"
        cfg.write_text("[lattice]\nnx = 8\nny = 16\nnz = 8\n"
                       "[init]\nrecipe = random\ninit_kmax = 2\n"
                       "[run]\nepsilon = 200.0\ndt = 5.0\nt_end = 50.0\n"
                       "output_every = 5.0\n")
        out = tmp_path / "res"
        assert main(["nonlinear", str(cfg), "--out", str(out), "--quiet"]) == 3
        assert "numerical abort" in capsys.readouterr().err
        # the partial diagnostics and the abort state are dumped for inspection
        assert (out / "nonlinear_abort.ckpt").exists()
        assert (out / "nonlinear_diagnostics.csv").exists()
