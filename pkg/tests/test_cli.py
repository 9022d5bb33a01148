"""Command-line interface: grids, config merge, outputs, exit codes."""
import json

import pytest

from mocsim.cli import main, parse_float_grid, parse_int_list


class TestGridParsing:
    def test_linear_range_inclusive(self):
        assert parse_float_grid("0:1:5") == (0.0, 0.25, 0.5, 0.75, 1.0)

    def test_comma_list_and_scalar(self):
        assert parse_float_grid("1,2,4") == (1.0, 2.0, 4.0)
        assert parse_float_grid("0.3") == (0.3,)

    def test_count_one(self):
        assert parse_float_grid("0.5:0.9:1") == (0.5,)

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            parse_float_grid("0:1")
        with pytest.raises(ValueError):
            parse_float_grid("0:1:0")

    def test_int_list(self):
        assert parse_int_list("16,32,64") == (16, 32, 64)


class TestCommands:
    def test_phase_diagram_shape_and_rerun(self, tmp_path):
        out = tmp_path / "pd.csv"
        argv = ["phase-diagram", "--L", "16", "--p-zz", "0:1:5",
                "--alpha", "1,2,4", "--traj", "4", "--seed", "7",
                "--out", str(out)]
        assert main(argv) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 16  # header + 5 * 3 grid points
        first = out.read_bytes()
        out2 = tmp_path / "pd2.csv"
        assert main(argv[:-1] + [str(out2), "--threads", "2"]) == 0
        assert out2.read_bytes() == first

    def test_inv_alpha_axis(self, tmp_path):
        out = tmp_path / "pd.csv"
        assert main(["ee-map", "--L", "16", "--p-zz", "0.5",
                     "--inv-alpha", "0.25,0.5", "--traj", "2",
                     "--out", str(out)]) == 0
        rows = out.read_text().splitlines()[1:]
        inv = sorted(float(r.split(",")[1]) for r in rows)
        assert inv == [0.25, 0.5]

    def test_purify_final_plateau(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["purify", "--L", "16", "--p-zz", "0", "--alpha", "3",
                     "--traj", "5", "--seed", "2", "--out", str(out)]) == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        finals = [int(r[5]) for r in rows if int(r[4]) == 4 * 16 * 16]
        assert len(finals) == 5 and set(finals) == {2}

    def test_sidecar_reproduces_csv(self, tmp_path):
        out = tmp_path / "e.csv"
        assert main(["edge-probe", "--L", "16", "--p-zz", "0.1", "--alpha", "3",
                     "--p-b", "0.1,0.5", "--traj", "3", "--out", str(out)]) == 0
        from mocsim.ensemble import rerun_from_sidecar, write_outputs, spec_from_sidecar
        sidecar = str(tmp_path / "e.json")
        cols, rows = rerun_from_sidecar(sidecar)
        out2 = tmp_path / "e2.csv"
        write_outputs(str(out2), spec_from_sidecar(sidecar), cols, rows)
        assert out.read_bytes() == out2.read_bytes()

    def test_correlations_with_fit(self, tmp_path, capsys):
        out = tmp_path / "c.csv"
        assert main(["correlations", "--L", "16", "--p-zz", "1", "--alpha", "6",
                     "--traj", "5", "--r-max", "4", "--fit",
                     "--fit-window", "1:4", "--out", str(out)]) == 0
        captured = capsys.readouterr().out
        assert "c_zz" in captured and "Delta=" in captured

    def test_config_file_merge(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("L = 16\np-zz = 0.5\nalpha = 2\ntraj = 3\n# comment\n")
        out = tmp_path / "pd.csv"
        assert main(["stopo", "--config", str(cfg), "--traj", "2",
                     "--out", str(out)]) == 0
        sidecar = json.loads((tmp_path / "pd.json").read_text())
        assert sidecar["spec"]["trajectories"] == 2  # flag wins over config
        assert sidecar["spec"]["L_values"] == [16]

    def test_oracle_check_passes(self, capsys):
        assert main(["oracle-check", "--n", "5", "--cases", "3",
                     "--seq-len", "40", "--seed", "1"]) == 0
        assert "3/3 sequences passed" in capsys.readouterr().out

    def test_env_thread_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("MOCSIM_THREADS", "2")
        out = tmp_path / "pd.csv"
        assert main(["size-scan", "--L", "16", "--p-zz", "0.5", "--alpha", "2",
                     "--traj", "4", "--out", str(out)]) == 0


class TestFailures:
    def test_unknown_flag(self, capsys):
        assert main(["phase-diagram", "--bogus", "1"]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2

    def test_missing_required_flag(self, tmp_path, capsys):
        assert main(["phase-diagram", "--L", "16", "--p-zz", "0.5",
                     "--out", str(tmp_path / "x.csv")]) == 1
        assert "--alpha" in capsys.readouterr().err

    def test_invalid_grid_value(self, tmp_path, capsys):
        assert main(["phase-diagram", "--L", "16", "--p-zz", "zap",
                     "--alpha", "2", "--out", str(tmp_path / "x.csv")]) == 1
        assert capsys.readouterr().err.startswith("mocsim:")

    def test_alpha_and_inv_alpha_conflict(self, tmp_path):
        assert main(["phase-diagram", "--L", "16", "--p-zz", "0.5",
                     "--alpha", "2", "--inv-alpha", "0.5",
                     "--out", str(tmp_path / "x.csv")]) == 1

    def test_unwritable_output(self, tmp_path, capsys):
        assert main(["phase-diagram", "--L", "16", "--p-zz", "0.5",
                     "--alpha", "2", "--traj", "2",
                     "--out", str(tmp_path / "no" / "x.csv")]) == 1
        assert "x.csv" in capsys.readouterr().err
