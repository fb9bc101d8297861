import json
import subprocess
import sys

import numpy as np
import pytest

from sdschwarz.cli import RunConfig, build_parser, load_config, main, resolve_config, run_experiment


def _results(path):
    data = json.loads((path / "results.json").read_text())
    data.pop("timing")
    return data


def test_run_writes_outputs(tmp_path):
    out = tmp_path / "r"
    assert main(["run", "--case", "test1", "--h", "0.25", "--out", str(out)]) == 0
    for name in ("results.json", "history.csv", "v_ff.csv", "p_ff.csv", "p_pm.csv",
                 "free_flow.vtk", "porous_medium.vtk"):
        assert (out / name).is_file(), name
    r = json.loads((out / "results.json").read_text())
    assert r["converged"] and r["iterations"] >= 1 and r["final_residual"] <= 1e-9
    assert r["band"]["convention"] == "quarter_h"
    assert set(r["l2_errors"]) == {"v_ff", "p_ff", "p_pm"}
    hist = np.loadtxt(out / "history.csv", delimiter=",", skiprows=1)
    assert hist.shape[0] == r["iterations"]


def test_results_are_deterministic(tmp_path):
    argv = ["run", "--case", "test1", "--h", "0.25", "--no-fields"]
    main(argv + ["--out", str(tmp_path / "a")])
    main(argv + ["--out", str(tmp_path / "b")])
    assert _results(tmp_path / "a") == _results(tmp_path / "b")
    assert not (tmp_path / "a" / "v_ff.csv").exists()


def test_gauss_seidel_mode_and_manual_weights(tmp_path):
    cfg = RunConfig(case="test1", h=0.25, mode="gauss_seidel", robin="manual",
                    alpha_ff=200.0, alpha_pm=50.0, out=str(tmp_path)).validate()
    status, r, _ = run_experiment(cfg, write=False)
    assert status == 0 and r["alpha_ff"] == 200.0 and r["mode"] == "gauss_seidel"


def test_nonconvergence_exit_code(tmp_path):
    code = main(["run", "--case", "test1", "--h", "0.25", "--max-iter", "2", "--tol", "1e-14",
                 "--out", str(tmp_path), "--no-fields"])
    assert code == 2
    assert json.loads((tmp_path / "results.json").read_text())["converged"] is False


def test_config_file_and_precedence(tmp_path, monkeypatch):
    ini = tmp_path / "c.ini"
    ini.write_text("[run]\ncase = test1\nh = 0.25\ntol = 1e-8\nout = from_config\n")
    assert load_config(ini) == {"case": "test1", "h": 0.25, "tol": 1e-8, "out": "from_config"}
    parser = build_parser()
    monkeypatch.delenv("SDSCHWARZ_OUT", raising=False)
    cfg = resolve_config(parser.parse_args(["run", "--config", str(ini), "--tol", "1e-10"]))
    assert cfg.tol == 1e-10 and cfg.h == 0.25 and cfg.out == "from_config"
    monkeypatch.setenv("SDSCHWARZ_OUT", str(tmp_path / "env"))
    cfg = resolve_config(parser.parse_args(["run", "--config", str(ini)]))
    assert cfg.out == str(tmp_path / "env")
    cfg = resolve_config(parser.parse_args(["run", "--config", str(ini), "--out", "flag"]))
    assert cfg.out == "flag"


def test_env_var_sets_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("SDSCHWARZ_OUT", str(tmp_path / "env_out"))
    assert main(["run", "--case", "test1", "--h", "0.25", "--no-fields"]) == 0
    assert (tmp_path / "env_out" / "results.json").is_file()


def test_unknown_config_key_reports_line(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[run]\ncase = test1\n\ncolour = blue\n")
    with pytest.raises(ValueError, match=r"bad.ini:4: unknown key 'colour'"):
        load_config(ini)
    assert main(["run", "--config", str(ini)]) == 1
    assert "unknown key" in capsys.readouterr().err


def test_bad_values_rejected(tmp_path):
    ini = tmp_path / "v.ini"
    ini.write_text("[run]\nh = small\n")
    with pytest.raises(ValueError, match="v.ini:2"):
        load_config(ini)
    with pytest.raises(ValueError):
        RunConfig(case="test3").validate()
    with pytest.raises(ValueError):
        RunConfig(robin="manual").validate()


def test_sweep_case4(tmp_path, capsys):
    assert main(["sweep", "--case", "test2", "--table2-case", "4", "--out", str(tmp_path)]) == 0
    data = np.genfromtxt(tmp_path / "sweep.csv", delimiter=",", names=True)
    assert data.shape == (1000,)
    assert data["rho_tilde"].max() < 0.1
    assert "max rho_tilde" in capsys.readouterr().out


def test_sweep_bad_mesh_size(tmp_path):
    assert main(["sweep", "--case", "test2", "--h", "0.01", "--out", str(tmp_path)]) == 1


def test_oracle_check_command(capsys):
    assert main(["oracle-check", "--samples", "50"]) == 0
    assert "ok" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "sdschwarz", "oracle-check", "--samples", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
