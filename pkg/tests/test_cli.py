import subprocess
import sys

import numpy as np
import pytest

from onebitcs.cli import main
from onebitcs.lp import read_lp, solve_lp


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_recover_round_trip(tmp_path, capsys):
    e, y, x, xh, lp = (str(tmp_path / f) for f in ("e.csv", "y.txt", "x.txt", "xh.txt", "p.lp"))
    code, out, _ = run(["simulate", "--n", "20", "--s", "2", "--m", "120", "--tau", "15",
                        "--seed", "4", "--out", e, "--bits", y, "--signal-out", x], capsys)
    assert code == 0 and "shift=gaussian" in out
    code, out, _ = run(["recover", "--ensemble", e, "--bits", y, "--export-lp", lp,
                        "--out", xh], capsys)
    assert code == 0 and "status=Optimal" in out
    truth, est = np.loadtxt(x), np.loadtxt(xh)
    assert np.linalg.norm(est - truth) < 0.5 * np.linalg.norm(truth)
    # the exported LP solves to the reported objective
    obj = float(out.split("objective=")[1].split()[0])
    assert solve_lp(read_lp(lp)).objective == pytest.approx(obj, rel=1e-9)


def test_recover_direction_for_unshifted(tmp_path, capsys):
    e, y = str(tmp_path / "e.csv"), str(tmp_path / "y.txt")
    run(["simulate", "--n", "10", "--s", "2", "--m", "60", "--shift", "none", "--out", e,
         "--bits", y], capsys)
    code, out, _ = run(["recover", "--ensemble", e, "--bits", y], capsys)
    assert code == 0 and "t_sharp" not in out
    assert float(out.split("estimate_norm=")[1]) == pytest.approx(1.0)


def test_estimate_norm(tmp_path, capsys):
    e, y = str(tmp_path / "e.csv"), str(tmp_path / "y.txt")
    run(["simulate", "--n", "10", "--s", "3", "--m", "20000", "--shift", "constant",
         "--tau", "10", "--out", e, "--bits", y, "--r", "15", "--R", "15"], capsys)
    code, out, _ = run(["estimate-norm", "--bits", y, "--ensemble", e], capsys)
    assert code == 0 and "status=Ok" in out
    lam = float(out.split("lambda=")[1].split()[0])
    assert lam == pytest.approx(15.0, abs=0.6)
    code, out2, _ = run(["estimate-norm", "--bits", y, "--tau", "10"], capsys)
    assert out2 == out


def test_sweeps_write_csv(tmp_path, capsys):
    for cmd in ("sweep-m", "sweep-tau"):
        path = tmp_path / f"{cmd}.csv"
        code, out, _ = run([cmd, "--fast", "--n", "12", "--s", "2", "--trials", "2",
                            "--grid", "1,2" if cmd == "sweep-m" else "5,15",
                            "--m-over-n", "2", "--no-timing", "--out", str(path)], capsys)
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "method,grid_var,grid_value,trial,seed,norm_error,signal_error,status,wall_ms"
        assert len(lines) == 1 + 3 * 2 * 2
        assert (tmp_path / f"{cmd}.agg.csv").exists()


def test_sweep_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("n = 12\ns = 2\ntrials = 1\nmethods = EDF\nm_over_n = 1, 2\n")
    path = tmp_path / "o.csv"
    code, _, _ = run(["sweep-m", "--config", str(cfg), "--trials", "2", "--no-timing",
                      "--out", str(path)], capsys)
    assert code == 0 and len(path.read_text().splitlines()) == 1 + 2 * 2


def test_plan(capsys):
    code, out, _ = run(["plan", "edf", "--delta", "1", "--r", "10", "--R", "20"], capsys)
    assert code == 0 and out.startswith("m=548")
    code, out, _ = run(["plan", "combined", "--delta", "1", "--r", "10", "--R", "20",
                        "--n", "300", "--s", "10"], capsys)
    assert "m1=" in out and "m2=" in out


@pytest.mark.parametrize("argv", [
    ["plan", "edf", "--delta", "50", "--r", "10", "--R", "20"],
    ["plan", "pvaug", "--delta", "0.5"],
    ["sweep-m", "--fast", "--trials", "0", "--out", "unused.csv"],
    ["sweep-m", "--fast", "--methods", "Nope", "--out", "unused.csv"],
    ["estimate-norm", "--bits", "/nonexistent/bits.txt", "--tau", "1"],
    ["simulate", "--m", "5", "--shift", "constant", "--out", "e.csv", "--bits", "y.txt"],
])
def test_config_errors_exit_nonzero(argv, capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "onebitcs", "plan", "pv", "--delta", "0.5",
                           "--n", "300", "--s", "10"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("m=")
    proc = subprocess.run([sys.executable, "-m", "onebitcs", "bogus"], capture_output=True)
    assert proc.returncode == 2
