import math

import numpy as np
import pytest

from onebitcs import bench
from onebitcs.bench import SweepConfig
from onebitcs.errors import ConfigError, InvalidParameterError


def _tiny(**kw):
    return SweepConfig.fast(**{"n": 20, "s": 2, "trials": 3, "m_over_n": (1, 3),
                               "timing": False, **kw})


def test_row_count_and_header():
    cfg = _tiny()
    rep = bench.run_m_sweep(cfg)
    assert len(rep.rows) == len(cfg.methods) * 2 * 3
    assert rep.rows_csv().splitlines()[0] == \
        "method,grid_var,grid_value,trial,seed,norm_error,signal_error,status,wall_ms"
    assert rep.aggregates_csv().splitlines()[0] == ",".join(bench.AGG_HEADER)
    edf_rows = [r for r in rep.rows if r.method == "EDF"]
    assert all(r.signal_error is None for r in edf_rows)
    assert ",EDF," not in rep.rows_csv()  # method is the first column
    assert all(line.startswith(("method", "PVaug", "EDF", "Combined"))
               for line in rep.rows_csv().splitlines())


def test_byte_identical_reruns(tmp_path):
    a = bench.run_m_sweep(_tiny(trials=1))
    b = bench.run_m_sweep(_tiny(trials=1))
    assert a.rows_csv() == b.rows_csv()
    assert a.aggregates_csv() == b.aggregates_csv()
    pa, _ = a.write(tmp_path / "a.csv")
    pb, _ = b.write(tmp_path / "b.csv")
    assert pa.read_bytes() == pb.read_bytes()


def test_master_seed_changes_output():
    assert bench.run_m_sweep(_tiny(master_seed=1)).rows_csv() != \
        bench.run_m_sweep(_tiny(master_seed=2)).rows_csv()


def test_worker_pool_matches_serial(monkeypatch):
    serial = bench.run_m_sweep(_tiny(methods=("EDF", "PVaug")))
    monkeypatch.setenv(bench.WORKERS_ENV, "2")
    pooled = bench.run_m_sweep(_tiny(methods=("EDF", "PVaug")))
    assert pooled.rows_csv() == serial.rows_csv()


def test_workers_env_validation(monkeypatch):
    monkeypatch.setenv(bench.WORKERS_ENV, "many")
    with pytest.raises(ConfigError):
        bench.run_m_sweep(_tiny())


def test_aggregates_recompute_from_csv(tmp_path):
    rep = bench.run_tau_sweep(_tiny(tau_grid=(1.0, 15.0, 200.0), tau_m_over_n=3))
    path, agg_path = rep.write(tmp_path / "t.csv")
    assert agg_path.name == "t.agg.csv"
    rows = bench.read_rows(path)
    assert rows == rep.rows
    assert bench.aggregate(rows) == rep.aggregates
    assert bench.SweepReport(rep.config, "tau", rows).aggregates_csv() == agg_path.read_text()


def test_aggregate_semantics():
    R = bench.TrialRow
    rows = [R("EDF", "tau", 1.0, 0, 1, 1.0, None, "Ok", 0.0),
            R("EDF", "tau", 1.0, 1, 2, 3.0, None, "Ok", 0.0),
            R("EDF", "tau", 1.0, 2, 3, None, None, "BelowHalf", 0.0)]
    (agg,) = bench.aggregate(rows)
    assert (agg.trials, agg.failures) == (3, 1)
    assert agg.mean_norm_error == 2.0 and agg.std_norm_error == pytest.approx(math.sqrt(2))
    assert agg.mean_signal_error is None


def test_large_tau_edf_saturates_and_small_tau_fails():
    rep = bench.run_tau_sweep(_tiny(methods=("EDF",), tau_grid=(0.01, 500.0), trials=6))
    small = [r for r in rep.rows if r.grid_value == 0.01]
    big = [r for r in rep.rows if r.grid_value == 500.0]
    assert any(r.status == "BelowHalf" and r.failed for r in small)
    assert all(r.status == "Saturated" for r in big)
    # Lambda = 0, so the error is the full norm
    assert all(10 <= r.norm_error <= 20 for r in big)


def test_unpaired_draws_differ_across_grid():
    rep = bench.run_m_sweep(_tiny(paired=False, methods=("EDF",)))
    seeds = {(r.grid_value, r.seed) for r in rep.rows}
    assert len({s for _, s in seeds}) == len(seeds)
    paired = bench.run_m_sweep(_tiny(methods=("EDF",)))
    assert len({r.seed for r in paired.rows}) == 3


def test_config_validation():
    for bad in (dict(trials=0), dict(m_over_n=()), dict(tau_grid=(1.0, -2.0)),
                dict(methods=("PV",)), dict(s=0), dict(r=30.0)):
        with pytest.raises(ConfigError):
            bench.run_m_sweep(_tiny(**bad)) if "tau_grid" not in bad else \
                bench.run_tau_sweep(_tiny(**bad))


def test_config_file_parsing(tmp_path):
    text = """
    # preset
    n = 40
    s=3
    methods = EDF, PVaug
    m_over_n = 1, 2.5
    paired = false
    tau = none
    """
    cfg = bench.parse_config(text)
    assert (cfg.n, cfg.s, cfg.methods, cfg.m_over_n, cfg.paired, cfg.tau) == \
        (40, 3, ("EDF", "PVaug"), (1.0, 2.5), False, None)
    p = tmp_path / "c.cfg"
    p.write_text("trials = 2\n")
    assert bench.load_config(p, SweepConfig.fast()).trials == 2
    assert bench.load_config(p, SweepConfig.fast()).n == 60
    for bad in ("bogus = 1", "n = ten", "just words", "paired = maybe"):
        with pytest.raises(ConfigError):
            bench.parse_config(bad)


def test_defaults_mirror_desk_preset():
    cfg = SweepConfig()
    assert (cfg.n, cfg.s, cfg.r, cfg.R, cfg.trials) == (300, 10, 10.0, 20.0, 40)
    assert cfg.threshold == 10.0 and cfg.tau_m_over_n == 6.0
    assert min(cfg.taus) == pytest.approx(1.5) and max(cfg.taus) == pytest.approx(60.0)
    fast = SweepConfig.fast()
    assert (fast.n, fast.s, fast.trials) == (60, 4, 10)


def test_edf_error_slope():
    # EDF norm error decays with m; slope bracketed around the m^-1/2 rate
    cfg = SweepConfig(methods=("EDF",), m_over_n=(10, 40, 160), trials=40, timing=False)
    rep = bench.run_m_sweep(cfg)
    grid, err = rep.mean_curve("EDF")
    slope = np.polyfit(np.log(grid * cfg.n), np.log(err), 1)[0]
    assert -1.2 <= slope <= -0.3, slope


def test_plan_outputs():
    assert 5.47e5 < bench.plan_sample_size("edf", delta=1, r=10, R=20)["m"] < 5.49e5
    R, d, n, s = 20.0, 0.5, 300, 10
    out = bench.plan_sample_size("pvaug", delta=d, R=R, n=n, s=s)
    assert out["m"] == math.ceil((math.sqrt(2) * R / d) ** 5 * s * math.log(2 * n / s) ** 2)
    comb = bench.plan_sample_size("combined", delta=1, r=10, R=20, n=n, s=s)
    assert comb["m"] == comb["m1"] + comb["m2"] and "m1 (norm)" in comb["formula"]
    assert bench.plan_sample_size("pv", delta=0.5, n=n, s=s)["m"] > 0
    assert bench.plan_sample_size("edf-uniform", delta=1, r=10, R=20, n=n, s=s)["m"] > 0
    with pytest.raises(InvalidParameterError, match="missing parameter"):
        bench.plan_sample_size("edf", delta=1, r=10)
    with pytest.raises(InvalidParameterError, match="delta"):
        bench.plan_sample_size("edf", delta=50, r=10, R=20)
    with pytest.raises(InvalidParameterError):
        bench.plan_sample_size("magic", delta=1)
