"""CLI harness: output formats, determinism, exit codes, config precedence."""

import csv
import json
import math

import numpy as np
import pytest

from oqwalk import equilibrium as eq
from oqwalk import linear as lin
from oqwalk import thermalization as th
from oqwalk.cli import main
from oqwalk.equilibrium import EnsemblePoint
from oqwalk.linear import LinearWalkSpec


def read_csv(path):
    with open(path) as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    return header, rows


def column(rows, idx):
    return [r[idx] for r in rows]


# ---------------------------------------------------------------- steady-state

def test_steady_state_uniform(tmp_path):
    out = tmp_path / "pi.csv"
    assert main(["steady-state", "--n-nodes", "30", "--omega", "0.5",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["m", "pi"]
    assert len(rows) == 30
    assert all(r[1] == pytest.approx(1 / 30, rel=1e-15) for r in rows)


def test_steady_state_monotone_and_mirror(tmp_path):
    up, down = tmp_path / "up.csv", tmp_path / "down.csv"
    assert main(["steady-state", "--n-nodes", "30", "--omega", "0.6666666666666666",
                 "--out", str(up)]) == 0
    assert main(["steady-state", "--n-nodes", "30", "--omega", "0.3333333333333333",
                 "--out", str(down)]) == 0
    _, rows_up = read_csv(up)
    _, rows_down = read_csv(down)
    pi_up, pi_down = column(rows_up, 1), column(rows_down, 1)
    assert all(b > a for a, b in zip(pi_up, pi_up[1:]))  # positive exponential
    assert pi_down == pytest.approx(pi_up[::-1], rel=1e-10)
    assert sum(pi_up) == pytest.approx(1.0, abs=1e-10)


def test_steady_state_omega_range_long_format(tmp_path):
    out = tmp_path / "multi.csv"
    assert main(["steady-state", "--n-nodes", "5", "--omega", "0.3:0.7:0.2",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["omega", "m", "pi"]
    assert len(rows) == 15
    assert sorted(set(column(rows, 0))) == pytest.approx([0.3, 0.5, 0.7])


# ---------------------------------------------------------------- equilibrium

def test_equilibrium_sweep_columns_and_values(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["equilibrium", "--n-nodes", "500", "--omega", "0.05:0.95:0.05",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["omega", "beta", "T", "Z", "E", "varE", "S", "F", "Cv"]
    s_col = column(rows, 6)
    omegas = column(rows, 0)
    # entropy peaks exactly at omega = 1/2 with value log N
    imax = int(np.argmax(s_col))
    assert omegas[imax] == pytest.approx(0.5, abs=1e-12)
    assert s_col[imax] == pytest.approx(math.log(500), rel=1e-12)
    assert all(s <= s_col[imax] for s in s_col)


def test_equilibrium_energy_gap(tmp_path):
    lo, hi = tmp_path / "lo.csv", tmp_path / "hi.csv"
    assert main(["equilibrium", "--n-nodes", "100", "--omega", "0.000001", "--out", str(lo)]) == 0
    assert main(["equilibrium", "--n-nodes", "100", "--omega", "0.999999", "--out", str(hi)]) == 0
    _, rows_lo = read_csv(lo)
    _, rows_hi = read_csv(hi)
    assert rows_hi[0][4] - rows_lo[0][4] == pytest.approx(99.0, abs=1e-3)


def test_equilibrium_temperature_row(tmp_path):
    out = tmp_path / "row.csv"
    assert main(["equilibrium", "--n-nodes", "10", "--omega", "0.3333333333333333",
                 "--out", str(out)]) == 0
    _, rows = read_csv(out)
    assert rows[0][2] == pytest.approx(1.442695, abs=1e-5)


def test_equilibrium_divergence_sentinels(tmp_path):
    out = tmp_path / "inf.csv"
    assert main(["equilibrium", "--n-nodes", "10", "--omega", "0.5", "--out", str(out)]) == 0
    text = out.read_text()
    assert "inf" in text
    header, rows = read_csv(out)  # float('inf') / float('-inf') parse back
    assert rows[0][2] == math.inf
    assert rows[0][7] == -math.inf

    out_json = tmp_path / "inf.json"
    assert main(["equilibrium", "--n-nodes", "10", "--omega", "0.5",
                 "--format", "json", "--out", str(out_json)]) == 0
    records = json.loads(out_json.read_text())
    assert records[0]["T"] == "inf"
    assert records[0]["F"] == "-inf"
    assert records[0]["S"] == pytest.approx(math.log(10), rel=1e-12)


def test_equilibrium_jobs_do_not_change_output(tmp_path):
    outs = []
    for jobs in ("1", "4"):
        out = tmp_path / f"jobs{jobs}.csv"
        assert main(["equilibrium", "--n-nodes", "50", "--omega", "0.1:0.9:0.1",
                     "--jobs", jobs, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


# ---------------------------------------------------------------- trajectory

def test_trajectory_columns_and_second_law(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--steps", "600", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["n", "S", "E", "T_est", "S_gen"]
    assert len(rows) == 601
    s_gen = column(rows, 4)
    assert s_gen[0] == 0.0
    assert all(b >= a - 1e-8 for a, b in zip(s_gen, s_gen[1:]))
    # entropy decays after the window opens
    s = column(rows, 1)
    assert max(s) > s[-1]


def test_trajectory_distribution_dump(tmp_path):
    out = tmp_path / "traj.csv"
    dump = tmp_path / "dist.csv"
    assert main(["trajectory", "--n-nodes", "8", "--omega", "0.7", "--steps", "5",
                 "--out", str(out), "--dump-distributions", str(dump)]) == 0
    header, rows = read_csv(dump)
    assert header == ["n", "m", "p"]
    assert len(rows) == 6 * 8
    by_step = {}
    for n, m, p in rows:
        by_step.setdefault(n, 0.0)
        by_step[n] += p
    assert all(total == pytest.approx(1.0, abs=1e-12) for total in by_step.values())


# ---------------------------------------------------------------- window / dqc

def test_window_values(tmp_path):
    out = tmp_path / "win.csv"
    assert main(["window", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["n_nodes", "omega", "t_start", "t_end", "t_therm"]
    assert round(rows[0][2]) == 213
    assert round(rows[0][3]) == 423
    assert rows[0][4] == pytest.approx(rows[0][3] - rows[0][2], rel=1e-12)


def test_dqc_stdout_and_file(tmp_path, capsys):
    out = tmp_path / "dqc.csv"
    assert main(["dqc", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "n_steps = 300.00" in text
    assert "n_start = 212.53" in text
    assert "n_end   = 423.47" in text
    header, rows = read_csv(out)
    assert header == ["n_nodes", "omega", "n_start", "n_steps", "n_end", "E_eq", "dE_domega"]
    assert rows[0][3] == pytest.approx(300.0, rel=1e-12)
    point = EnsemblePoint.from_omega(100, 2 / 3)
    assert rows[0][5] == pytest.approx(eq.mean_energy(point), rel=1e-12)
    assert rows[0][6] == pytest.approx(eq.energy_cost_domega(point), rel=1e-12)


def test_dqc_rejects_low_omega(capsys):
    assert main(["dqc", "--n-nodes", "100", "--omega", "0.4"]) == 2
    assert "error" in capsys.readouterr().err


# ---------------------------------------------------------------- approx-entropy / table

def test_approx_entropy_series(tmp_path):
    out = tmp_path / "sa.csv"
    assert main(["approx-entropy", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--steps", "100", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["t", "S_a", "S_G", "S_B", "w"]
    assert len(rows) == 100
    # early regime: pure Gaussian growth
    assert rows[49][1] == pytest.approx(th.entropy_gaussian_regime(50), abs=1e-6)
    ws = column(rows, 4)
    assert all(b >= a for a, b in zip(ws, ws[1:]))


def test_table_matches_library(tmp_path, capsys):
    out = tmp_path / "metrics.csv"
    assert main(["table", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert "delta_max" in stdout
    header, rows = read_csv(out)
    spec = LinearWalkSpec(100, 2 / 3)
    traj = th.simulate_trajectory(spec, 423)
    report = th.error_metrics(spec, traj)
    assert rows[0][4] == pytest.approx(report.delta_max, rel=1e-12)
    assert rows[0][8] == pytest.approx(report.mean_logn, rel=1e-12)


def test_table_weighted_equilibrium_variant(tmp_path):
    out = tmp_path / "metrics.csv"
    assert main(["table", "--n-nodes", "100", "--omega", "0.6666666666666666",
                 "--boltzmann", "weighted-equilibrium", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    spec = LinearWalkSpec(100, 2 / 3)
    traj = th.simulate_trajectory(spec, 423)
    report = th.error_metrics(spec, traj, boltzmann="weighted-equilibrium")
    assert rows[0][4] == pytest.approx(report.delta_max, rel=1e-12)


# ---------------------------------------------------------------- plumbing

def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["equilibrium", "--n-nodes", "73", "--omega", "0.05:0.95:0.09"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_round_trip(tmp_path):
    out = tmp_path / "pi.json"
    assert main(["steady-state", "--n-nodes", "12", "--omega", "0.7",
                 "--format", "json", "--out", str(out)]) == 0
    records = json.loads(out.read_text())
    assert len(records) == 12
    assert sum(r["pi"] for r in records) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(
        [r["pi"] for r in records], lin.steady_state(LinearWalkSpec(12, 0.7)), rtol=1e-15)


def test_exit_code_validation(capsys):
    assert main(["steady-state", "--n-nodes", "30", "--omega", "1.2"]) == 2
    assert main(["steady-state", "--omega", "0.5"]) == 2  # missing --n-nodes
    assert main(["steady-state", "--n-nodes", "30", "--omega", "abc"]) == 2
    assert main(["window", "--n-nodes", "100", "--omega", "0.5"]) == 2
    capsys.readouterr()


def test_exit_code_unknown_flag(capsys):
    assert main(["steady-state", "--no-such-flag", "1"]) == 2
    capsys.readouterr()


def test_exit_code_io_failure(tmp_path, capsys):
    missing_dir = tmp_path / "no" / "such" / "dir" / "x.csv"
    assert main(["steady-state", "--n-nodes", "5", "--omega", "0.5",
                 "--out", str(missing_dir)]) == 3
    assert "error" in capsys.readouterr().err


def test_config_file_defaults_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# sweep setup\n"
        "n-nodes = 30\n"
        "omega = 0.5\n"
        "format = csv\n"
    )
    out1 = tmp_path / "from_config.csv"
    assert main(["steady-state", "--config", str(cfg), "--out", str(out1)]) == 0
    _, rows = read_csv(out1)
    assert len(rows) == 30

    # explicit flag beats the config value
    out2 = tmp_path / "override.csv"
    assert main(["steady-state", "--config", str(cfg), "--n-nodes", "7",
                 "--out", str(out2)]) == 0
    _, rows2 = read_csv(out2)
    assert len(rows2) == 7


def test_config_file_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 1\n")
    assert main(["steady-state", "--config", str(cfg)]) == 2
    capsys.readouterr()


def test_stdout_output(capsys):
    assert main(["steady-state", "--n-nodes", "3", "--omega", "0.5"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == "m,pi"
    assert len(lines) == 4
