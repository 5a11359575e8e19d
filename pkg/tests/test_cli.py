"""Command-line interface: schemas, determinism, config handling, errors."""

import json
import math
import time

import numpy as np
import pytest

from qbattery.cli import main


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, rows


def test_energy_schema_and_endpoints(tmp_path):
    out = tmp_path / "energy.csv"
    rc = main(
        [
            "energy",
            "--zeta", "1", "--tau", "1",
            "--t-min", "-4", "--t-max", "4", "--steps", "400",
            "--out", str(out),
        ]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["t", "E_over_Emax"]
    assert rows.shape == (400, 2)
    assert rows[0, 1] < 1e-6          # uncharged long before the pulse
    assert rows[-1, 1] > 0.999        # saturated well after it
    assert np.all(np.diff(rows[:, 1]) >= 0.0)


def test_power_runs(tmp_path):
    out = tmp_path / "power.csv"
    assert main(["power", "--zeta", "2", "--steps", "50", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    assert header == ["t", "P"]
    assert np.all(rows[:, 1] >= 0.0)


def test_determinism_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["fig", "3b", "--steps", "40"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_peak_power_weak_drive(tmp_path):
    out = tmp_path / "pp.csv"
    assert main(["peak-power", "--zeta", "0.01", "--out", str(out)]) == 0
    header, rows = read_csv(out)
    t_over_tau = rows[0, header.index("t_p_over_tau")]
    assert abs(t_over_tau - 0.506) <= 1e-3


def test_charge_time_list(tmp_path):
    out = tmp_path / "ct.csv"
    assert main(
        ["charge-time", "--zeta", "2", "--alpha", "0.1,0.5,0.9", "--out", str(out)]
    ) == 0
    header, rows = read_csv(out)
    assert header == ["alpha", "t_alpha", "t_alpha_over_tau", "e_max"]
    assert rows.shape[0] == 3
    assert np.all(np.diff(rows[:, 1]) > 0.0)


def test_quadratures_respect_floor(tmp_path):
    out = tmp_path / "quad.csv"
    assert main(
        ["quadratures", "--zeta", "2", "--theta-steps", "128", "--out", str(out)]
    ) == 0
    header, rows = read_csv(out)
    assert header == ["theta", "var_x", "var_p", "std_product"]
    assert rows.shape[0] == 128
    assert np.all(rows[:, 3] >= 0.5 - 1e-12)
    assert rows[:, 1].min() < 0.5  # squeezing visible


def test_fock_check_schema(tmp_path):
    out = tmp_path / "fock.csv"
    assert main(
        [
            "fock-check",
            "--zeta", "0.4",
            "--t-min", "-8", "--t-max", "4", "--steps", "7",
            "--ergotropy",
            "--out", str(out),
        ]
    ) == 0
    header, rows = read_csv(out)
    assert header == [
        "t", "n", "re_s", "im_s", "var_x_min", "tail_mass",
        "n_ref", "abs_err", "ergotropy_ratio",
    ]
    assert rows.shape[0] == 7
    assert np.max(rows[:, header.index("abs_err")]) < 1e-4
    assert abs(rows[0, header.index("ergotropy_ratio")] - 1.0) < 1e-6


def test_fock_check_lossy_engine(tmp_path):
    out = tmp_path / "lossy.csv"
    assert main(
        [
            "fock-check",
            "--zeta", "0.6", "--kappa", "0.15",
            "--t-min", "-6", "--t-max", "4", "--steps", "6",
            "--out", str(out),
        ]
    ) == 0
    header, rows = read_csv(out)
    assert header[:6] == ["t", "n", "re_s", "im_s", "var_x_min", "tail_mass"]
    # lossy engine against the dissipative moment reference
    assert np.max(rows[:, header.index("abs_err")]) < 1e-4
    # loss keeps the final charge below the lossless asymptote
    assert rows[-1, 1] < math.sinh(0.6) ** 2


def test_sweep_threads_keep_order(tmp_path):
    serial, parallel = tmp_path / "s.csv", tmp_path / "p.csv"
    zetas = "2,0.5,1,4"
    assert main(["sweep", "--zetas", zetas, "--out", str(serial)]) == 0
    assert main(["sweep", "--zetas", zetas, "--threads", "4", "--out", str(parallel)]) == 0
    assert serial.read_bytes() == parallel.read_bytes()
    header, rows = read_csv(serial)
    assert [r[0] for r in rows] == [2.0, 0.5, 1.0, 4.0]


def test_json_format(tmp_path):
    out = tmp_path / "sweep.json"
    assert main(
        ["sweep", "--zetas", "1", "--format", "json", "--out", str(out)]
    ) == 0
    payload = json.loads(out.read_text())
    assert payload["columns"][0] == "zeta"
    assert payload["rows"][0][0] == 1.0
    assert payload["rows"][0][1] == pytest.approx(math.sinh(1.0) ** 2)


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("zeta = 2\nsteps = 10\n# comment\nt-max = 3\n")
    out_cfg = tmp_path / "from_cfg.csv"
    assert main(["energy", "--config", str(cfg), "--out", str(out_cfg)]) == 0
    _, rows = read_csv(out_cfg)
    assert rows.shape[0] == 10
    assert rows[-1, 0] == 3.0

    # explicit flag beats the config value
    out_flag = tmp_path / "flag_wins.csv"
    assert main(
        ["energy", "--config", str(cfg), "--steps", "4", "--out", str(out_flag)]
    ) == 0
    _, rows = read_csv(out_flag)
    assert rows.shape[0] == 4


def test_config_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("zeta=1\nwidget=3\n")
    assert main(["energy", "--config", str(cfg)]) == 1
    assert "widget" in capsys.readouterr().err


def test_domain_failure_exits_one(capsys):
    assert main(["charge-time", "--alpha", "1.5"]) == 1
    err = capsys.readouterr().err
    assert "alpha" in err


def test_delta_pulse_power_fails_cleanly(capsys):
    assert main(["power", "--pulse", "delta"]) == 1
    assert "delta" in capsys.readouterr().err.lower()


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["energy", "--no-such-flag"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["fig", "9z"])
    assert exc.value.code == 2


@pytest.mark.parametrize("panel", ["2a", "2b", "2c", "3a", "3b", "3c"])
def test_fig_panels_emit_and_are_fast(tmp_path, panel):
    out = tmp_path / f"fig{panel}.csv"
    start = time.perf_counter()
    assert main(["fig", panel, "--out", str(out)]) == 0
    assert time.perf_counter() - start < 10.0
    header, rows = read_csv(out)
    assert rows.shape[0] >= 40
    assert len(header) == rows.shape[1]
