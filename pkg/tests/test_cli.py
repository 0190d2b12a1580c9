import csv
import json
import os

import numpy as np
import pytest

from ecomap3d import cli


def run(argv):
    return cli.main(argv)


def test_fixed_points_csv(tmp_path):
    out = tmp_path / "fp.csv"
    code = run(["fixed-points", "--lambda", "4.444", "--mu", "3.71", "--beta", "2.734",
                "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    assert any("ecomap3d" in ln for ln in header)
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0] == "name,exists,x,y,z,margin"
    assert len(body) == 5


def test_csv_floats_are_full_precision(tmp_path):
    out = tmp_path / "orbit.csv"
    run(["orbit", "--lambda", "4.444", "--mu", "3.71", "--beta", "2.734",
         "--x0", "0.4", "--y0", "0.3", "--z0", "0.05", "--n", "10", "--out", str(out)])
    rows = [ln.split(",") for ln in out.read_text().splitlines()
            if not ln.startswith("#")][1:]
    from ecomap3d import ParamPoint, State3, core

    orb = core.iterate(State3(0.4, 0.3, 0.05), ParamPoint(4.444, 3.71, 2.734), 10)
    for row, ref in zip(rows, orb.states):
        assert [float(v) for v in row[1:]] == list(ref)  # 17 sig digits round-trip


def test_json_mirror_bit_exact(tmp_path):
    out_csv = tmp_path / "ly.csv"
    out_json = tmp_path / "ly.json"
    common = ["lyapunov", "--lambda", "4.444", "--mu", "3.71", "--beta", "2.734",
              "--x0", "0.4", "--y0", "0.3", "--z0", "0.05", "--n", "2000"]
    run(common + ["--out", str(out_csv)])
    run(common + ["--format", "json", "--out", str(out_json)])
    doc = json.loads(out_json.read_text())
    csv_row = [ln for ln in out_csv.read_text().splitlines() if not ln.startswith("#")][1]
    csv_vals = csv_row.split(",")
    json_row = doc["rows"][0]
    for i in range(3):  # the three exponents must round-trip bit-exact in both formats
        assert float(csv_vals[i]) == json_row[i]
    # JSON re-serialization is stable
    assert json.loads(json.dumps(doc)) == doc


def test_sweep_deterministic_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--lambda", "1.0", "--mu", "2.5", "--beta", "2.5", "--axis", "mu",
            "--from", "2.6", "--to", "3.0", "--grid", "4", "--samples", "8"]
    run(args + ["--out", str(a)])
    run(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    body = [ln for ln in a.read_text().splitlines() if not ln.startswith("#")]
    assert body[0].split(",") == (
        ["param"] + [f"x{i}" for i in range(1, 9)] + [f"y{i}" for i in range(1, 9)]
        + [f"z{i}" for i in range(1, 9)] + ["lyap_max"]
    )
    assert "\r" not in a.read_text()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        run(["sweep", "--lambda", "1.0", "--mu", "2.5"])
    assert exc.value.code == 2


def test_numeric_failure_exit_code(tmp_path, capsys):
    code = run(["marotto", "--lambda", "9.14", "--mu", "2.50", "--beta", "3.36",
                "--out", str(tmp_path / "m.json")])
    assert code == 1


def test_marotto_json_report(tmp_path):
    out = tmp_path / "m.json"
    code = run(["marotto", "--lambda", "9.14", "--mu", "2.50", "--beta", "3.36",
                "--allow-outside-box", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    d = dict(zip([r[0] for r in doc["rows"]], [r[1] for r in doc["rows"]]))
    assert abs(d["E2_x"] - 0.2976190476) < 1e-9
    assert d["residual"] < 1e-10 and abs(d["det_DF2"]) > 1e-6
    assert d["expanding"] is True and d["valid"] is False
    assert d["box_lo_x"] < d["E2_x"] < d["box_hi_x"]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("lambda = 4.444\nmu = 3.71\nbeta = 2.734\nn = 64\n# comment\n")
    out1 = tmp_path / "o1.csv"
    run(["orbit", "--config", str(cfg), "--out", str(out1)])
    rows1 = [ln for ln in out1.read_text().splitlines() if not ln.startswith("#")][1:]
    assert len(rows1) == 64  # n came from the config file
    out2 = tmp_path / "o2.csv"
    run(["orbit", "--config", str(cfg), "--n", "16", "--out", str(out2)])
    rows2 = [ln for ln in out2.read_text().splitlines() if not ln.startswith("#")][1:]
    assert len(rows2) == 16  # the flag wins


def test_thread_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("ECOMAP3D_THREADS", "1")
    code = run(["fixed-points", "--lambda", "1.0", "--mu", "3.0", "--beta", "2.5",
                "--out", str(tmp_path / "fp.csv")])
    assert code == 0
