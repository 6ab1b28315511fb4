import csv
import io
import math

import numpy as np
import pytest

from cavity_collision import analytic, figures
from cavity_collision.cli import main
from cavity_collision.config import RunConfig
from cavity_collision.model import v0_effective


def read_table(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_angle_report(capsys):
    assert main(["angle"]) == 0
    out = capsys.readouterr().out
    values = dict(line.split(" = ") for line in out.splitlines() if not line.startswith("#"))
    assert float(values["b_c_m"]) == pytest.approx(0.81e-2, rel=0.01)
    assert float(values["E0_V_per_m"]) == pytest.approx(1.57e-3, rel=0.01)
    # first-principles chain lands near 52 kHz
    assert float(values["Omega_over_2pi_hz"]) == pytest.approx(52.27e3, rel=1e-3)
    assert float(values["theta_c_relative_difference"]) < 1e-10


def test_eta_zero_angle():
    assert analytic.cavity_angle_from_eta(RunConfig().setup(), 0.0, 273.0) == 0.0


def test_config_file_and_errors(tmp_path, capsys):
    good = tmp_path / "run.cfg"
    good.write_text("# faster pair\nv1 = 320\n")
    out = tmp_path / "angle.txt"
    assert main(["angle", "--config", str(good), "--out", str(out)]) == 0
    assert "v0_m_per_s = " in out.read_text()
    bad = tmp_path / "bad.cfg"
    bad.write_text("v1 = 320\nwidth = 3\n")
    assert main(["angle", "--config", str(bad)]) == 1
    assert "line 2" in capsys.readouterr().err
    assert main(["angle", "--override", "v1=100"]) == 1  # v1 must exceed v2


def test_fig2_small_sweep_is_deterministic(tmp_path):
    args = ["fig2", "--override", "n_points=3", "--override", "eta_min=1e5", "--override", "eta_max=4e5"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(args + ["--out", str(a), "--threads", "1"]) == 0
    assert main(args + ["--out", str(b), "--threads", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = read_table(a.read_text())
    assert [float(r["eta"]) for r in rows] == pytest.approx([0.0, 1e5, 2e5, 4e5])
    ref = rows[0]
    assert float(ref["p_eg_analytic"]) == pytest.approx(0.89)
    assert float(ref["p_ge_analytic"]) == 0.0
    assert float(ref["p_eg_num"]) == pytest.approx(0.89, abs=1e-9)
    cfg_hash = RunConfig().with_overrides(["n_points=3", "eta_min=1e5", "eta_max=4e5"]).hash
    assert all(r["config_hash"] == cfg_hash for r in rows)
    assert f"# config_hash = {cfg_hash}" in a.read_text()
    for r in rows:
        probs = [float(r[k]) for k in ("p_ee_num", "p_eg_num", "p_ge_num", "p_gg_num")]
        assert all(0 <= p <= 1 for p in probs)
        assert r["status"] == "ok"


def test_fig2_vacuum_default_grid():
    cfg = RunConfig(nbar=0.0, detection_scale=1.0)
    rows = figures.fig2_sweep(cfg, threads=4)
    assert len(rows) == 41 and rows[0].eta == 0.0
    assert max(max(r.p_ee_num, r.p_gg_num) for r in rows) < 0.01
    target = analytic.eta_for_angle(cfg.setup(), math.pi / 4, v0_effective(300.0, 243.0))
    assert figures.crossing_eta(rows) == pytest.approx(target, rel=0.1)
    assert all(abs(r.norm_drift) < 1e-8 for r in rows)


def test_fig2_reports_accuracy_failure(capsys):
    code = main(["fig2", "--override", "n_points=1", "--override", "eta_min=5e4", "--override", "dt_s=4e-7",
                 "--override", "include_eta_zero_reference=false"])
    captured = capsys.readouterr()
    assert code == 2
    assert "accuracy-error" in captured.out
    assert "accuracy-error" in captured.err


def test_fig3_ideal_and_realistic(tmp_path):
    ideal = tmp_path / "ideal.csv"
    assert main(["fig3", "--override", "nbar=0", "--override", "detection_mode=scale",
                 "--override", "detection_scale=1", "--out", str(ideal)]) == 0
    text = ideal.read_text()
    contrast = float(text.split("# contrast = ")[1].splitlines()[0])
    assert contrast == pytest.approx(1.0, abs=0.01)
    rows = read_table(text)
    phi = np.array([float(r["phi"]) for r in rows])
    values = np.array([float(r["correlator"]) for r in rows])
    assert phi[0] == 0.0 and phi[-1] == pytest.approx(4 * math.pi)
    assert np.all(np.abs(values) <= 1)
    # 2 pi period: the grid of 81 points over 4 pi puts phi + 2 pi at index + 40
    np.testing.assert_allclose(values[:41], values[40:], atol=1e-12)

    scan = figures.fig3_scan(RunConfig.fig3_defaults())
    assert 0.5 < scan.curve.contrast < 1.0


def test_selftest_rejects_inconsistent_truncation(capsys):
    assert main(["selftest", "--override", "n_fock_dyn=3", "--override", "n_fock_mix=3"]) == 1
    assert "n_fock_dyn" in capsys.readouterr().err


def test_selftest_coarse_step_fails(tmp_path):
    out = tmp_path / "selftest.txt"
    assert main(["selftest", "--override", "dt_s=4e-7", "--out", str(out)]) == 2
    lines = out.read_text().splitlines()
    assert len(lines) == 11
    assert lines[0].startswith("[PASS]")
    assert any(line.startswith("[FAIL]") and "integration error" in line for line in lines)
