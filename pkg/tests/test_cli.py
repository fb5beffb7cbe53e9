import json

import numpy as np
import pytest

from qszilard import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, (float(x) for x in line.split(",")))) for line in lines[1:]]
    return header, rows


def test_fig3_exact(capsys):
    code, out, _ = run(capsys, "fig3", "--eta-min", "-0.5", "--eta-max", "0.5", "--eta-steps", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["eta", "dw_m1", "dw_m2"]
    assert len(rows) == 5
    for row in rows:
        assert row["dw_m1"] == pytest.approx(0.0, abs=1e-12)
        assert row["dw_m2"] == pytest.approx((1 - row["eta"] ** 2) / 2, abs=1e-12)


def test_fig3_degenerate_endpoint(capsys):
    # at eta=1 both states collapse onto |11> and every gap closes; the minus
    # branch has zero probability, so this drives the skipped-branch path
    code, out, _ = run(capsys, "fig3", "--eta-min", "1", "--eta-max", "1", "--eta-steps", "1")
    assert code == 0
    _, rows = parse_csv(out)
    assert rows[0]["dw_m1"] == pytest.approx(0.0, abs=1e-12)
    assert rows[0]["dw_m2"] == pytest.approx(0.0, abs=1e-12)


def test_fig3_sampled_columns(capsys):
    code, out, _ = run(capsys, "fig3", "--eta-steps", "3", "--shots", "400", "--seed", "5")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["eta", "dw_m1", "dw_m1_se", "dw_m2", "dw_m2_se"]
    assert all(row["dw_m1_se"] >= 0 for row in rows)


def test_json_format(capsys):
    code, out, _ = run(capsys, "sample", "--family", "werner", "--eta", "0.4", "--q", "0.8",
                       "--shots", "500", "--seed", "2", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 1
    assert list(rows[0]) == ["eta", "q", "work", "work_se", "shots", "exact"]
    assert rows[0]["shots"] == 500
    assert abs(rows[0]["work"] - rows[0]["exact"]) < 6 * rows[0]["work_se"]


def test_sample_deterministic(capsys):
    args = ("sample", "--eta", "0.3", "--q", "0.7", "--shots", "800", "--seed", "11")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_fig4_map_outputs(tmp_path, capsys):
    out = tmp_path / "map.csv"
    code, _, err = run(capsys, "fig4-map", "--family", "werner",
                       "--eta-min", "-0.4", "--eta-max", "0.4", "--eta-steps", "3",
                       "--q-steps", "5", "--out", str(out))
    assert code == 0
    header, rows = parse_csv(out.read_text())
    assert header == ["eta", "q", "work", "bound", "violation"]
    assert len(rows) == 15
    boundary = tmp_path / "map_boundary.csv"
    assert boundary.exists()
    bheader, brows = parse_csv(boundary.read_text())
    assert bheader == ["eta", "q_star"]
    mid = [r for r in brows if r["eta"] == 0.0][0]
    assert mid["q_star"] == pytest.approx(1 / np.sqrt(3), abs=1e-9)


def test_fig4_map_row_consistency(capsys):
    code, out, _ = run(capsys, "fig4-map", "--eta-steps", "3", "--q-steps", "3")
    assert code == 0
    _, rows = parse_csv(out)
    for row in rows:
        assert row["violation"] == pytest.approx(row["work"] - row["bound"], abs=1e-12)


def test_scatter_summary(capsys):
    code, out, err = run(capsys, "fig4-scatter", "--family", "werner",
                         "--eta-steps", "5", "--q-steps", "7")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["eta", "q", "steering_violation", "work_violation"]
    assert len(rows) == 35
    assert "spearman_rank_correlation" in err
    value = float(err.split("spearman_rank_correlation =")[1].split()[0])
    assert value >= 0.99


def test_bound_report(capsys):
    code, out, err = run(capsys, "bound", "--eta", "0.2", "--resolution", "4000")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["weight", "vx", "vy", "vz"]
    assert 1 <= len(rows) <= 4
    assert sum(r["weight"] for r in rows) == pytest.approx(1.0, abs=1e-9)
    assert "closed_bound" in err and "oracle_bound" in err and "gap" in err


def test_sweep_sampled_columns(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "werner", "--eta-steps", "2",
                       "--q-steps", "2", "--shots", "300", "--seed", "7")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["eta", "q", "work", "work_se", "bound", "violation"]
    for row in rows:
        assert row["violation"] == pytest.approx(row["work"] - row["bound"], abs=1e-12)


def test_sweep_thread_invariance(capsys):
    base = ("sweep", "--eta-steps", "3", "--q-steps", "3", "--shots", "200", "--seed", "3")
    _, out1, _ = run(capsys, *base, "--threads", "1")
    _, out4, _ = run(capsys, *base, "--threads", "4")
    assert out1 == out4


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.conf"
    cfg.write_text("family = werner\neta-steps = 4\nq_steps = 4\n# comment\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--q-steps", "2")
    assert code == 0
    _, rows = parse_csv(out)
    # eta-steps from config, q-steps overridden by the flag
    assert len(rows) == 8


def test_config_json_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"eta": 0.25, "q": 0.5, "shots": 250, "seed": 4}))
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    code, out, _ = run(capsys, "sample")
    assert code == 0
    _, rows = parse_csv(out)
    assert rows[0]["eta"] == 0.25
    assert rows[0]["shots"] == 250


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("bogus = 3\n")
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 2
    assert "unknown option" in err


def test_config_bad_value(tmp_path, capsys):
    cfg = tmp_path / "bad.conf"
    cfg.write_text("eta_steps = lots\n")
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 2


def test_partial_strategy_flags(capsys):
    # specifying any weight zeroes the unspecified ones
    code, out, _ = run(capsys, "sweep", "--family", "werner", "--c1", "1.0",
                       "--eta-steps", "2", "--q-steps", "2")
    assert code == 0
    _, rows = parse_csv(out)
    top = [r for r in rows if r["q"] == 1.0]
    for row in top:
        # population-only strategy saturates but never beats the ceiling
        assert row["violation"] == pytest.approx(0.0, abs=1e-12)


def test_invalid_strategy_exit(capsys):
    code, _, err = run(capsys, "sweep", "--c1", "0.9", "--c2", "0.9")
    assert code == 2
    assert "strategy" in err


def test_invalid_eta_exit(capsys):
    code, _, err = run(capsys, "sample", "--eta", "1.5")
    assert code == 2


def test_bad_grid_exit(capsys):
    code, _, err = run(capsys, "fig3", "--eta-min", "0.9", "--eta-max", "-0.9")
    assert code == 2


def test_unknown_family_exit(capsys):
    code = cli.main(["sweep", "--family", "bogus"])
    capsys.readouterr()
    assert code == 2


def test_plot_requires_out(capsys):
    code, out, err = run(capsys, "fig3", "--plot")
    assert code == 2
    assert out == ""


def test_plot_rendering(tmp_path, capsys):
    out = tmp_path / "fig.csv"
    code, _, _ = run(capsys, "fig3", "--eta-steps", "4", "--out", str(out), "--plot")
    assert code == 0
    png = tmp_path / "fig.png"
    assert png.exists()
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_map_plot_rendering(tmp_path, capsys):
    target = tmp_path / "map.png"
    code, _, _ = run(capsys, "fig4-map", "--eta-steps", "3", "--q-steps", "3",
                     "--plot", str(target))
    assert code == 0
    assert target.exists()


def test_out_file_csv_roundtrip(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    code, stdout, _ = run(capsys, "fig3", "--eta-steps", "3", "--out", str(out))
    assert code == 0
    assert stdout == ""
    header, rows = parse_csv(out.read_text())
    assert len(rows) == 3
