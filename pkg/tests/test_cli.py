import csv
import json

import numpy as np
import pytest

from qtraj import cli
from qtraj import qlinalg as ql

COARSE = "0:1:0.1"


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_fig1(tmp_path):
    assert cli.main(["fig1", "--out", str(tmp_path), "--p-grid", COARSE]) == 0
    rows = _rows(tmp_path / "fig1.csv")
    assert list(rows[0]) == ["p", "E_HS", "E_GHZ", "E_W"]
    assert float(rows[0]["E_GHZ"]) == pytest.approx(2 / 3, abs=1e-9)
    assert float(rows[0]["E_HS"]) == pytest.approx(0.9553418, abs=1e-7)
    for r in rows:
        assert float(r["E_HS"]) >= float(r["E_GHZ"]) - 1e-10
        assert float(r["E_HS"]) >= float(r["E_W"]) - 1e-10
    assert (tmp_path / "plot_fig1.py").exists()
    manifest = json.loads((tmp_path / "manifest_fig1.json").read_text())
    assert manifest["command"] == "fig1" and manifest["config"]["p_grid"] == COARSE


def test_csv_number_format(tmp_path):
    cli.main(["fig1", "--out", str(tmp_path), "--p-grid", COARSE])
    line = (tmp_path / "fig1.csv").read_text().splitlines()[1]
    # 10 significant digits
    assert line.split(",")[1] == f"{float(line.split(',')[1]):.10g}"
    assert len(line.split(",")[1].replace("0.", "", 1).lstrip("0")) <= 10


def test_fig2(tmp_path):
    res = cli.cmd_fig2(tmp_path, np.linspace(0, 1, 11))
    rep = res["coincidence"]
    assert rep["HS:bf-pf-bpf"]["E_vs_S_L_spread"] <= 1e-9
    assert rep["GHZ:bf-pf"]["E_vs_S_L_spread"] > 0.01
    for (name, kind), c in res["curves"].items():
        assert np.all((c["linear_entropy"] >= 0) & (c["linear_entropy"] <= 1))
    assert json.loads((tmp_path / "fig2_coincidence.json").read_text())


def test_fig3(tmp_path):
    res = cli.cmd_fig3(tmp_path, "qjsd", np.linspace(0, 1, 11))
    rows = _rows(tmp_path / "fig3_bf.csv")
    assert list(rows[0]) == ["p", "E", "S_L", "d_init", "d_final", "d_mm"]
    assert float(rows[0]["d_init"]) == pytest.approx(0, abs=1e-12)
    assert float(rows[-1]["d_final"]) == pytest.approx(0, abs=1e-10)
    assert float(rows[-1]["d_init"]) == pytest.approx(0.6548, abs=5e-4)
    assert max(res["spreads"].values()) <= 1e-10


def test_table(tmp_path, capsys):
    assert cli.main(["table", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "initial-MM" in out and "0.8285" in out and "0.9682" in out
    data = json.loads((tmp_path / "table.json").read_text())
    assert data["table"]["final-MM"]["d_JS"] == pytest.approx(0.4188, abs=5e-4)


def test_fig4(tmp_path):
    res = cli.cmd_fig4(tmp_path, count=4, seed=1, variant="local", grid=np.linspace(0, 1, 21))
    assert res["stats"]["E_spread_max"] <= 1e-6
    assert res["stats"]["S_L_at_death_spread"] <= 1e-6
    assert np.all(np.abs(res["E"][:, -1]) <= 1e-12)
    assert np.all(np.abs(res["S_L"][:, -1] - 1) <= 1e-12)
    assert len(_rows(tmp_path / "fig4_sudden_death.csv")) == 4


def test_fig4_global_and_threads(tmp_path, monkeypatch):
    monkeypatch.setenv("QTRAJ_THREADS", "2")
    code = cli.main(["fig4", "--out", str(tmp_path), "--count", "3", "--dep", "global",
                     "--p-grid", "0:1:0.05"])
    assert code == 0
    stats = json.loads((tmp_path / "fig4_summary.json").read_text())
    assert stats["variant"] == "global" and stats["p_star_spread"] <= 1e-6


def test_search_small(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({
        "initial_temperature": 0.005, "min_temperature": 1e-3, "steps_per_temperature": 5,
        "restarts": 1, "quench_steps": 5,
    }))
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli.main(["search", "--out", str(out1), "--config", str(cfg_file), "--seed", "4"]) == 0
    # rerun from the manifest
    assert cli.main(["search", "--out", str(out2), "--config", str(out1 / "manifest_search.json")]) == 0
    for name in ("found_state.json", "score.json", "dominance.json"):
        assert (out1 / name).read_text() == (out2 / name).read_text()
    score = json.loads((out1 / "score.json").read_text())
    assert set(score["per_channel_mean_E"]) == {"bf", "pf", "bpf"}
    assert score["config"]["seed"] == 4
    psi = ql.from_json((out1 / "found_state.json").read_text())
    assert psi.shape == (16,)
    assert set(json.loads((out1 / "dominance.json").read_text())) == {"HS", "GHZ", "W"}


def test_config_errors(tmp_path):
    assert cli.main(["fig1", "--out", str(tmp_path), "--p-grid", "bogus"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cooling_factor": 2}))
    assert cli.main(["search", "--out", str(tmp_path), "--config", str(bad)]) == 2
    assert cli.main(["search", "--out", str(tmp_path), "--config", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["fig9"])
    assert exc.value.code == 2


def test_numerical_failure_exit_code(tmp_path, monkeypatch):
    from qtraj.errors import NoDeath

    def boom(*a, **k):
        raise NoDeath("never separable")

    monkeypatch.setattr(cli, "sudden_death", boom)
    assert cli.main(["fig4", "--out", str(tmp_path), "--count", "1", "--p-grid", "0:1:0.5"]) == 1


def test_deterministic_rerun(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.main(["fig3", "--out", str(a), "--p-grid", COARSE, "--metric", "hs"])
    cli.main(["fig3", "--out", str(b), "--config", str(a / "manifest_fig3.json")])
    for name in ("fig3_bf.csv", "fig3_pf.csv", "fig3_bpf.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
