import json

import pytest

from spinning_eoms import cli
from spinning_eoms.params import BASE_CONFIG
from spinning_eoms.presets import figure_preset
from spinning_eoms.sweep import from_csv, from_json


def _spec_file(tmp_path, **extra):
    raw = {
        "axis1": {"name": "temperature_k", "start": 0.01, "stop": 1.0, "count": 2, "scale": "log"},
        "observables": ["e_ca", "e_cb"],
        **extra,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(raw))
    return path


def test_point_command(capsys):
    assert cli.main(["point"]) == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["stable"] is True and "c_ca" in out and "e_ca" in out["left"]


def test_sweep_command_with_undriven_config(tmp_path):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({**BASE_CONFIG, "eps_hz": 0.0}))
    out = tmp_path / "out.csv"
    code = cli.main(["sweep", "--config", str(cfg), "--spec", str(_spec_file(tmp_path)), "--out", str(out)])
    assert code == cli.EXIT_OK
    table = from_csv(out.read_text())
    assert len(table.rows) == 2
    for rec in table.records():
        assert rec["e_ca"] <= 1e-14 and rec["e_cb"] <= 1e-14


def test_figure_command_with_overrides_and_gnuplot(tmp_path):
    out = tmp_path / "fig6.csv"
    code = cli.main([
        "figure", "--name", "fig6", "--out", str(out), "--gnuplot",
        "--override", "axis1.count=3", "--override", "series.values=0.08",
    ])
    assert code == cli.EXIT_OK
    table = from_csv(out.read_text())
    assert len(table.rows) == 3 and table.metadata["preset"] == "fig6"
    assert (tmp_path / "fig6.gp").read_text().startswith("# plots fig6.csv")


def test_figure_json_output(tmp_path):
    out = tmp_path / "fig11.json"
    assert cli.main(["figure", "--name", "fig11", "--out", str(out), "--override", "axis1.count=2"]) == 0
    table = from_json(out.read_text())
    assert len(table.rows) == 4


def test_setting_override_replaces_series(tmp_path):
    spec = cli.apply_overrides(figure_preset("fig6").spec, ["opa_gain_over_omega_b=0.05", "temperature_k=2"])
    assert spec.series is None and spec.overrides["temperature_k"] == 2.0


def test_stability_command(tmp_path):
    out = tmp_path / "s.csv"
    assert cli.main(["stability", "--spec", str(_spec_file(tmp_path)), "--out", str(out)]) == 0
    assert from_csv(out.read_text()).columns == ["temperature_k", "spectral_abscissa", "stable", "error"]


@pytest.mark.parametrize(
    "argv",
    [
        ["figure", "--name", "fig99", "--out", "x.csv"],
        ["figure", "--name", "fig6", "--out", "x.csv", "--override", "mass=1"],
        ["figure", "--name", "fig6", "--out", "x.csv", "--override", "axis1.count=1"],
        ["sweep", "--spec", "/nonexistent/spec.json", "--out", "x.csv"],
        ["point", "--config", "/nonexistent/p.json"],
    ],
)
def test_invalid_input_exit_code(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert cli.main(argv) == cli.EXIT_INVALID
    assert "error:" in capsys.readouterr().err


def test_unwritable_output_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = cli.main(["sweep", "--spec", str(_spec_file(tmp_path)), "--out", str(blocker / "sub" / "o.csv")])
    assert code == cli.EXIT_INVALID


def test_strict_compute_failure_exit_code(tmp_path):
    spec = _spec_file(tmp_path, axis1={"name": "opa_gain_over_omega_b", "start": 0.0, "stop": 0.6, "count": 4},
                      overrides={"delta_c_eff_over_omega_b": 0.5, "delta_f_over_omega_b": 0.0})
    code = cli.main(["sweep", "--strict", "--spec", str(spec), "--out", str(tmp_path / "o.csv")])
    assert code == cli.EXIT_COMPUTE
    code = cli.main(["sweep", "--spec", str(spec), "--out", str(tmp_path / "o.csv")])
    assert code == cli.EXIT_OK


def test_gnuplot_requires_csv(tmp_path):
    code = cli.main(["sweep", "--spec", str(_spec_file(tmp_path)), "--out", str(tmp_path / "o.json"), "--gnuplot"])
    assert code == cli.EXIT_INVALID
