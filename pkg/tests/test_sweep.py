import math

import numpy as np
import pytest

from spinning_eoms.errors import InvalidParameters, Unstable
from spinning_eoms.params import base_params
from spinning_eoms.sweep import (
    Axis,
    ResultTable,
    Series,
    SweepSpec,
    emit,
    find_vanishing_point,
    from_csv,
    from_json,
    gnuplot_script,
    run_point,
    run_sweep,
    settings_to_params,
    to_csv,
    to_json,
)

WB = base_params().omega_b


def _small_spec(**kw):
    args = dict(
        axis1=Axis("delta_f_over_omega_b", -0.1, 0.1, 3),
        axis2=Axis("delta_a_over_omega_b", -1.2, -0.8, 3),
        series=Series("opa_gain_over_omega_b", (0.0, 0.08)),
        overrides={"delta_c_eff_over_omega_b": 0.9, "temperature_k": 0.01},
        observables=("e_ca", "e_cb", "r_tau_min"),
    )
    args.update(kw)
    return SweepSpec(**args)


def _strip_timestamp(text):
    return "".join(l for l in text.splitlines(keepends=True) if not l.startswith("# generated"))


def test_grid_order_and_columns():
    spec = _small_spec()
    table = run_sweep(spec)
    assert table.columns[:3] == ["opa_gain_over_omega_b", "delta_f_over_omega_b", "delta_a_over_omega_b"]
    assert table.columns[-2:] == ["stable", "error"]
    assert len(table.rows) == 18
    assert table.rows[0][:3] == [0.0, -0.1, -1.2]
    assert table.rows[1][:3] == [0.0, -0.1, -1.0]


def test_sweep_matches_point_evaluation():
    spec = _small_spec()
    table = run_sweep(spec)
    for rec in table.records()[::5]:
        p = settings_to_params({**spec.overrides, **{k: rec[k] for k in spec.key_columns()}})
        rep = run_point(p, "signed")
        obs = rep.results["signed"].report.observables()
        assert rec["e_ca"] == obs["e_ca"] and rec["r_tau_min"] == obs["r_tau_min"]


def test_csv_is_byte_identical_apart_from_timestamp():
    a = to_csv(run_sweep(_small_spec()))
    b = to_csv(run_sweep(_small_spec()))
    assert _strip_timestamp(a) == _strip_timestamp(b)
    meta = [l for l in a.splitlines() if l.startswith("# ")]
    assert meta[-1].startswith("# generated")


def test_csv_and_json_round_trip(tmp_path):
    table = run_sweep(_small_spec())
    back = from_csv(emit(table, tmp_path / "t.csv").read_text())
    assert back.columns == table.columns and back.rows == table.rows
    assert back.metadata == table.metadata
    back = from_json(emit(table, tmp_path / "t.json", "json").read_text())
    assert back.rows == table.rows and back.metadata == table.metadata


def test_emit_rejects_unknown_format(tmp_path):
    with pytest.raises(InvalidParameters):
        emit(ResultTable([], [], {}), tmp_path / "x", "xml")


def test_empty_and_single_row_tables():
    empty = ResultTable(["a", "error"], [], {"version": "x"})
    assert from_csv(to_csv(empty)).rows == []
    one = ResultTable(["a", "stable", "error"], [[1.5, True, None]], {})
    back = from_csv(to_csv(one))
    assert back.rows == [[1.5, True, None]]


def test_refined_grid_reproduces_coarse_points_exactly():
    coarse = run_sweep(_small_spec(axis2=None, axis1=Axis("delta_a_over_omega_b", -1.2, -0.8, 3), series=None))
    fine = run_sweep(_small_spec(axis2=None, axis1=Axis("delta_a_over_omega_b", -1.2, -0.8, 5), series=None))
    fine_rows = {row[0]: row for row in fine.rows}
    for row in coarse.rows:
        assert fine_rows[row[0]] == row


def test_parallel_and_serial_agree(monkeypatch):
    import spinning_eoms.sweep as sweep

    monkeypatch.setattr(sweep, "ROWS_PER_TASK", 4)
    serial = run_sweep(_small_spec())
    parallel = run_sweep(_small_spec(), workers=2)
    assert serial.rows == parallel.rows


def test_both_directions_add_contrasts():
    spec = _small_spec(observables=("e_ca", "c_ca"), direction="both", axis2=None, series=None)
    table = run_sweep(spec)
    assert "e_ca_left" in table.columns and "e_ca_right" in table.columns and "c_ca" in table.columns
    for rec in table.records():
        if rec["delta_f_over_omega_b"] == 0.0:
            assert rec["e_ca_left"] == rec["e_ca_right"] and rec["c_ca"] == 0.0


def test_contrast_requires_both_directions():
    with pytest.raises(InvalidParameters):
        run_sweep(_small_spec(observables=("c_ca",)))


def test_errors_go_to_error_column():
    spec = SweepSpec(Axis("opa_gain_over_omega_b", 0.0, 0.6, 4), overrides={"delta_c_eff_over_omega_b": 0.5,
                     "delta_f_over_omega_b": 0.0}, observables=("e_ca",))
    table = run_sweep(spec)
    recs = table.records()
    assert recs[0]["stable"] is True and recs[0]["error"] is None
    assert any(r["stable"] is False for r in recs)
    for r in recs:
        if r["stable"] is False:
            assert r["e_ca"] is None


def test_strict_mode_raises_on_unstable_point():
    spec = SweepSpec(Axis("opa_gain_over_omega_b", 0.0, 0.6, 4), overrides={"delta_c_eff_over_omega_b": 0.5,
                     "delta_f_over_omega_b": 0.0}, observables=("e_ca",))
    with pytest.raises(Unstable):
        run_sweep(spec, strict=True)


def test_invalid_points_become_error_rows():
    spec = SweepSpec(Axis("temperature_k", -1.0, 1.0, 3), observables=("e_ca",))
    rec = run_sweep(spec).records()
    assert rec[0]["error"].startswith("InvalidParameters") and rec[0]["e_ca"] is None
    assert rec[2]["error"] is None


def test_spec_validation():
    with pytest.raises(InvalidParameters):
        SweepSpec.from_dict({"axis1": {"name": "mass", "start": 0, "stop": 1, "count": 3}})
    with pytest.raises(InvalidParameters):
        SweepSpec.from_dict({"axis1": {"name": "temperature_k", "start": 0, "stop": 1, "count": 1}})
    with pytest.raises(InvalidParameters):
        SweepSpec.from_dict({"axis1": {"name": "temperature_k", "start": 0, "stop": 1, "count": 3, "scale": "log"}})
    spec = _small_spec()
    assert SweepSpec.from_dict(spec.to_dict()) == spec


def test_log_axis_values():
    np.testing.assert_allclose(Axis("temperature_k", 1e-3, 10.0, 5, "log").values(), [1e-3, 1e-2, 1e-1, 1.0, 10.0])


def test_stability_only_sweep():
    table = run_sweep(_small_spec(series=None), stability_only=True)
    assert table.columns[2:] == ["spectral_abscissa", "stable", "error"]
    assert all(r[2] < 0 for r in table.rows)


def test_gnuplot_script_mentions_every_value_column():
    table = run_sweep(_small_spec(axis2=None, series=None))
    script = gnuplot_script(table, "out.csv")
    for name in ("e_ca", "e_cb", "r_tau_min"):
        assert f"'{name}'" in script
    assert "set datafile separator ','" in script


def test_find_vanishing_point():
    assert find_vanishing_point(lambda x: 2.0 - x, 0.1, 10.0) == pytest.approx(2.0, rel=1e-3)
    assert find_vanishing_point(lambda x: -1.0, 0.1, 10.0) is None
    assert find_vanishing_point(lambda x: 1.0, 0.1, 10.0) == 10.0
    # upper edge of a window of positivity
    assert find_vanishing_point(lambda x: (x - 1.0) * (3.0 - x), 0.1, 10.0) == pytest.approx(3.0, rel=1e-3)


def test_run_point_directions():
    p = base_params(delta_f=-0.1 * WB)
    assert run_point(p, "left").results["left"].params.delta_f == 0.1 * WB
    assert run_point(p, "right").results["right"].params.delta_f == -0.1 * WB
    assert run_point(p, "signed").results["signed"].params.delta_f == -0.1 * WB
    with pytest.raises(InvalidParameters):
        run_point(p, "up")


def test_settings_reject_unknown_keys():
    with pytest.raises(InvalidParameters):
        settings_to_params({"nonsense": 1.0})


def test_derived_settings():
    p = settings_to_params({"kappa_c_over_omega_b": 0.2, "opa_gain_over_kappa_c": 0.5})
    assert p.kappa_c == pytest.approx(0.2 * WB)
    assert p.opa_gain == pytest.approx(0.1 * WB)
