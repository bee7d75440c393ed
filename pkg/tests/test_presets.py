import math

import pytest

from spinning_eoms.errors import UnknownPreset
from spinning_eoms.presets import AUDIT, PRESETS, figure_preset, preset_value
from spinning_eoms.sweep import from_csv, run_sweep, to_csv


def test_every_figure_has_a_preset():
    assert set(PRESETS) == {f"fig{n}" for n in range(2, 12)}


@pytest.mark.parametrize("name,setting,value,source", AUDIT)
def test_preset_matches_audit_table(name, setting, value, source):
    got = preset_value(PRESETS[name], setting)
    if isinstance(value, float):
        assert got == pytest.approx(value, rel=1e-15)
    else:
        assert got == value
    assert source in ("caption", "text", "inherited", "default")


def test_presets_validate():
    for preset in PRESETS.values():
        assert preset.spec.validate() == []


def test_unknown_preset():
    with pytest.raises(UnknownPreset):
        figure_preset("fig99")
    with pytest.raises(KeyError):
        figure_preset("fig1")


def test_fig6_output_reparses():
    spec = figure_preset("fig6").spec
    from dataclasses import replace

    small = replace(spec, axis1=replace(spec.axis1, count=3))
    table = run_sweep(small)
    back = from_csv(to_csv(table))
    assert back.columns == table.columns
    assert back.columns[:2] == ["opa_gain_over_omega_b", "temperature_k"]
    assert "e_ca_left" in back.columns and "e_ca_right" in back.columns
    assert back.rows == table.rows


def test_thermal_presets_share_operating_point():
    for name in ("fig6", "fig8", "fig11"):
        o = PRESETS[name].spec.overrides
        assert o["delta_a_over_omega_b"] == -1.0 and o["g_hz"] == 300e3
        assert o["opa_phase_rad"] == 0.0


def test_map_presets_use_quarter_phase_where_needed():
    assert PRESETS["fig3"].spec.overrides["opa_phase_rad"] == math.pi / 2
    assert PRESETS["fig9"].spec.overrides["opa_phase_rad"] == math.pi / 2
