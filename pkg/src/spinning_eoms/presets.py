"""Sweep presets for each numerical study (figures 2-11).

Every parameter the figure captions or surrounding text pin down is encoded
exactly; grid ranges that are not stated use the defaults below.  The audit
table records where each preset value comes from so tests can check the
presets against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownPreset
from .sweep import Axis, Series, SweepSpec

DELTA_F_AXIS = Axis("delta_f_over_omega_b", -0.2, 0.2, 201)
DELTA_A_AXIS = Axis("delta_a_over_omega_b", -2.0, 0.0, 201)
GAIN_OVER_KAPPA_AXIS = Axis("opa_gain_over_kappa_c", 0.0, 1.0, 201)
TEMPERATURE_AXIS = Axis("temperature_k", 1e-3, 500.0, 201, "log")
TEMPERATURE_AXIS_FIG11 = Axis("temperature_k", 1e-3, 50.0, 201, "log")
KAPPA_AXIS = Axis("kappa_c_over_omega_b", 0.005, 1.0, 200)

OPA_ON_OFF = Series("opa_gain_over_omega_b", (0.0, 0.08))

# Settings shared by the detuning maps (figs 2-5, 9).
_MAP_SETTINGS = {"delta_c_eff_over_omega_b": 0.9, "temperature_k": 0.01}
# Settings shared by the thermal studies (figs 6-8, 10, 11).
_THERMAL_SETTINGS = {
    "delta_c_eff_over_omega_b": 1.0,
    "delta_a_over_omega_b": -1.0,
    "delta_f_over_omega_b": 0.1,
    "g_hz": 300e3,
    "opa_phase_rad": 0.0,
}


@dataclass(frozen=True)
class FigurePreset:
    name: str
    spec: SweepSpec
    notes: str = ""


def _build() -> dict[str, FigurePreset]:
    half_pi = math.pi / 2
    p = {}
    p["fig2"] = FigurePreset(
        "fig2",
        SweepSpec(
            DELTA_F_AXIS, DELTA_A_AXIS, OPA_ON_OFF,
            {**_MAP_SETTINGS, "opa_phase_rad": 0.0}, ("e_ca",), "signed",
        ),
        "photon-exciton negativity map, OPA off/on",
    )
    p["fig3"] = FigurePreset(
        "fig3",
        SweepSpec(
            DELTA_F_AXIS, DELTA_A_AXIS, OPA_ON_OFF,
            {**_MAP_SETTINGS, "opa_phase_rad": half_pi}, ("e_cb",), "signed",
        ),
        "photon-phonon negativity map, OPA off/on",
    )
    p["fig4"] = FigurePreset(
        "fig4",
        SweepSpec(
            DELTA_F_AXIS, DELTA_A_AXIS, OPA_ON_OFF,
            {**_MAP_SETTINGS, "opa_phase_rad": 0.0}, ("e_ab",), "signed",
        ),
        "exciton-phonon negativity map, OPA off/on",
    )
    p["fig5"] = FigurePreset(
        "fig5",
        SweepSpec(
            GAIN_OVER_KAPPA_AXIS, DELTA_A_AXIS, None,
            {**_MAP_SETTINGS, "opa_phase_rad": half_pi, "delta_f_over_omega_b": 0.1},
            ("e_ca", "e_cb", "e_ab", "c_ca", "c_cb", "c_ab"), "both",
        ),
        "bipartite contrast ratios versus G/kappa_c and exciton detuning",
    )
    p["fig6"] = FigurePreset(
        "fig6",
        SweepSpec(TEMPERATURE_AXIS, None, OPA_ON_OFF, dict(_THERMAL_SETTINGS), ("e_ca",), "both"),
        "photon-exciton negativity versus temperature",
    )
    p["fig7"] = FigurePreset(
        "fig7",
        SweepSpec(
            KAPPA_AXIS, None, Series("opa_gain_over_omega_b", (0.06, 0.08, 0.10)),
            {**_THERMAL_SETTINGS, "temperature_k": 260.0}, ("e_ca",), "both",
        ),
        "photon-exciton negativity versus cavity decay at 260 K",
    )
    p["fig8"] = FigurePreset(
        "fig8",
        SweepSpec(TEMPERATURE_AXIS, None, OPA_ON_OFF, dict(_THERMAL_SETTINGS), ("e_cb", "e_ab"), "both"),
        "phonon-involving negativities versus temperature",
    )
    p["fig9"] = FigurePreset(
        "fig9",
        SweepSpec(
            DELTA_F_AXIS, DELTA_A_AXIS, OPA_ON_OFF,
            {**_MAP_SETTINGS, "opa_phase_rad": half_pi}, ("r_tau_min",), "signed",
        ),
        "minimum residual contangle map, OPA off/on",
    )
    p["fig10"] = FigurePreset(
        "fig10",
        SweepSpec(
            DELTA_A_AXIS, None, OPA_ON_OFF,
            {**_THERMAL_SETTINGS, "temperature_k": 0.01}, ("r_tau_min", "c_r"), "both",
        ),
        "tripartite contrast versus exciton detuning; fig8 parameters, both drive "
        "directions; temperature not stated, base 10 mK used",
    )
    p["fig11"] = FigurePreset(
        "fig11",
        SweepSpec(TEMPERATURE_AXIS_FIG11, None, OPA_ON_OFF, dict(_THERMAL_SETTINGS), ("r_tau_min",), "both"),
        "minimum residual contangle versus temperature",
    )
    return p


PRESETS = _build()


def figure_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


# (preset, setting, value, source).  ``source`` is "caption" or "text" when
# the value is stated for that figure, "inherited" when the caption defers to
# another figure, and "default" for grid choices made here.
AUDIT = [
    ("fig2", "delta_c_eff_over_omega_b", 0.9, "caption"),
    ("fig2", "opa_phase_rad", 0.0, "caption"),
    ("fig2", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig2", "temperature_k", 0.01, "text"),
    ("fig2", "direction", "signed", "default"),
    ("fig3", "opa_phase_rad", math.pi / 2, "caption"),
    ("fig3", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig3", "delta_c_eff_over_omega_b", 0.9, "inherited"),
    ("fig3", "temperature_k", 0.01, "inherited"),
    ("fig4", "opa_phase_rad", 0.0, "caption"),
    ("fig4", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig4", "delta_c_eff_over_omega_b", 0.9, "inherited"),
    ("fig5", "opa_phase_rad", math.pi / 2, "caption"),
    ("fig5", "delta_f_over_omega_b", 0.1, "caption"),
    ("fig5", "direction", "both", "caption"),
    ("fig5", "delta_c_eff_over_omega_b", 0.9, "inherited"),
    ("fig5", "axis1", ("opa_gain_over_kappa_c", 0.0, 1.0), "default"),
    ("fig6", "delta_c_eff_over_omega_b", 1.0, "caption"),
    ("fig6", "delta_a_over_omega_b", -1.0, "caption"),
    ("fig6", "g_hz", 300e3, "caption"),
    ("fig6", "opa_phase_rad", 0.0, "caption"),
    ("fig6", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig6", "delta_f_over_omega_b", 0.1, "inherited"),
    ("fig6", "axis1", ("temperature_k", 1e-3, 500.0), "default"),
    ("fig7", "temperature_k", 260.0, "caption"),
    ("fig7", "opa_gain_over_omega_b", (0.06, 0.08, 0.10), "text"),
    ("fig7", "delta_c_eff_over_omega_b", 1.0, "inherited"),
    ("fig7", "g_hz", 300e3, "inherited"),
    ("fig7", "axis1", ("kappa_c_over_omega_b", 0.005, 1.0), "default"),
    ("fig8", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig8", "opa_phase_rad", 0.0, "caption"),
    ("fig8", "g_hz", 300e3, "inherited"),
    ("fig8", "delta_c_eff_over_omega_b", 1.0, "inherited"),
    ("fig9", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig9", "opa_phase_rad", math.pi / 2, "caption"),
    ("fig9", "delta_c_eff_over_omega_b", 0.9, "inherited"),
    ("fig9", "temperature_k", 0.01, "inherited"),
    ("fig10", "g_hz", 300e3, "inherited"),
    ("fig10", "delta_c_eff_over_omega_b", 1.0, "inherited"),
    ("fig10", "delta_f_over_omega_b", 0.1, "text"),
    ("fig10", "direction", "both", "text"),
    ("fig10", "temperature_k", 0.01, "default"),
    ("fig11", "opa_gain_over_omega_b", (0.0, 0.08), "caption"),
    ("fig11", "opa_phase_rad", 0.0, "caption"),
    ("fig11", "g_hz", 300e3, "inherited"),
    ("fig11", "delta_c_eff_over_omega_b", 1.0, "inherited"),
    ("fig11", "axis1", ("temperature_k", 1e-3, 50.0), "default"),
]


def preset_value(preset: FigurePreset, setting: str):
    """Look up ``setting`` in a preset the way the audit table names it."""
    spec = preset.spec
    if setting == "direction":
        return spec.direction
    if setting == "axis1":
        return (spec.axis1.name, spec.axis1.start, spec.axis1.stop)
    if spec.series is not None and spec.series.name == setting:
        return tuple(spec.series.values)
    return spec.overrides[setting]
