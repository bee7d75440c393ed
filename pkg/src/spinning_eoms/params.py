"""Physical parameters of the spinning exciton-optomechanical resonator.

All rates and frequencies are stored as angular quantities (rad/s).  Config
files use ordinary frequencies in Hz, or ratios to the mechanical frequency,
and are converted on load.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy import constants

from .errors import InvalidParameters

TWO_PI = 2.0 * math.pi


def _reduce_phase(phase: float) -> float:
    if not math.isfinite(phase):
        return phase
    phase = math.fmod(phase, TWO_PI)
    if phase < 0.0:
        phase += TWO_PI
    if phase >= TWO_PI:  # fmod of values just below a multiple of 2*pi
        phase = 0.0
    return phase
HBAR = constants.hbar
K_B = constants.k
C_LIGHT = constants.c

__all__ = [
    "SystemParams",
    "RotationSpec",
    "ThermalOccupations",
    "base_params",
    "BASE_CONFIG",
    "sagnac_shift",
    "thermal_occupation",
    "occupations",
    "validate",
    "params_from_config",
    "params_to_config",
    "load_params",
    "CONFIG_KEYS",
]


@dataclass(frozen=True)
class RotationSpec:
    """Geometry and rotation of the whispering-gallery resonator.

    ``omega_rot`` is signed; ``dn_dlambda`` defaults to zero (dispersion neglected).
    """

    n: float
    radius: float
    omega_rot: float
    wavelength: float
    dn_dlambda: float = 0.0


@dataclass(frozen=True)
class ThermalOccupations:
    n_c: float
    n_a: float
    n_b: float


@dataclass(frozen=True)
class SystemParams:
    """Full parameter set, angular units throughout.

    ``delta_c_eff`` is the effective cavity-drive detuning (optomechanical shift
    already included).  ``delta_f`` is the signed Sagnac shift: positive for a
    drive entering from the left.  ``opa_phase`` is reduced to [0, 2*pi).
    Construction never raises; use :func:`validate` to list violations.
    """

    omega_b: float
    omega_0: float
    delta_c_eff: float
    delta_a: float
    delta_f: float
    kappa_c: float
    kappa_a: float
    kappa_b: float
    coupling_j: float
    coupling_g: float
    drive_eps: float
    opa_gain: float
    opa_phase: float
    temperature: float
    rotation: RotationSpec | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if np.ndim(self.opa_phase):
            phase = np.array([_reduce_phase(float(p)) for p in np.ravel(self.opa_phase)])
            phase = phase.reshape(np.shape(self.opa_phase))
        else:
            phase = _reduce_phase(float(self.opa_phase))
        object.__setattr__(self, "opa_phase", phase)

    def replace(self, **changes: Any) -> "SystemParams":
        return replace(self, **changes)

    @classmethod
    def stack(cls, items: Sequence["SystemParams"]) -> "SystemParams":
        """Batch of parameter sets: every numeric field becomes a 1-D array.

        All functions of this package that take a SystemParams broadcast
        over such a batch.
        """
        if not items:
            raise ValueError("cannot stack an empty sequence")
        names = [f.name for f in fields(cls) if f.name != "rotation"]
        return cls(**{n: np.array([getattr(p, n) for p in items], dtype=float) for n in names})

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return np.shape(self.omega_b)


BASE_CONFIG: dict[str, Any] = {
    "omega_b_hz": 1e9,
    "omega_0_hz": 345e12,
    "delta_c_eff_over_omega_b": 0.9,
    "delta_a_over_omega_b": -1.0,
    "delta_f_over_omega_b": 0.1,
    "kappa_c_hz": 80e6,
    "kappa_a_hz": 80e6,
    "kappa_b_hz": 100e3,
    "j_hz": 280e6,
    "g_hz": 500e3,
    "eps_hz": 0.1e12,
    "opa_gain_over_omega_b": 0.0,
    "opa_phase_rad": 0.0,
    "temperature_k": 0.01,
}


def base_params(**overrides: Any) -> SystemParams:
    """Reference operating point used throughout the numerical studies.

    Built from :data:`BASE_CONFIG`; keyword overrides are SystemParams fields
    in angular units.
    """
    return params_from_config(BASE_CONFIG).replace(**overrides)


def sagnac_shift(rot: RotationSpec, omega_c: float) -> float:
    """Rotation-induced shift of the optical resonance (rad/s).

    Odd in ``rot.omega_rot``; zero for ``n == 1`` without dispersion.
    """
    n = rot.n
    geometric = n * rot.radius * rot.omega_rot * omega_c / C_LIGHT
    return geometric * (1.0 - 1.0 / n**2 - (rot.wavelength / n) * rot.dn_dlambda)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein mean occupation ``1 / (exp(hbar omega / k_B T) - 1)``."""
    if not omega > 0.0:
        raise InvalidParameters(f"thermal_occupation needs omega > 0, got {omega!r}")
    if temperature < 0.0:
        raise InvalidParameters(f"temperature must be >= 0, got {temperature!r}")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (K_B * temperature)
    # exp(-x) / (1 - exp(-x)) underflows cleanly to 0 for optical frequencies
    return math.exp(-x) / -math.expm1(-x)


def _occupation_array(omega, temperature):
    omega, temperature = np.broadcast_arrays(np.asarray(omega, float), np.asarray(temperature, float))
    if omega.ndim == 0:
        return thermal_occupation(float(omega), float(temperature))
    flat = [thermal_occupation(w, t) for w, t in zip(omega.ravel().tolist(), temperature.ravel().tolist())]
    return np.array(flat).reshape(omega.shape)


def occupations(params: SystemParams) -> ThermalOccupations:
    """Bath occupations at the lab-frame resonance of each mode."""
    t = params.temperature
    omega_c = params.omega_0 + params.delta_c_eff + params.delta_f
    omega_a = params.omega_0 + params.delta_a
    return ThermalOccupations(
        n_c=_occupation_array(omega_c, t),
        n_a=_occupation_array(omega_a, t),
        n_b=_occupation_array(params.omega_b, t),
    )


def validate(params: SystemParams) -> list[str]:
    """Return human-readable descriptions of every violated invariant."""
    problems: list[str] = []
    for name in (f.name for f in params.__dataclass_fields__.values()):
        if name == "rotation":
            continue
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            problems.append(f"{name}: must be a finite number, got {value!r}")
    if problems:
        return problems

    for name in ("omega_b", "omega_0", "kappa_c", "kappa_a", "kappa_b"):
        if not getattr(params, name) > 0.0:
            problems.append(f"{name}: must be > 0, got {getattr(params, name)!r}")
    for name in ("opa_gain", "drive_eps", "temperature"):
        if getattr(params, name) < 0.0:
            problems.append(f"{name}: must be >= 0, got {getattr(params, name)!r}")

    rot = params.rotation
    if rot is not None:
        if not rot.n > 1.0:
            problems.append(f"rotation.n: must be > 1, got {rot.n!r}")
        if not rot.radius > 0.0:
            problems.append(f"rotation.radius_m: must be > 0, got {rot.radius!r}")
        if not rot.wavelength > 0.0:
            problems.append(f"rotation.lambda_m: must be > 0, got {rot.wavelength!r}")
    return problems


# Config keys (JSON) and how each maps onto a SystemParams field.
_HZ_KEYS = {
    "omega_b_hz": "omega_b",
    "omega_0_hz": "omega_0",
    "kappa_c_hz": "kappa_c",
    "kappa_a_hz": "kappa_a",
    "kappa_b_hz": "kappa_b",
    "j_hz": "coupling_j",
    "g_hz": "coupling_g",
    "eps_hz": "drive_eps",
}
_RATIO_KEYS = {
    "delta_c_eff_over_omega_b": "delta_c_eff",
    "delta_a_over_omega_b": "delta_a",
    "delta_f_over_omega_b": "delta_f",
    "opa_gain_over_omega_b": "opa_gain",
}
_PLAIN_KEYS = {"opa_phase_rad": "opa_phase", "temperature_k": "temperature"}
_ROTATION_KEYS = {
    "n": "n",
    "radius_m": "radius",
    "omega_rot_rad_s": "omega_rot",
    "lambda_m": "wavelength",
    "dn_dlambda": "dn_dlambda",
}

CONFIG_KEYS = tuple(_HZ_KEYS) + tuple(_RATIO_KEYS) + tuple(_PLAIN_KEYS) + ("rotation",)


def _number(key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameters(f"{key}: expected a number, got {value!r}")
    return float(value)


def params_from_config(cfg: dict[str, Any]) -> SystemParams:
    """Build parameters from a flat config mapping (Hz / ratio-to-omega_b units).

    ``delta_f_over_omega_b`` may be omitted when a ``rotation`` object is
    given; the shift is then computed at ``omega_0 + delta_c_eff``.

    Raises
    ------
    InvalidParameters
        On unknown or missing keys, non-numeric values, or a parameter set that
        fails :func:`validate`.
    """
    if not isinstance(cfg, dict):
        raise InvalidParameters("config must be a JSON object")
    unknown = sorted(set(cfg) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidParameters(f"unknown config keys: {', '.join(unknown)}")

    rotation = None
    if "rotation" in cfg:
        raw = cfg["rotation"]
        if not isinstance(raw, dict):
            raise InvalidParameters("rotation: expected an object")
        bad = sorted(set(raw) - set(_ROTATION_KEYS))
        if bad:
            raise InvalidParameters(f"unknown rotation keys: {', '.join(bad)}")
        missing = sorted(set(_ROTATION_KEYS) - {"dn_dlambda"} - set(raw))
        if missing:
            raise InvalidParameters(f"missing rotation keys: {', '.join(missing)}")
        rotation = RotationSpec(
            **{_ROTATION_KEYS[k]: _number(f"rotation.{k}", v) for k, v in raw.items()}
        )

    required = set(_HZ_KEYS) | set(_RATIO_KEYS) | set(_PLAIN_KEYS)
    if rotation is not None:
        if "delta_f_over_omega_b" in cfg:
            raise InvalidParameters(
                "give either delta_f_over_omega_b or rotation, not both"
            )
        required.discard("delta_f_over_omega_b")
    missing = sorted(required - set(cfg))
    if missing:
        raise InvalidParameters(f"missing config keys: {', '.join(missing)}")

    values: dict[str, Any] = {}
    for key, name in _HZ_KEYS.items():
        values[name] = TWO_PI * _number(key, cfg[key])
    omega_b = values["omega_b"]
    for key, name in _RATIO_KEYS.items():
        if key in cfg:
            values[name] = _number(key, cfg[key]) * omega_b
    for key, name in _PLAIN_KEYS.items():
        values[name] = _number(key, cfg[key])

    if rotation is not None:
        if rotation.n <= 0.0:
            raise InvalidParameters(f"rotation.n: must be > 1, got {rotation.n!r}")
        values["delta_f"] = sagnac_shift(
            rotation, values["omega_0"] + values["delta_c_eff"]
        )
    params = SystemParams(**values, rotation=rotation)
    problems = validate(params)
    if problems:
        raise InvalidParameters("; ".join(problems))
    return params


def params_to_config(params: SystemParams) -> dict[str, Any]:
    """Inverse of :func:`params_from_config` (rotation emitted if present)."""
    cfg: dict[str, Any] = {}
    for key, name in _HZ_KEYS.items():
        cfg[key] = getattr(params, name) / TWO_PI
    for key, name in _RATIO_KEYS.items():
        cfg[key] = getattr(params, name) / params.omega_b
    for key, name in _PLAIN_KEYS.items():
        cfg[key] = getattr(params, name)
    if params.rotation is not None:
        rot = asdict(params.rotation)
        cfg["rotation"] = {k: rot[v] for k, v in _ROTATION_KEYS.items()}
        del cfg["delta_f_over_omega_b"]
    return cfg


def load_params(path: str | Path) -> SystemParams:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except OSError as exc:
        raise InvalidParameters(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidParameters(f"{path}: invalid JSON ({exc})") from exc
    return params_from_config(cfg)
