"""Parameter sweeps over the single-point pipeline, and their serialization."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .entanglement import contrast_ratio
from .errors import EomsError, InvalidParameters, Unstable
from .params import BASE_CONFIG, CONFIG_KEYS, SystemParams, params_from_config
from .pipeline import PointResult, evaluate, evaluate_batch

DIRECTIONS = ("signed", "left", "right", "both")

# Axis names that may be swept; values are in the unit the name states.
SWEEPABLE = (
    "delta_c_eff_over_omega_b",
    "delta_a_over_omega_b",
    "delta_f_over_omega_b",
    "opa_gain_over_omega_b",
    "opa_gain_over_kappa_c",
    "opa_phase_rad",
    "temperature_k",
    "kappa_c_over_omega_b",
    "g_hz",
)
# Derived settings, applied after plain config keys in this order.
_DERIVED = ("kappa_c_over_omega_b", "opa_gain_over_kappa_c")
SETTINGS = tuple(k for k in CONFIG_KEYS if k != "rotation") + _DERIVED

ENTANGLEMENT_OBSERVABLES = (
    "e_ca",
    "e_cb",
    "e_ab",
    "e_c_ab",
    "e_a_cb",
    "e_b_ca",
    "r_tau_min",
    "nu_minus_ca",
    "nu_minus_cb",
    "nu_minus_ab",
    "nu_minus_c_ab",
    "nu_minus_a_cb",
    "nu_minus_b_ca",
)
CONTRAST_OBSERVABLES = {
    "c_ca": "e_ca",
    "c_cb": "e_cb",
    "c_ab": "e_ab",
    "c_r": "r_tau_min",
}
OBSERVABLES = (
    ENTANGLEMENT_OBSERVABLES + tuple(CONTRAST_OBSERVABLES) + ("spectral_abscissa", "stable")
)


def resolve_config(base: dict[str, Any], settings: dict[str, Any]) -> dict[str, Any]:
    """Apply named settings (config keys or derived ratios) to a config dict."""
    unknown = sorted(set(settings) - set(SETTINGS))
    if unknown:
        raise InvalidParameters(f"unknown settings: {', '.join(unknown)}")
    cfg = dict(base)
    for key, value in settings.items():
        if key not in _DERIVED:
            cfg[key] = value
    if "kappa_c_over_omega_b" in settings:
        cfg["kappa_c_hz"] = settings["kappa_c_over_omega_b"] * cfg["omega_b_hz"]
    if "opa_gain_over_kappa_c" in settings:
        cfg["opa_gain_over_omega_b"] = (
            settings["opa_gain_over_kappa_c"] * cfg["kappa_c_hz"] / cfg["omega_b_hz"]
        )
    return cfg


# --------------------------------------------------------------------------
# single points


@dataclass(frozen=True)
class PointReport:
    """Pipeline results for one or two drive directions.

    ``results`` is keyed by ``"signed"``, ``"left"`` or ``"right"``.
    ``contrasts`` is filled only for ``direction="both"`` when both
    directions are stable.
    """

    direction: str
    results: dict[str, PointResult]
    contrasts: dict[str, float] = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return all(r.stable for r in self.results.values())

    def observables(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key, res in self.results.items():
            values = res.report.observables() if res.report is not None else {}
            values["spectral_abscissa"] = res.stability.spectral_abscissa / res.params.omega_b
            for name in ENTANGLEMENT_OBSERVABLES + ("spectral_abscissa",):
                column = name if self.direction != "both" else f"{name}_{key}"
                out[column] = values.get(name)
        for name in CONTRAST_OBSERVABLES:
            out[name] = self.contrasts.get(name)
        out["stable"] = self.stable
        return out


def run_point(
    params: SystemParams,
    direction: str = "both",
    *,
    strict: bool = False,
    stability_only: bool = False,
) -> PointReport:
    """Evaluate one point for the requested drive direction(s).

    ``left`` uses ``+|delta_f|``, ``right`` uses ``-|delta_f|``, ``signed``
    keeps ``params.delta_f`` as given, ``both`` runs left and right and adds
    the contrast ratios.  Unstable points yield stability-only results unless
    ``strict``, in which case :class:`Unstable` is raised.
    """
    if direction not in DIRECTIONS:
        raise InvalidParameters(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    shift = abs(params.delta_f)
    if direction == "signed":
        runs = {"signed": params}
    elif direction == "left":
        runs = {"left": params.replace(delta_f=shift)}
    elif direction == "right":
        runs = {"right": params.replace(delta_f=-shift)}
    else:
        runs = {"left": params.replace(delta_f=shift), "right": params.replace(delta_f=-shift)}

    results = {k: evaluate(p, stability_only=stability_only) for k, p in runs.items()}
    if strict:
        for key, res in results.items():
            if not res.stable:
                raise Unstable(
                    f"{key} drive: spectral abscissa "
                    f"{res.stability.spectral_abscissa / res.params.omega_b:.3e} omega_b"
                )

    contrasts: dict[str, float] = {}
    if direction == "both" and all(r.report is not None for r in results.values()):
        left, right = results["left"].report, results["right"].report
        for name, obs in CONTRAST_OBSERVABLES.items():
            contrasts[name] = contrast_ratio(getattr(left, obs), getattr(right, obs))
    return PointReport(direction, results, contrasts)


# --------------------------------------------------------------------------
# sweep specification


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def validate(self) -> list[str]:
        problems = []
        if self.name not in SWEEPABLE:
            problems.append(f"axis {self.name!r} is not sweepable")
        if not isinstance(self.count, int) or self.count < 2:
            problems.append(f"axis {self.name!r}: count must be an integer >= 2")
        if self.scale not in ("linear", "log"):
            problems.append(f"axis {self.name!r}: scale must be 'linear' or 'log'")
        elif self.scale == "log" and not (self.start > 0 and self.stop > 0):
            problems.append(f"axis {self.name!r}: log scale needs positive bounds")
        return problems

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "Axis":
        try:
            return cls(
                name=raw["name"],
                start=float(raw["start"]),
                stop=float(raw["stop"]),
                count=raw["count"],
                scale=raw.get("scale", "linear"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameters(f"bad axis definition {raw!r}: {exc}") from exc

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "start": self.start,
            "stop": self.stop,
            "count": self.count,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class Series:
    """A short list of discrete values for one setting (e.g. OPA on/off)."""

    name: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    series: Series | None = None
    overrides: dict[str, Any] = field(default_factory=dict)
    observables: tuple[str, ...] = ("e_ca", "e_cb", "e_ab", "r_tau_min")
    direction: str = "signed"

    def validate(self) -> list[str]:
        problems = self.axis1.validate()
        if self.axis2 is not None:
            problems += self.axis2.validate()
            if self.axis2.name == self.axis1.name:
                problems.append("axis1 and axis2 must differ")
        if self.series is not None:
            if self.series.name not in SETTINGS:
                problems.append(f"series {self.series.name!r} is not a known setting")
            if not self.series.values:
                problems.append("series needs at least one value")
        bad = sorted(set(self.overrides) - set(SETTINGS))
        if bad:
            problems.append(f"unknown overrides: {', '.join(bad)}")
        bad = sorted(set(self.observables) - set(OBSERVABLES))
        if bad:
            problems.append(f"unknown observables: {', '.join(bad)}")
        if self.direction not in DIRECTIONS:
            problems.append(f"direction must be one of {DIRECTIONS}")
        elif self.direction != "both" and set(self.observables) & set(CONTRAST_OBSERVABLES):
            problems.append("contrast observables need direction 'both'")
        return problems

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "SweepSpec":
        allowed = {"axis1", "axis2", "series", "overrides", "observables", "direction"}
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise InvalidParameters(f"unknown sweep keys: {', '.join(unknown)}")
        if "axis1" not in raw:
            raise InvalidParameters("sweep spec needs axis1")
        series = None
        if raw.get("series") is not None:
            s = raw["series"]
            series = Series(s["name"], tuple(float(v) for v in s["values"]))
        spec = cls(
            axis1=Axis.from_dict(raw["axis1"]),
            axis2=Axis.from_dict(raw["axis2"]) if raw.get("axis2") else None,
            series=series,
            overrides=dict(raw.get("overrides", {})),
            observables=tuple(raw.get("observables", cls.observables)),
            direction=raw.get("direction", "signed"),
        )
        problems = spec.validate()
        if problems:
            raise InvalidParameters("; ".join(problems))
        return spec

    def to_dict(self) -> dict[str, Any]:
        return {
            "axis1": self.axis1.to_dict(),
            "axis2": self.axis2.to_dict() if self.axis2 else None,
            "series": (
                {"name": self.series.name, "values": list(self.series.values)}
                if self.series
                else None
            ),
            "overrides": dict(self.overrides),
            "observables": list(self.observables),
            "direction": self.direction,
        }

    def key_columns(self) -> list[str]:
        cols = [self.series.name] if self.series else []
        cols.append(self.axis1.name)
        if self.axis2:
            cols.append(self.axis2.name)
        return cols

    def value_columns(self) -> list[str]:
        cols: list[str] = []
        for name in self.observables:
            if name in ("stable",) or name in CONTRAST_OBSERVABLES:
                continue
            if self.direction == "both":
                cols += [f"{name}_left", f"{name}_right"]
            else:
                cols.append(name)
        cols += [n for n in self.observables if n in CONTRAST_OBSERVABLES]
        return cols + ["stable", "error"]

    def grid(self) -> list[dict[str, float]]:
        """Setting dicts for every grid point, series-major then row-major."""
        series = [(None, None)] if self.series is None else [
            (self.series.name, v) for v in self.series.values
        ]
        second = self.axis2.values() if self.axis2 else [None]
        points = []
        for s_name, s_value in series:
            for x in self.axis1.values():
                for y in second:
                    point = {}
                    if s_name is not None:
                        point[s_name] = float(s_value)
                    point[self.axis1.name] = float(x)
                    if y is not None:
                        point[self.axis2.name] = float(y)
                    points.append(point)
        return points


def load_spec(path: str | Path) -> SweepSpec:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise InvalidParameters(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidParameters(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise InvalidParameters(f"{path}: sweep spec must be a JSON object")
    return SweepSpec.from_dict(raw)


# --------------------------------------------------------------------------
# sweeping


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list[Any]]
    metadata: dict[str, Any]

    def column(self, name: str) -> list[Any]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _direction_runs(params: SystemParams, direction: str) -> dict[str, SystemParams]:
    shift = abs(params.delta_f)
    if direction == "signed":
        return {"signed": params}
    if direction == "left":
        return {"left": params.replace(delta_f=shift)}
    if direction == "right":
        return {"right": params.replace(delta_f=-shift)}
    return {"left": params.replace(delta_f=shift), "right": params.replace(delta_f=-shift)}


def _optional(value: Any) -> float | None:
    value = float(value)
    return None if math.isnan(value) else value


def _evaluate_rows(task: tuple) -> list[list[Any]]:
    """Rows for a block of grid points, evaluated as one vectorized batch."""
    base, points, key_cols, value_cols, direction, strict, stability_only = task
    errors: list[str | None] = [None] * len(points)
    params: list[SystemParams | None] = []
    for i, point in enumerate(points):
        try:
            params.append(params_from_config(resolve_config(base, point)))
        except EomsError as exc:
            if strict:
                raise
            params.append(None)
            errors[i] = f"{type(exc).__name__}: {exc}"
    valid = [i for i, p in enumerate(params) if p is not None]
    keys = list(_direction_runs(params[valid[0]], direction)) if valid else []
    batches = {
        key: evaluate_batch(
            [_direction_runs(params[i], direction)[key] for i in valid],
            stability_only=stability_only,
        )
        for key in keys
    }
    for j, i in enumerate(valid):
        failures = [b.errors[j] for b in batches.values() if b.errors[j] is not None]
        if failures:
            errors[i] = failures[0]
        if strict and (failures or not all(b.stable[j] for b in batches.values())):
            run_point(params[i], direction, strict=True, stability_only=stability_only)
            raise EomsError(errors[i] or "point failed")  # run_point should have raised

    columns: dict[str, np.ndarray] = {}
    for key, batch in batches.items():
        omega_b = np.array([params[i].omega_b for i in valid])
        values = dict(batch.observables)
        values["spectral_abscissa"] = batch.spectral_abscissa / omega_b
        for name, arr in values.items():
            columns[name if direction != "both" else f"{name}_{key}"] = arr
    if direction == "both" and batches:
        left, right = batches["left"].observables, batches["right"].observables
        for name, obs in CONTRAST_OBSERVABLES.items():
            columns[name] = contrast_ratio(left[obs], right[obs])
    stable = np.logical_and.reduce([b.stable for b in batches.values()]) if batches else []

    slot = {i: j for j, i in enumerate(valid)}
    rows = []
    for i, point in enumerate(points):
        row: list[Any] = [point[c] for c in key_cols]
        if errors[i] is not None:
            rows.append(row + [None] * (len(value_cols) - 1) + [errors[i]])
            continue
        j = slot[i]
        row += [_optional(columns[c][j]) for c in value_cols[:-2]]
        rows.append(row + [bool(stable[j]), None])
    return rows


ROWS_PER_TASK = 4096


def run_sweep(
    spec: SweepSpec,
    base: dict[str, Any] | None = None,
    *,
    workers: int | None = None,
    strict: bool = False,
    stability_only: bool = False,
) -> ResultTable:
    """Evaluate ``spec`` on its full grid.

    ``base`` is a config dict (defaults to :data:`BASE_CONFIG`); the spec's
    overrides are applied on top of it.  With ``workers > 1`` rows are
    computed in a process pool; row order and values do not depend on it.
    Per-point errors go into the ``error`` column unless ``strict``.
    """
    problems = spec.validate()
    if problems:
        raise InvalidParameters("; ".join(problems))
    resolved = resolve_config(dict(base or BASE_CONFIG), spec.overrides)
    params_from_config(resolved)  # fail early on an invalid base point

    key_cols = spec.key_columns()
    value_cols = spec.value_columns()
    if stability_only:
        value_cols = (
            [f"spectral_abscissa_{k}" for k in ("left", "right")]
            if spec.direction == "both"
            else ["spectral_abscissa"]
        ) + ["stable", "error"]
    grid = spec.grid()
    tasks = [
        (resolved, grid[i : i + ROWS_PER_TASK], key_cols, value_cols, spec.direction, strict, stability_only)
        for i in range(0, len(grid), ROWS_PER_TASK)
    ]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_evaluate_rows, tasks))
    else:
        blocks = [_evaluate_rows(t) for t in tasks]
    rows = [row for block in blocks for row in block]

    metadata = {
        "params": resolved,
        "spec": spec.to_dict(),
        "version": __version__,
        "generated": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return ResultTable(key_cols + value_cols, rows, metadata)


# --------------------------------------------------------------------------
# serialization


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return float(text)
    except ValueError:
        return text


def to_csv(table: ResultTable) -> str:
    """CSV text: ``#``-prefixed metadata lines, a header, one row per point.

    The ``generated`` timestamp is the last metadata line, so everything
    else is byte-identical between runs of the same configuration.
    """
    buf = io.StringIO()
    meta = table.metadata
    for key in sorted(k for k in meta if k != "generated"):
        buf.write(f"# {key}: {json.dumps(meta[key], sort_keys=True)}\r\n")
    if "generated" in meta:
        buf.write(f"# generated: {json.dumps(meta['generated'])}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def from_csv(text: str) -> ResultTable:
    metadata: dict[str, Any] = {}
    lines = text.splitlines(keepends=True)
    body_start = 0
    for i, line in enumerate(lines):
        if not line.startswith("# "):
            body_start = i
            break
        key, _, value = line[2:].partition(": ")
        metadata[key] = json.loads(value)
    else:
        body_start = len(lines)
    reader = csv.reader(io.StringIO("".join(lines[body_start:])))
    rows = list(reader)
    if not rows:
        return ResultTable([], [], metadata)
    return ResultTable(rows[0], [[_parse_cell(c) for c in r] for r in rows[1:]], metadata)


def to_json(table: ResultTable) -> str:
    return json.dumps(
        {"metadata": table.metadata, "columns": table.columns, "rows": table.rows},
        indent=1,
        sort_keys=True,
    )


def from_json(text: str) -> ResultTable:
    raw = json.loads(text)
    return ResultTable(raw["columns"], raw["rows"], raw["metadata"])


def emit(table: ResultTable, path: str | Path, fmt: str = "csv") -> Path:
    """Write ``table`` to ``path`` as ``csv`` or ``json``."""
    path = Path(path)
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise InvalidParameters(f"unknown format {fmt!r}")
    try:
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def gnuplot_script(table: ResultTable, csv_path: str | Path) -> str:
    """A gnuplot script plotting every numeric value column of a CSV table."""
    spec = table.metadata.get("spec", {})
    two_d = bool(spec.get("axis2"))
    has_series = bool(spec.get("series"))
    n_keys = (1 if has_series else 0) + (2 if two_d else 1)
    x_col = n_keys if not two_d else n_keys - 1
    lines = [
        f"# plots {Path(csv_path).name}",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
    ]
    x_name = table.columns[x_col - 1]
    if x_name == "temperature_k":
        lines.append("set logscale x")
    lines.append(f"set xlabel '{x_name}'")
    targets = [
        (i + 1, c)
        for i, c in enumerate(table.columns)
        if i >= n_keys and c not in ("stable", "error")
    ]
    if two_d:
        lines += [f"set ylabel '{table.columns[n_keys - 1]}'", "set view map", "set pm3d"]
        for col, name in targets:
            lines.append(f"set title '{name}'")
            lines.append(
                f"splot '{csv_path}' skip 1 using {x_col}:{x_col + 1}:{col} with pm3d notitle"
            )
            lines.append("pause -1")
    else:
        plots = ", ".join(
            f"'{csv_path}' using {x_col}:{col} with lines title '{name}'"
            for col, name in targets
        )
        lines.append(f"plot {plots}")
        lines.append("pause -1")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# threshold search


def find_vanishing_point(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    count: int = 121,
    log: bool = True,
    rtol: float = 1e-4,
) -> float | None:
    """Upper edge of the region where ``fn`` is positive, on ``[lo, hi]``.

    Scans a grid for the last positive sample, then bisects between it and
    its successor.  Returns ``None`` when ``fn`` is never positive, and
    ``hi`` when it is still positive at the end of the range.
    """
    xs = np.geomspace(lo, hi, count) if log else np.linspace(lo, hi, count)
    positive = [fn(float(x)) > 0.0 for x in xs]
    if not any(positive):
        return None
    last = max(i for i, p in enumerate(positive) if p)
    if last == count - 1:
        return float(hi)
    a, b = float(xs[last]), float(xs[last + 1])
    while b - a > rtol * b:
        mid = math.sqrt(a * b) if log else 0.5 * (a + b)
        if fn(mid) > 0.0:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def settings_to_params(settings: dict[str, Any], base: dict[str, Any] | None = None) -> SystemParams:
    return params_from_config(resolve_config(dict(base or BASE_CONFIG), settings))
