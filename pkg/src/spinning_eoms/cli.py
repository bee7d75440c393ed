"""Command-line front end.

Exit codes: 0 on success, 2 for invalid input, 3 for a computation failure
in ``--strict`` mode.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from .errors import EomsError, InvalidParameters, UnknownPreset
from .params import BASE_CONFIG, base_params, load_params, params_to_config
from .presets import PRESETS, figure_preset
from .sweep import (
    Axis,
    Series,
    emit,
    gnuplot_script,
    load_spec,
    run_point,
    run_sweep,
)

log = logging.getLogger("spinning_eoms")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_COMPUTE = 3


def _parse_value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(spec, overrides: Sequence[str]):
    """Apply ``key=value`` overrides to a sweep spec.

    Keys are parameter settings (``temperature_k=2``), axis fields
    (``axis1.count=21``) or series values (``series.values=0,0.08``).
    """
    settings = dict(spec.overrides)
    axes = {"axis1": spec.axis1, "axis2": spec.axis2}
    series = spec.series
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep:
            raise InvalidParameters(f"override {item!r} is not key=value")
        key = key.strip()
        if key.startswith(("axis1.", "axis2.")):
            axis_name, _, fld = key.partition(".")
            axis = axes[axis_name]
            if axis is None:
                raise InvalidParameters(f"preset has no {axis_name}")
            if fld not in {f.name for f in dataclasses.fields(Axis)}:
                raise InvalidParameters(f"unknown axis field {fld!r}")
            axes[axis_name] = dataclasses.replace(axis, **{fld: _parse_value(raw)})
        elif key == "series.values":
            if series is None:
                raise InvalidParameters("preset has no series")
            series = Series(series.name, tuple(float(v) for v in raw.split(",")))
        else:
            value = _parse_value(raw)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise InvalidParameters(f"override {key!r} needs a number")
            settings[key] = float(value)
            if series is not None and series.name == key:
                series = None
    spec = dataclasses.replace(
        spec, axis1=axes["axis1"], axis2=axes["axis2"], series=series, overrides=settings
    )
    problems = spec.validate()
    if problems:
        raise InvalidParameters("; ".join(problems))
    return spec


def _base_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return dict(BASE_CONFIG)
    return params_to_config(load_params(path))


def _write_table(table, out: str, fmt: str, gnuplot: bool) -> None:
    path = emit(table, out, fmt)
    log.info("wrote %d rows to %s", len(table.rows), path)
    if gnuplot:
        if fmt != "csv":
            raise InvalidParameters("--gnuplot needs --format csv")
        script = path.with_suffix(".gp")
        script.write_text(gnuplot_script(table, path.name))
        log.info("wrote plot script %s", script)


def _report_dict(report) -> dict[str, Any]:
    out: dict[str, Any] = {"direction": report.direction, "stable": report.stable}
    for key, res in report.results.items():
        entry: dict[str, Any] = {
            "delta_f_over_omega_b": res.params.delta_f / res.params.omega_b,
            "stable": res.stable,
            "spectral_abscissa_over_omega_b": res.stability.spectral_abscissa / res.params.omega_b,
            "c_mean": [res.steady_state.c_mean.real, res.steady_state.c_mean.imag],
        }
        if res.report is not None:
            entry.update(res.report.observables())
            entry["residual_contangles"] = list(res.report.residuals)
        out[key] = entry
    out.update(report.contrasts)
    return out


def cmd_point(args) -> int:
    params = load_params(args.config) if args.config else base_params()
    try:
        report = run_point(params, args.direction, strict=args.strict)
    except EomsError as exc:
        if args.strict:
            raise
        print(json.dumps({"error": f"{type(exc).__name__}: {exc}"}, indent=2))
        return EXIT_OK
    print(json.dumps(_report_dict(report), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    table = run_sweep(
        load_spec(args.spec),
        _base_config(args.config),
        workers=args.workers,
        strict=args.strict,
    )
    _write_table(table, args.out, args.format, args.gnuplot)
    return EXIT_OK


def cmd_figure(args) -> int:
    preset = figure_preset(args.name)
    spec = apply_overrides(preset.spec, args.override)
    table = run_sweep(spec, _base_config(args.config), workers=args.workers, strict=args.strict)
    table.metadata["preset"] = preset.name
    _write_table(table, args.out, args.format, args.gnuplot)
    return EXIT_OK


def cmd_stability(args) -> int:
    table = run_sweep(
        load_spec(args.spec),
        _base_config(args.config),
        workers=args.workers,
        strict=args.strict,
        stability_only=True,
    )
    _write_table(table, args.out, args.format, args.gnuplot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinning-eoms",
        description="Steady-state Gaussian entanglement of a spinning "
        "exciton-optomechanical resonator with a parametric amplifier.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--strict", action="store_true", help="fail on any point error")
        if needs_out:
            p.add_argument("--out", required=True)
            p.add_argument("--format", choices=("csv", "json"), default=None)
            p.add_argument("--workers", type=int, default=None)
            p.add_argument("--gnuplot", action="store_true", help="also write a .gp script")

    p = sub.add_parser("point", help="report a single operating point")
    p.add_argument("--config", help="JSON parameter file (default: base parameters)")
    p.add_argument("--direction", choices=("left", "right", "both", "signed"), default="both")
    common(p, needs_out=False)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="run a 1-D/2-D sweep")
    p.add_argument("--config")
    p.add_argument("--spec", required=True)
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("--name", required=True, help=", ".join(PRESETS))
    p.add_argument("--config", help="base parameters (default: built-in)")
    p.add_argument("--override", action="append", default=[], metavar="KEY=VALUE")
    common(p)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("stability", help="map the stable region of a sweep")
    p.add_argument("--config")
    p.add_argument("--spec", required=True)
    common(p)
    p.set_defaults(func=cmd_stability)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    if getattr(args, "out", None) is not None and args.format is None:
        args.format = "json" if Path(args.out).suffix.lower() == ".json" else "csv"
    try:
        return args.func(args)
    except (InvalidParameters, UnknownPreset) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EomsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
