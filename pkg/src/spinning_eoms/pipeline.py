"""Single operating point: mean field -> drift -> covariance -> entanglement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import (
    StabilityReport,
    build_diffusion,
    build_drift,
    lyapunov_masked,
    solve_lyapunov,
    stability,
)
from .entanglement import EntanglementReport, entanglement_report
from .params import SystemParams, occupations
from .steady_state import SteadyState, solve_steady_state, steady_state_masked


@dataclass(frozen=True)
class PointResult:
    params: SystemParams
    steady_state: SteadyState
    stability: StabilityReport
    covariance: np.ndarray | None = None
    report: EntanglementReport | None = None

    @property
    def stable(self) -> bool:
        return self.stability.stable


def evaluate(params: SystemParams, *, stability_only: bool = False) -> PointResult:
    """Run the full pipeline at one parameter point.

    Unstable points (and ``stability_only`` runs) stop after the spectrum and
    carry no covariance or entanglement report.
    """
    ss = solve_steady_state(params)
    a = build_drift(params, ss)
    report = stability(a, params.omega_b)
    if stability_only or not report.stable:
        return PointResult(params, ss, report)
    d = build_diffusion(params, occupations(params))
    v = solve_lyapunov(a, d, params.omega_b, check=False)
    return PointResult(params, ss, report, v, entanglement_report(v))


def covariance(params: SystemParams) -> np.ndarray:
    """Steady-state covariance matrix; raises ``Unstable`` off the stable region."""
    ss = solve_steady_state(params)
    a = build_drift(params, ss)
    d = build_diffusion(params, occupations(params))
    return solve_lyapunov(a, d, params.omega_b)


BATCH_CHUNK = 1024


@dataclass(frozen=True)
class BatchResult:
    """Pipeline outputs for many points, one array entry per point.

    ``observables`` maps entanglement observable names to arrays that are NaN
    wherever the point is unstable, failed, or ``stability_only`` was set.
    ``errors`` holds ``"ExceptionName: message"`` for failed points.
    """

    spectral_abscissa: np.ndarray
    stable: np.ndarray
    observables: dict[str, np.ndarray]
    errors: list[str | None]


def _evaluate_chunk(items: Sequence[SystemParams], stability_only: bool) -> BatchResult:
    n = len(items)
    errors: list[str | None] = [None] * n
    batch = SystemParams.stack(items)
    ss, singular = steady_state_masked(batch)
    for i in np.flatnonzero(singular):
        errors[i] = "ParametricSingularity: |Lambda|^2 - 4G^2 vanishes at the parametric threshold"

    a = build_drift(batch, ss)
    a[singular] = -np.eye(6)  # placeholder so the eigen-solver sees finite input
    report = stability(a, batch.omega_b)
    abscissa = np.where(singular, np.nan, report.spectral_abscissa)
    stable = report.stable & ~singular

    values = {name: np.full(n, np.nan) for name in _REPORT_FIELDS}
    idx = np.flatnonzero(stable)
    if stability_only or idx.size == 0:
        return BatchResult(abscissa, stable, values, errors)

    d = build_diffusion(batch, occupations(batch))
    v, ok = lyapunov_masked(a[idx], d[idx], batch.omega_b[idx])
    for i in idx[~ok]:
        errors[i] = "SingularSystem: Lyapunov system is numerically singular"
    good = idx[ok]
    if good.size:
        rep = entanglement_report(v[ok])
        for name, arr in rep.observables().items():
            values[name][good] = arr
    return BatchResult(abscissa, stable, values, errors)


_REPORT_FIELDS = (
    "e_ca", "e_cb", "e_ab", "e_c_ab", "e_a_cb", "e_b_ca", "r_tau_min",
    "nu_minus_ca", "nu_minus_cb", "nu_minus_ab", "nu_minus_c_ab", "nu_minus_a_cb", "nu_minus_b_ca",
)


def evaluate_batch(items: Sequence[SystemParams], *, stability_only: bool = False) -> BatchResult:
    """Vectorized :func:`evaluate` over many points.

    Failures are reported per point instead of raised.  Values for a point
    do not depend on the other points in the batch.
    """
    parts = [
        _evaluate_chunk(items[i : i + BATCH_CHUNK], stability_only)
        for i in range(0, len(items), BATCH_CHUNK)
    ]
    if not parts:
        empty = np.zeros(0)
        return BatchResult(empty, empty.astype(bool), {k: empty for k in _REPORT_FIELDS}, [])
    return BatchResult(
        np.concatenate([p.spectral_abscissa for p in parts]),
        np.concatenate([p.stable for p in parts]),
        {k: np.concatenate([p.observables[k] for p in parts]) for k in _REPORT_FIELDS},
        [e for p in parts for e in p.errors],
    )
