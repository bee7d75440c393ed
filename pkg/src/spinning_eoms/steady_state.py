"""Classical mean-field amplitudes of the driven cavity/exciton/phonon system."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, ParametricSingularity
from .linalg import pointwise
from .params import SystemParams

SINGULARITY_RTOL = 1e-12


def expi(phase):
    """``exp(i phase)`` elementwise, evaluated with ``math`` per element."""
    return pointwise(math.cos, phase) + 1j * pointwise(math.sin, phase)


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def abs2(z):
    return z.real * z.real + z.imag * z.imag


@dataclass(frozen=True)
class SteadyState:
    """Mean amplitudes and the derived linearized couplings.

    For a batched SystemParams every field is an array of the batch shape.

    Attributes
    ----------
    c_mean, a_mean : complex
        Cavity and exciton amplitudes.
    b_mean : float
        Phonon amplitude, real and non-positive for ``g >= 0``.
    g_cb : complex
        Effective optomechanical coupling ``i g <c>`` (rad/s).
    lambda_coeff : complex
        Complex cavity response coefficient (rad/s).
    """

    c_mean: complex
    a_mean: complex
    b_mean: float
    g_cb: complex
    lambda_coeff: complex


def lambda_coeff(params: SystemParams) -> complex:
    """Cavity response ``-i(dc + dF) + kc + J^2 / (-i da + ka)``."""
    # numpy complex arithmetic throughout, so scalars and batches round alike
    f = _arr
    p = params
    lam = (
        -1j * (f(p.delta_c_eff) + f(p.delta_f))
        + f(p.kappa_c)
        + f(p.coupling_j) ** 2 / (-1j * f(p.delta_a) + f(p.kappa_a))
    )
    return lam[()]


def solve_steady_state(params: SystemParams) -> SteadyState:
    """Closed-form steady state at the effective detuning ``params.delta_c_eff``.

    Raises
    ------
    ParametricSingularity
        If ``|Lambda|^2`` is within a relative 1e-12 of ``4 G^2``.
    """
    ss, singular = steady_state_masked(params)
    if np.any(singular):
        raise ParametricSingularity("|Lambda|^2 - 4G^2 vanishes at the parametric threshold")
    return ss


def steady_state_masked(params: SystemParams) -> tuple[SteadyState, np.ndarray | bool]:
    """Like :func:`solve_steady_state` but flags singular points instead of raising.

    Flagged entries of the returned state are NaN.
    """
    p = params
    lam = lambda_coeff(p)
    lam2 = abs2(lam)
    denom = lam2 - 4.0 * p.opa_gain * p.opa_gain
    singular = np.abs(denom) < SINGULARITY_RTOL * lam2
    safe = np.where(singular, np.nan, denom)
    if np.ndim(safe) == 0:
        safe, singular = float(safe), bool(singular)
    with np.errstate(invalid="ignore"):
        c = (_arr(p.drive_eps) * (2.0 * _arr(p.opa_gain) * expi(p.opa_phase) + lam) / safe)[()]
        a = (-1j * _arr(p.coupling_j) * c / (1j * _arr(p.delta_a) + _arr(p.kappa_a)))[()]
        b = (-(_arr(p.coupling_g) / _arr(p.omega_b)) * abs2(c))[()]
    ss = SteadyState(
        c_mean=c, a_mean=a, b_mean=b, g_cb=1j * p.coupling_g * c, lambda_coeff=lam
    )
    return ss, singular


def mean_field_residuals(params: SystemParams, ss: SteadyState) -> tuple[complex, complex]:
    """Time-independent cavity and exciton equations evaluated at ``ss``.

    The optomechanical frequency shift is already folded into
    ``delta_c_eff``, so the phonon amplitude does not appear explicitly.
    Both values vanish (to rounding) for a true fixed point.
    """
    p = params
    c, a = ss.c_mean, ss.a_mean
    dc = (
        -(1j * (p.delta_c_eff + p.delta_f) + p.kappa_c) * c
        - 1j * p.coupling_j * a
        + 2.0 * p.opa_gain * expi(p.opa_phase) * c.conjugate()
        + p.drive_eps
    )
    da = -(1j * p.delta_a + p.kappa_a) * a - 1j * p.coupling_j * c
    return dc, da


def self_consistent_steady_state(
    params: SystemParams,
    delta_c_bare: float,
    *,
    damping: float = 0.5,
    tol: float = 1e-12,
    max_iter: int = 10_000,
) -> tuple[float, SteadyState]:
    """Solve for the effective detuning given the bare cavity detuning.

    Iterates ``x <- x + damping * (delta_c_bare + 2 g <b>(x) - x)`` starting at
    ``delta_c_bare`` until successive iterates differ by less than
    ``tol * omega_b``.  ``params.delta_c_eff`` is ignored.
    """
    p = params
    x = float(delta_c_bare)
    step_tol = tol * p.omega_b
    for _ in range(max_iter):
        ss = solve_steady_state(p.replace(delta_c_eff=x))
        target = delta_c_bare + 2.0 * p.coupling_g * ss.b_mean
        x_new = x + damping * (target - x)
        if abs(x_new - x) < step_tol:
            ss = solve_steady_state(p.replace(delta_c_eff=x_new))
            return x_new, ss
        x = x_new
    raise NoConvergence(
        f"effective detuning did not settle after {max_iter} iterations "
        "(possibly a bistable operating point)"
    )
