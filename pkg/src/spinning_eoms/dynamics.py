"""Linearized quadrature dynamics and the steady-state covariance matrix.

Quadrature order is ``(X_c, Y_c, X_a, Y_a, X_b, Y_b)``; vacuum variance 1/2.
Drift and diffusion matrices are returned in rad/s.  The Lyapunov solve
divides both by ``omega_b`` first, which leaves the covariance unchanged but
brings matrix entries to order one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem, Unstable
from .linalg import PIVOT_RTOL, eig_general, kron, lu_decompose, lu_substitute, pointwise
from .params import SystemParams, ThermalOccupations
from .steady_state import SteadyState

STABILITY_RTOL = 1e-9
PHYSICALITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``[[0, 1], [-1, 0]]`` repeated ``n_modes`` times."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def apply_symplectic_form(v: np.ndarray) -> np.ndarray:
    """``Omega @ v`` for stacked matrices, computed by row swaps (exact)."""
    out = np.empty_like(v)
    out[..., 0::2, :] = v[..., 1::2, :]
    out[..., 1::2, :] = -v[..., 0::2, :]
    return out


def _assemble(entries: list[list]) -> np.ndarray:
    """Matrix (or stack of matrices) from a nested list of scalars/arrays."""
    shape = np.broadcast_shapes(*(np.shape(e) for row in entries for e in row))
    out = np.zeros(shape + (len(entries), len(entries[0])))
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            if not (np.ndim(e) == 0 and e == 0.0):
                out[..., i, j] = e
    return out


def build_drift(params: SystemParams, ss: SteadyState) -> np.ndarray:
    """Drift matrix of the quadrature fluctuations, shape ``batch + (6, 6)``."""
    p = params
    G = p.opa_gain
    sin_phi = pointwise(math.sin, p.opa_phase)
    cos_phi = pointwise(math.cos, p.opa_phase)
    delta = p.delta_c_eff + p.delta_f
    delta_plus = delta + 2.0 * G * sin_phi
    delta_minus = delta - 2.0 * G * sin_phi
    kappa_plus = p.kappa_c + 2.0 * G * cos_phi
    kappa_minus = p.kappa_c - 2.0 * G * cos_phi
    re, im = np.real(ss.g_cb), np.imag(ss.g_cb)
    J, da, ka = p.coupling_j, p.delta_a, p.kappa_a
    wb, kb = p.omega_b, p.kappa_b
    return _assemble(
        [
            [-kappa_minus, delta_plus, 0.0, J, -2.0 * re, 0.0],
            [-delta_minus, -kappa_plus, -J, 0.0, -2.0 * im, 0.0],
            [0.0, J, -ka, da, 0.0, 0.0],
            [-J, 0.0, -da, -ka, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, -kb, wb],
            [-2.0 * im, 2.0 * re, 0.0, 0.0, -wb, -kb],
        ]
    )


def build_diffusion(params: SystemParams, occ: ThermalOccupations) -> np.ndarray:
    p = params
    diag = [
        p.kappa_c * (2.0 * occ.n_c + 1.0),
        p.kappa_a * (2.0 * occ.n_a + 1.0),
        p.kappa_b * (2.0 * occ.n_b + 1.0),
    ]
    z = 0.0
    d_c, d_a, d_b = diag
    return _assemble(
        [
            [d_c, z, z, z, z, z],
            [z, d_c, z, z, z, z],
            [z, z, d_a, z, z, z],
            [z, z, z, d_a, z, z],
            [z, z, z, z, d_b, z],
            [z, z, z, z, z, d_b],
        ]
    )


@dataclass(frozen=True)
class StabilityReport:
    """Spectrum summary; fields are arrays when the drift is a stack."""

    eigenvalues: np.ndarray
    spectral_abscissa: float | np.ndarray
    stable: bool | np.ndarray


def _default_scale(a: np.ndarray):
    scale = np.max(np.abs(a), axis=(-2, -1))
    return np.where(scale > 0.0, scale, 1.0)


def stability(a: np.ndarray, scale=None) -> StabilityReport:
    """Routh-Hurwitz check through the full spectrum of the drift matrix.

    Stable when the largest real part is below ``-1e-9 * scale``; ``scale``
    should be ``omega_b`` (defaults to the largest entry magnitude of ``a``).
    """
    a = np.asarray(a, dtype=float)
    eigenvalues = eig_general(a)
    if scale is None:
        scale = _default_scale(a)
    abscissa = np.max(eigenvalues.real, axis=-1)
    stable = abscissa < -STABILITY_RTOL * np.asarray(scale)
    if abscissa.ndim == 0:
        return StabilityReport(eigenvalues, float(abscissa), bool(stable))
    return StabilityReport(eigenvalues, abscissa, stable)


def lyapunov_masked(a: np.ndarray, d: np.ndarray, scale=None) -> tuple[np.ndarray, np.ndarray]:
    """Batched Lyapunov solve without stability checks.

    Returns the symmetrized covariance stack and a mask that is False where
    the vectorized system was numerically singular (those entries are NaN).
    """
    a = np.asarray(a, dtype=float)
    d = np.asarray(d, dtype=float)
    if scale is None:
        scale = _default_scale(a)
    scale = np.asarray(scale, dtype=float)[..., None, None]
    an = a / scale
    n = an.shape[-1]
    eye = np.eye(n)
    system = kron(an, eye) + kron(eye, an)
    rhs = -(d / scale).reshape(d.shape[:-2] + (n * n,))
    lu, perm, ratio = lu_decompose(system)
    ok = ratio >= PIVOT_RTOL
    v = lu_substitute(lu, perm, rhs).reshape(a.shape)
    v = 0.5 * (v + np.swapaxes(v, -1, -2))
    v = np.where(ok[..., None, None], v, np.nan)
    return v, ok


def solve_lyapunov(a: np.ndarray, d: np.ndarray, scale=None, *, check: bool = True) -> np.ndarray:
    """Solve ``A V + V A^T = -D`` for the steady-state covariance.

    The equation is vectorized as ``(A (x) I + I (x) A) vec(V) = -vec(D)`` and
    solved by pivoted LU.  The result is symmetrized.  Stacks are accepted.

    Raises
    ------
    Unstable
        If ``check`` and ``a`` fails :func:`stability`.
    SingularSystem
        If the 36x36 system is numerically rank deficient.
    """
    a = np.asarray(a, dtype=float)
    if scale is None:
        scale = _default_scale(a)
    if check:
        report = stability(a, scale)
        if not np.all(report.stable):
            worst = float(np.max(report.spectral_abscissa))
            raise Unstable(f"spectral abscissa {worst:.6g} rad/s is not negative")
    v, ok = lyapunov_masked(a, d, scale)
    if not np.all(ok):
        raise SingularSystem("Lyapunov system is numerically singular")
    return v


def lyapunov_residual(a: np.ndarray, v: np.ndarray, d: np.ndarray) -> float:
    """``||A V + V A^T + D||_F / ||D||_F``."""
    return float(np.linalg.norm(a @ v + v @ a.T + d) / np.linalg.norm(d))


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic spectrum, each value listed once, ascending.

    ``Omega V`` is real and its eigenvalues come in pairs ``+-i nu``.
    """
    v = np.asarray(v, dtype=float)
    moduli = np.sort(np.abs(eig_general(apply_symplectic_form(v))), axis=-1)
    return moduli[..., ::2]


def physicality(v: np.ndarray) -> bool:
    """True when every symplectic eigenvalue respects the uncertainty bound."""
    return bool(np.min(symplectic_eigenvalues(v)) >= 0.5 - PHYSICALITY_TOL)
