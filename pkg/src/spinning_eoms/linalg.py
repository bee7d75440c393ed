"""Small dense real linear algebra: eigenvalues, LU solves, Kronecker, expm.

Every routine accepts stacks of matrices with shape ``(..., n, n)`` and
treats each matrix independently.  Results for a given matrix do not depend
on what else is in the stack: the LU kernel only uses elementwise array
operations, and transcendental functions go through :func:`pointwise`.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .errors import EigenFailure, SingularSystem

PIVOT_RTOL = 1e-14


def pointwise(fn: Callable[[float], float], x):
    """Apply a scalar ``math`` function elementwise; floats stay floats."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        return fn(float(arr))
    flat = np.fromiter((fn(v) for v in arr.ravel().tolist()), float, arr.size)
    return flat.reshape(arr.shape)


def _check_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")


def eig_general(m) -> np.ndarray:
    """Eigenvalues (with multiplicity) of real square matrices.

    LAPACK ``geev``: Hessenberg reduction followed by shifted QR.  Complex
    eigenvalues of real input come in exact conjugate pairs.
    """
    m = np.asarray(m, dtype=float)
    _check_square(m)
    try:
        return np.linalg.eigvals(m).astype(complex)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc


def lu_decompose(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched LU with partial pivoting, never raising.

    Returns
    -------
    lu : ndarray
        Packed factors: strict lower triangle holds L (unit diagonal), upper
        triangle holds U.
    perm : ndarray of int
        Row permutation, ``m[..., perm, :] == L @ U``.
    pivot_ratio : ndarray
        Smallest ``|U_kk|`` divided by the infinity norm of each matrix.
    """
    m = np.asarray(m, dtype=float)
    _check_square(m)
    batch_shape, n = m.shape[:-2], m.shape[-1]
    a = m.reshape(-1, n, n).copy()
    count = a.shape[0]
    rows = np.arange(count)
    perm = np.tile(np.arange(n), (count, 1))
    norm = np.abs(a).sum(axis=-1).max(axis=-1)

    for k in range(n):
        p = k + np.argmax(np.abs(a[:, k:, k]), axis=1)
        swap = p != k
        if swap.any():
            r, pk = rows[swap], p[swap]
            upper = a[r, k, :].copy()
            a[r, k, :] = a[r, pk, :]
            a[r, pk, :] = upper
            pu = perm[r, k].copy()
            perm[r, k] = perm[r, pk]
            perm[r, pk] = pu
        pivot = a[:, k, k]
        safe = np.where(pivot == 0.0, 1.0, pivot)
        a[:, k + 1 :, k] /= safe[:, None]
        a[:, k + 1 :, k + 1 :] -= a[:, k + 1 :, k, None] * a[:, k, None, k + 1 :]

    diag = np.abs(a[:, np.arange(n), np.arange(n)]).min(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(norm > 0.0, diag / np.where(norm > 0.0, norm, 1.0), 0.0)
    return (
        a.reshape(batch_shape + (n, n)),
        perm.reshape(batch_shape + (n,)),
        ratio.reshape(batch_shape),
    )


def lu_substitute(lu: np.ndarray, perm: np.ndarray, rhs) -> np.ndarray:
    """Solve with packed factors from :func:`lu_decompose` (vector rhs)."""
    n = lu.shape[-1]
    batch_shape = lu.shape[:-2]
    lu2 = lu.reshape(-1, n, n)
    perm2 = perm.reshape(-1, n)
    b = np.broadcast_to(np.asarray(rhs, dtype=float), batch_shape + (n,)).reshape(-1, n)
    y = np.take_along_axis(b, perm2, axis=1).copy()
    for j in range(n - 1):
        y[:, j + 1 :] -= lu2[:, j + 1 :, j] * y[:, j, None]
    for j in range(n - 1, -1, -1):
        diag = lu2[:, j, j]
        y[:, j] /= np.where(diag == 0.0, 1.0, diag)
        if j:
            y[:, :j] -= lu2[:, :j, j] * y[:, j, None]
    return y.reshape(batch_shape + (n,))


def lu_factor(m) -> tuple[np.ndarray, np.ndarray]:
    """LU factors of ``m``.

    Raises
    ------
    SingularSystem
        If any pivot is below ``1e-14 * ||m||_inf``.
    """
    lu, perm, ratio = lu_decompose(m)
    worst = float(np.min(ratio)) if np.size(ratio) else 1.0
    if worst < PIVOT_RTOL:
        raise SingularSystem(f"relative pivot {worst:.3e} below {PIVOT_RTOL:g}")
    return lu, perm


def lu_solve(m, rhs) -> np.ndarray:
    """Solve ``m @ x = rhs`` by pivoted LU."""
    m = np.asarray(m, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[-1] != m.shape[-1]:
        raise ValueError(f"rhs has length {rhs.shape[-1]}, expected {m.shape[-1]}")
    lu, perm = lu_factor(m)
    return lu_substitute(lu, perm, rhs)


def kron(a, b) -> np.ndarray:
    """Kronecker product, broadcasting over leading batch dimensions."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    return out.reshape(out.shape[:-4] + (a.shape[-2] * b.shape[-2], a.shape[-1] * b.shape[-1]))


def matrix_exponential(m, t: float = 1.0) -> np.ndarray:
    """``exp(m t)`` by scaling and squaring with a Pade core."""
    m = np.asarray(m, dtype=float)
    _check_square(m)
    if t == 0.0:
        return np.broadcast_to(np.eye(m.shape[-1]), m.shape).copy()
    return sla.expm(m * t)


def log_clamped(nu) -> np.ndarray | float:
    """``max(0, -ln(2 nu))`` elementwise; NaN stays NaN."""
    return pointwise(lambda x: x if x != x else max(0.0, -math.log(2.0 * x)), nu)
