"""Gaussian entanglement measures on the three-mode covariance matrix.

Modes are cavity (``c``), exciton (``a``) and phonon (``b``), occupying
quadrature rows (0, 1), (2, 3) and (4, 5) respectively.  Functions accept a
single 6x6 matrix or a stack ``(..., 6, 6)``; scalar results become arrays
of the stack shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .dynamics import apply_symplectic_form
from .errors import MonogamyViolation
from .linalg import eig_general, log_clamped

CLAMP_TOL = 1e-9
MONOGAMY_TOL = 1e-6
CONTRAST_ZERO = 1e-12


class Mode(enum.IntEnum):
    CAVITY = 0
    EXCITON = 1
    PHONON = 2

    @property
    def symbol(self) -> str:
        return "cab"[self]

    @classmethod
    def parse(cls, value: "ModeLike") -> "Mode":
        if isinstance(value, cls):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            aliases = {"c": 0, "cavity": 0, "a": 1, "exciton": 1, "b": 2, "phonon": 2}
            if key in aliases:
                return cls(aliases[key])
        elif isinstance(value, int):
            return cls(value)
        raise ValueError(f"unknown mode {value!r}")


ModeLike = Union[Mode, str, int]

CANONICAL_PAIRS = (
    (Mode.CAVITY, Mode.EXCITON),
    (Mode.CAVITY, Mode.PHONON),
    (Mode.EXCITON, Mode.PHONON),
)


def _pair(pair) -> tuple[Mode, Mode]:
    if isinstance(pair, str) and len(pair) == 2:
        pair = tuple(pair)
    first, second = (Mode.parse(m) for m in pair)
    if first == second:
        raise ValueError(f"a mode pair needs two distinct modes, got {pair!r}")
    return first, second


def _indices(mode: Mode) -> list[int]:
    return [2 * int(mode), 2 * int(mode) + 1]


def reduce_two_mode(v: np.ndarray, pair) -> np.ndarray:
    """4x4 covariance of two modes, ordered ``(X_1, Y_1, X_2, Y_2)``."""
    first, second = _pair(pair)
    idx = _indices(first) + _indices(second)
    v = np.asarray(v, dtype=float)
    return v[..., np.asarray(idx)[:, None], np.asarray(idx)[None, :]]


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _nu_minus(v_pt: np.ndarray):
    # |eig(i Omega V)| == |eig(Omega V)|; keeps the eigenproblem real
    return _scalar(np.min(np.abs(eig_general(apply_symplectic_form(v_pt))), axis=-1))


def _negativity_from_nu(nu):
    return log_clamped(nu)


def nu_minus_two_mode(v: np.ndarray, pair) -> float:
    """Smallest symplectic eigenvalue of the partially transposed pair.

    The transposition flips ``Y`` of the first-listed mode; the result does
    not depend on which of the two modes is chosen.
    """
    v4 = reduce_two_mode(v, pair)
    return _nu_minus(v4 * _PAIR_FLIP)


def log_negativity(v: np.ndarray, pair) -> float:
    """Logarithmic negativity ``max(0, -ln(2 nu_minus))`` between two modes."""
    return _negativity_from_nu(nu_minus_two_mode(v, pair))


def nu_minus_one_vs_two(v: np.ndarray, single: ModeLike) -> float:
    return _nu_minus(np.asarray(v, dtype=float) * _SINGLE_FLIP[Mode.parse(single)])


def log_negativity_one_vs_two(v: np.ndarray, single: ModeLike) -> float:
    """Negativity of the bipartition ``single | other two``."""
    return _negativity_from_nu(nu_minus_one_vs_two(v, single))


def _flip_outer(signs) -> np.ndarray:
    signs = np.asarray(signs, dtype=float)
    return np.outer(signs, signs)


# Partial transposition flips the momentum quadrature of one mode.
_PAIR_FLIP = _flip_outer([1.0, -1.0, 1.0, 1.0])
_SINGLE_FLIP = {
    mode: _flip_outer([-1.0 if i == 2 * int(mode) + 1 else 1.0 for i in range(6)])
    for mode in (Mode.CAVITY, Mode.EXCITON, Mode.PHONON)
}


def residual_contangles(v: np.ndarray) -> tuple:
    """Raw residual contangles ``E_{i|jk}^2 - E_{i|j}^2 - E_{i|k}^2``.

    Ordered (cavity, exciton, phonon); contangles are squared negativities.
    No clamping or monogamy check is applied here.
    """
    pair_e2 = {}
    for pair in CANONICAL_PAIRS:
        pair_e2[frozenset(pair)] = np.square(log_negativity(v, pair))
    out = []
    for mode in Mode:
        j, k = (m for m in Mode if m != mode)
        out.append(
            np.square(log_negativity_one_vs_two(v, mode))
            - pair_e2[frozenset((mode, j))]
            - pair_e2[frozenset((mode, k))]
        )
    return tuple(out)


def min_residual_contangle(v: np.ndarray) -> float:
    """Minimum residual contangle over the three single-mode bipartitions.

    Residuals in ``[-1e-9, 0)`` are rounding noise and clamp to zero.

    Raises
    ------
    MonogamyViolation
        If any residual is below ``-1e-6``.
    """
    residuals = residual_contangles(v)
    worst = np.minimum.reduce(residuals)
    if np.any(worst < -MONOGAMY_TOL):
        labels = ", ".join(f"{m.symbol}: {np.min(r):.3e}" for m, r in zip(Mode, residuals))
        raise MonogamyViolation(f"negative residual contangle ({labels})")
    return _scalar(np.where((worst < 0.0) & (worst >= -CLAMP_TOL), 0.0, worst))


def contrast_ratio(e_plus, e_minus):
    """Bidirectional contrast ``|e+ - e-| / (e+ + e-)``; 0 when both vanish.

    Broadcasts over arrays; NaN inputs give NaN.
    """
    e_plus = np.asarray(e_plus, dtype=float)
    e_minus = np.asarray(e_minus, dtype=float)
    if np.any(e_plus < 0.0) or np.any(e_minus < 0.0):
        raise ValueError("contrast inputs must be non-negative")
    both_zero = (e_plus < CONTRAST_ZERO) & (e_minus < CONTRAST_ZERO)
    total = np.where(both_zero, 1.0, e_plus + e_minus)
    return _scalar(np.where(both_zero, 0.0, np.abs(e_plus - e_minus) / total))


@dataclass(frozen=True)
class EntanglementReport:
    """All entanglement observables of one covariance matrix.

    ``r_tau_min`` is ``max(0, min(residuals))``: it reports tripartite
    entanglement as absent whenever a residual contangle is negative, as the
    squared negativity is not guaranteed monogamous on mixed states.  The raw
    residuals are kept in ``residuals``; ``monogamy_ok`` records whether all
    of them exceed ``-1e-9``.
    """

    e_ca: float
    e_cb: float
    e_ab: float
    e_c_ab: float
    e_a_cb: float
    e_b_ca: float
    r_tau_min: float
    residuals: tuple[float, float, float]
    nu_minus: dict[str, float] = field(default_factory=dict)

    @property
    def monogamy_ok(self):
        ok = np.minimum.reduce(self.residuals) >= -CLAMP_TOL
        return bool(ok) if np.ndim(ok) == 0 else ok

    def observables(self) -> dict[str, float]:
        out = {
            "e_ca": self.e_ca,
            "e_cb": self.e_cb,
            "e_ab": self.e_ab,
            "e_c_ab": self.e_c_ab,
            "e_a_cb": self.e_a_cb,
            "e_b_ca": self.e_b_ca,
            "r_tau_min": self.r_tau_min,
        }
        out.update({f"nu_minus_{k}": val for k, val in self.nu_minus.items()})
        return out


def entanglement_report(v: np.ndarray) -> EntanglementReport:
    nu = {}
    for first, second in CANONICAL_PAIRS:
        nu[first.symbol + second.symbol] = nu_minus_two_mode(v, (first, second))
    for mode in Mode:
        rest = "".join(m.symbol for m in Mode if m != mode)
        nu[f"{mode.symbol}_{rest}"] = nu_minus_one_vs_two(v, mode)
    e = {k: _negativity_from_nu(x) for k, x in nu.items()}
    sq = {k: np.square(x) for k, x in e.items()}
    residuals = tuple(
        _scalar(x)
        for x in (
            sq["c_ab"] - sq["ca"] - sq["cb"],
            sq["a_cb"] - sq["ca"] - sq["ab"],
            sq["b_ca"] - sq["cb"] - sq["ab"],
        )
    )
    return EntanglementReport(
        e_ca=e["ca"],
        e_cb=e["cb"],
        e_ab=e["ab"],
        e_c_ab=e["c_ab"],
        e_a_cb=e["a_cb"],
        e_b_ca=e["b_ca"],
        r_tau_min=_scalar(np.maximum(0.0, np.minimum.reduce(residuals))),
        residuals=residuals,
        nu_minus=nu,
    )
