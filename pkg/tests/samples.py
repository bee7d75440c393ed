"""Random parameter draws around the reference operating point."""

from __future__ import annotations

import math

import numpy as np

from spinning_eoms.dynamics import build_drift, stability
from spinning_eoms.params import TWO_PI, SystemParams, base_params
from spinning_eoms.steady_state import solve_steady_state


def random_params(rng: np.random.Generator) -> SystemParams:
    wb = base_params().omega_b
    return base_params(
        delta_c_eff=rng.uniform(0.3, 1.5) * wb,
        delta_a=rng.uniform(-2.0, 0.5) * wb,
        delta_f=rng.uniform(-0.2, 0.2) * wb,
        opa_gain=rng.uniform(0.0, 0.1) * wb,
        opa_phase=rng.uniform(0.0, 2 * math.pi),
        coupling_g=TWO_PI * rng.uniform(1e5, 6e5),
        kappa_c=TWO_PI * rng.uniform(2e7, 2e8),
        temperature=float(10 ** rng.uniform(-3, 2.5)),
    )


def random_stable_params(rng: np.random.Generator, count: int) -> list[SystemParams]:
    out = []
    while len(out) < count:
        p = random_params(rng)
        try:
            a = build_drift(p, solve_steady_state(p))
        except Exception:
            continue
        if stability(a, p.omega_b).stable:
            out.append(p)
    return out


def moderately_damped(rng: np.random.Generator) -> SystemParams:
    """Stable point with decay rates comparable to omega_b (cheap to integrate)."""
    while True:
        p = random_params(rng)
        wb = p.omega_b
        p = p.replace(
            kappa_b=rng.uniform(0.02, 0.1) * wb,
            kappa_c=rng.uniform(0.2, 0.5) * wb,
            kappa_a=rng.uniform(0.2, 0.5) * wb,
            coupling_g=rng.uniform(1e6, 4e6) * TWO_PI,
        )
        a = build_drift(p, solve_steady_state(p))
        if stability(a, wb).stable:
            return p
