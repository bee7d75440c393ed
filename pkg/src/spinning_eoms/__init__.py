"""Steady-state Gaussian entanglement in a spinning exciton-optomechanical
resonator with an intracavity parametric amplifier."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    BASE_CONFIG,
    RotationSpec,
    SystemParams,
    ThermalOccupations,
    base_params,
    load_params,
    occupations,
    params_from_config,
    params_to_config,
    sagnac_shift,
    thermal_occupation,
    validate,
)
from .steady_state import (  # noqa: E402
    SteadyState,
    lambda_coeff,
    self_consistent_steady_state,
    solve_steady_state,
)
from .dynamics import (  # noqa: E402
    StabilityReport,
    build_diffusion,
    build_drift,
    physicality,
    solve_lyapunov,
    stability,
    symplectic_eigenvalues,
)
from .entanglement import (  # noqa: E402
    EntanglementReport,
    Mode,
    contrast_ratio,
    entanglement_report,
    log_negativity,
    log_negativity_one_vs_two,
    min_residual_contangle,
    reduce_two_mode,
    residual_contangles,
)
from .pipeline import PointResult, covariance, evaluate  # noqa: E402
