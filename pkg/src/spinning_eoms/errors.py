"""Exception hierarchy shared across the package."""


class EomsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameters(EomsError, ValueError):
    """A parameter set or configuration file failed validation."""


class ParametricSingularity(EomsError):
    """The mean-field solution diverges (|Lambda|^2 == 4 G^2)."""


class NoConvergence(EomsError):
    """The self-consistent detuning iteration did not converge."""


class EigenFailure(EomsError):
    """The eigenvalue solver failed to converge."""


class SingularSystem(EomsError):
    """A linear solve met a (numerically) zero pivot."""


class Unstable(EomsError):
    """The drift matrix has an eigenvalue with non-negative real part."""


class MonogamyViolation(EomsError):
    """A residual contangle came out clearly negative."""


class UnknownPreset(EomsError, KeyError):
    """No figure preset with the requested name."""
