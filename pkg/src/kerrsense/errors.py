"""Exception types shared across the package."""


class KerrsenseError(Exception):
    """Base class for all package-specific errors."""


class TruncationError(KerrsenseError):
    """Fock-space cutoff too small for the requested tolerance.

    Carries the norm actually captured by the truncated expansion.
    """

    def __init__(self, message: str, achieved_norm: float):
        super().__init__(message)
        self.achieved_norm = achieved_norm


class DimensionMismatchError(KerrsenseError):
    """Operator and state dimensions are incompatible."""


class OracleCeilingError(KerrsenseError):
    """Exact two-mode simulation requested above the supported photon number.

    Use the analytic moment engine instead; it is valid at any photon number.
    """


class UnobservablePhaseError(KerrsenseError):
    """The selected quadrature mean is stationary in the estimated phase.

    The precision is undefined at such an operating point (the estimator
    derivative vanishes); shift the linear phase instead of dividing by zero.
    """


class UnobservableDisplacementError(KerrsenseError):
    """d(eta)/dr vanishes at the requested separation; displacement is invisible."""


class ConfigError(KerrsenseError):
    """Configuration file is missing, malformed, or contains unknown keys."""


class GridError(KerrsenseError):
    """A sweep or fit grid does not satisfy its preconditions."""


class UnitError(KerrsenseError):
    """Dimensional mismatch in a unit-checked formula."""
