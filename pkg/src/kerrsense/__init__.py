"""kerrsense: nonlinear microwave interferometer simulation and sensitivity.

Exact truncated-Fock-space evolution cross-validated against closed-form
coherent-state moments; a circuit device model mapping plate separation to
the Kerr coefficient; and the derived displacement, force and gravity
sensitivities.
"""

from .config import FullConfig, default_config, parse_config
from .device import (
    DeviceParams,
    DisplacementPrecision,
    EtaCurve,
    KerrStrength,
    PlateGeometry,
    coupling_capacitance,
    detunings_from_capacitance,
    displacement_precision,
    eta_curve,
    kerr_eta,
)
from .errors import (
    ConfigError,
    GridError,
    KerrsenseError,
    OracleCeilingError,
    TruncationError,
    UnitError,
    UnobservableDisplacementError,
    UnobservablePhaseError,
)
from .fock import (
    Operator,
    StateVector,
    TwoModeState,
    apply_beamsplitter,
    apply_kerr,
    coherent_state,
    expectation,
    recommended_cutoff,
)
from .interferometer import (
    InterferometerConfig,
    PrecisionResult,
    QuadratureMoments,
    ScalingFit,
    analytic_moments,
    oracle_moments,
    output_state_oracle,
    precision_closed_form,
    precision_numeric,
    scaling_exponent,
)
from .metrology import (
    Cantilever,
    ForceSensitivity,
    added_mass_cube,
    gravity_resolution,
    min_detectable_force,
    spring_constant,
    zero_point_motion,
)
from .sweep import SweepRow, SweepSpec, run_sweep, write_csv

__version__ = "0.1.0"

__all__ = [
    "Cantilever",
    "ConfigError",
    "DeviceParams",
    "DisplacementPrecision",
    "EtaCurve",
    "ForceSensitivity",
    "FullConfig",
    "GridError",
    "InterferometerConfig",
    "KerrStrength",
    "KerrsenseError",
    "Operator",
    "OracleCeilingError",
    "PlateGeometry",
    "PrecisionResult",
    "QuadratureMoments",
    "ScalingFit",
    "StateVector",
    "SweepRow",
    "SweepSpec",
    "TruncationError",
    "TwoModeState",
    "UnitError",
    "UnobservableDisplacementError",
    "UnobservablePhaseError",
    "added_mass_cube",
    "analytic_moments",
    "apply_beamsplitter",
    "apply_kerr",
    "coherent_state",
    "coupling_capacitance",
    "default_config",
    "detunings_from_capacitance",
    "displacement_precision",
    "eta_curve",
    "expectation",
    "gravity_resolution",
    "kerr_eta",
    "min_detectable_force",
    "oracle_moments",
    "output_state_oracle",
    "parse_config",
    "precision_closed_form",
    "precision_numeric",
    "recommended_cutoff",
    "run_sweep",
    "scaling_exponent",
    "spring_constant",
    "write_csv",
    "zero_point_motion",
]
