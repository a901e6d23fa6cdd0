"""Circuit device model: plate separation -> Kerr coefficient -> displacement.

Two charge qubits are coupled through a parallel-plate capacitor whose gap
is d = r0 + r; the coupling shifts the two transition detunings of the
four-level ladder in opposite directions, which in turn sets the effective
self-Kerr coefficient of the probe tone:

    eta = (g1/Omega_c)^2 * ( g2^2 D / (gamma_43^2 + D^2)
                             - g1^2 d / ((gamma_21 + gamma_23)^2 + d^2) )

with D and d the two detunings.  eta is manifestly independent of the
cavity linewidth kappa; only the reported ratio eta/kappa changes with it.

The capacitance -> detuning map is a declared model of this module (the
underlying microscopic dependence is device specific): the dressed exchange
coupling J = C_c/(C_c + C_self) * omega_q / 2 shifts the detunings by
+/- (J - J_baseline), anchored so that the baseline gap r0 reproduces the
configured (delta0, Delta0) exactly.  It is pluggable: every curve routine
accepts any callable gap -> (delta, Delta).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .constants import ELEMENTARY_CHARGE, HBAR, VACUUM_PERMITTIVITY
from .errors import UnobservableDisplacementError
from .interferometer import (
    InterferometerConfig,
    precision_closed_form,
    resolve_operating_phase,
)

_TWO_PI = 2.0 * math.pi

#: threshold on g/Omega_c beyond which the perturbative eta formula is dubious
VALIDITY_RATIO = 0.2


class ValidityWarning(UserWarning):
    """The device parameters strain a stated validity condition."""


DetuningModel = Callable[[float], tuple[float, float]]


@dataclass(frozen=True)
class PlateGeometry:
    """Coupling-capacitor plates; the movable gap is d = r0 + r."""

    width: float = 200e-6
    length: float = 70e-6
    thickness: float = 0.16e-6
    r0: float = 1.01e-6
    model: str = "parallel_plate"

    def __post_init__(self):
        for name in ("width", "length", "thickness", "r0"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.model not in ("parallel_plate", "parallel_plate_with_fringe"):
            raise ValueError(f"unknown capacitance model {self.model!r}")

    @property
    def plate_area(self) -> float:
        return self.width * self.length


@dataclass(frozen=True)
class DeviceParams:
    """Circuit parameters.  All frequencies are angular (rad/s).

    E_p (the probe drive) is recorded for documentation; nothing here
    depends on it.
    """

    EJ: float = _TWO_PI * 15e9
    C_self: float = 100e-15
    g1: float = _TWO_PI * 100e6
    g2: float = _TWO_PI * 100e6
    Omega_c: float = _TWO_PI * 1500e6
    delta0: float = -_TWO_PI * 60e6
    Delta0: float = -_TWO_PI * 60e6
    gamma_21: float = _TWO_PI * 0.1e6
    gamma_23: float = _TWO_PI * 0.1e6
    gamma_43: float = _TWO_PI * 0.1e6
    kappa: float = _TWO_PI * 10e6
    E_p: float = _TWO_PI * 5e6

    def __post_init__(self):
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.Omega_c == 0:
            raise ValueError("Omega_c must be nonzero")
        if self.C_self <= 0:
            raise ValueError("C_self must be positive")
        ratio = max(abs(self.g1), abs(self.g2)) / abs(self.Omega_c)
        if ratio > VALIDITY_RATIO:
            warnings.warn(
                f"g/Omega_c = {ratio:.3f} exceeds {VALIDITY_RATIO}; the "
                "perturbative Kerr formula is outside its stated validity range",
                ValidityWarning,
                stacklevel=2,
            )

    @property
    def charging_energy(self) -> float:
        """E_C = e^2 / (2 C_self), as an angular frequency."""
        return ELEMENTARY_CHARGE ** 2 / (2.0 * self.C_self) / HBAR

    @property
    def qubit_frequency(self) -> float:
        """omega_q = sqrt(8 E_J E_C) - E_C (transmon approximation)."""
        ec = self.charging_energy
        return math.sqrt(8.0 * self.EJ * ec) - ec


@dataclass(frozen=True)
class KerrStrength:
    """Kerr coefficient and its ratio to the cavity linewidth."""

    eta: float
    eta_over_kappa: float


@dataclass(frozen=True)
class EtaCurve:
    """eta and its separation derivative over a displacement grid."""

    r_grid: np.ndarray
    eta: np.ndarray
    eta_over_kappa: np.ndarray
    d_eta_dr: np.ndarray

    def __post_init__(self):
        n = len(self.r_grid)
        if not (len(self.eta) == len(self.eta_over_kappa) == len(self.d_eta_dr) == n):
            raise ValueError("curve arrays must share one length")
        if np.any(np.diff(self.r_grid) <= 0):
            raise ValueError("r_grid must be strictly increasing")


@dataclass(frozen=True)
class DisplacementPrecision:
    """Chained displacement sensitivity at one operating point."""

    delta_rt_x: float       # m/Hz
    delta_rt_y: float       # m/Hz
    delta_r_x: float        # m, at the given probe time
    delta_r_y: float        # m
    eta: float              # rad/s
    eta_t: float            # rad
    d_eta_dr: float         # rad/(s m)
    phi_t: float = field(compare=False, default=float("nan"))


# ---------------------------------------------------------------------------
# capacitance and detunings
# ---------------------------------------------------------------------------

def coupling_capacitance(geom: PlateGeometry, gap: float) -> float:
    """Plate capacitance at the given gap, in farads.

    parallel_plate: eps0 * area / gap.  The fringe variant multiplies by the
    first-order edge correction 1 + gap/(pi t) * (1 + ln(2 pi t / gap)),
    t the plate thickness.  The correction is only meaningful for gaps up to
    a few plate thicknesses; beyond the gap where it reaches 1 it is clamped
    to the plain parallel-plate value, keeping C positive and strictly
    decreasing with the correct large-gap limit.
    """
    if gap <= 0:
        raise ValueError(f"gap must be positive, got {gap!r}")
    base = VACUUM_PERMITTIVITY * geom.plate_area / gap
    if geom.model == "parallel_plate":
        return base
    t = geom.thickness
    correction = 1.0 + gap / (math.pi * t) * (1.0 + math.log(2.0 * math.pi * t / gap))
    return base * max(correction, 1.0)


def qubit_coupling(c_coupling: float, dev: DeviceParams) -> float:
    """Dressed qubit-qubit exchange J = C_c/(C_c + C_self) * omega_q / 2."""
    if c_coupling < 0:
        raise ValueError("coupling capacitance must be non-negative")
    return c_coupling / (c_coupling + dev.C_self) * dev.qubit_frequency / 2.0


def detunings_from_capacitance(
    c_coupling: float,
    dev: DeviceParams,
    c_baseline: float,
) -> tuple[float, float]:
    """(delta, Delta) under the declared capacitive-shift model.

    The detunings move oppositely by x = J(C_c) - J(C_baseline):
    delta = delta0 - x, Delta = Delta0 + x.  At the baseline capacitance
    the configured (delta0, Delta0) are returned exactly.
    """
    shift = qubit_coupling(c_coupling, dev) - qubit_coupling(c_baseline, dev)
    return dev.delta0 - shift, dev.Delta0 + shift


def capacitive_detuning_model(geom: PlateGeometry, dev: DeviceParams) -> DetuningModel:
    """The default gap -> (delta, Delta) map, anchored at gap = r0."""
    c_baseline = coupling_capacitance(geom, geom.r0)

    def model(gap: float) -> tuple[float, float]:
        return detunings_from_capacitance(coupling_capacitance(geom, gap), dev, c_baseline)

    return model


def constant_detuning_model(delta: float, Delta: float) -> DetuningModel:
    """Stub map ignoring the gap; yields a flat eta curve."""

    def model(gap: float) -> tuple[float, float]:
        return delta, Delta

    return model


# ---------------------------------------------------------------------------
# Kerr coefficient
# ---------------------------------------------------------------------------

def kerr_eta(delta: float, Delta: float, dev: DeviceParams) -> KerrStrength:
    """Literal evaluation of the perturbative Kerr coefficient.

    Warns when g/Omega_c exceeds the validity threshold.  Note that with
    g1 = g2, Delta = delta and gamma_43 = gamma_21 + gamma_23 the two terms
    cancel identically; a nonzero eta requires some asymmetry between the
    two transitions (here supplied by the capacitive detuning shifts).
    """
    ratio = max(abs(dev.g1), abs(dev.g2)) / abs(dev.Omega_c)
    if ratio > VALIDITY_RATIO:
        warnings.warn(
            f"g/Omega_c = {ratio:.3f} exceeds {VALIDITY_RATIO}; the perturbative "
            "Kerr formula is outside its stated validity range",
            ValidityWarning,
            stacklevel=2,
        )
    eta = (dev.g1 / dev.Omega_c) ** 2 * (
        dev.g2 ** 2 * Delta / (dev.gamma_43 ** 2 + Delta ** 2)
        - dev.g1 ** 2 * delta / ((dev.gamma_21 + dev.gamma_23) ** 2 + delta ** 2)
    )
    return KerrStrength(eta, eta / dev.kappa)


def eta_at(
    geom: PlateGeometry,
    dev: DeviceParams,
    r: float,
    detuning_model: DetuningModel | None = None,
) -> KerrStrength:
    """Kerr strength at displacement r (gap r0 + r)."""
    gap = geom.r0 + r
    if gap <= 0:
        raise ValueError(f"displacement r = {r!r} closes the gap (r0 = {geom.r0!r})")
    model = detuning_model or capacitive_detuning_model(geom, dev)
    delta, Delta = model(gap)
    return kerr_eta(delta, Delta, dev)


def d_eta_dr(
    geom: PlateGeometry,
    dev: DeviceParams,
    r: float,
    detuning_model: DetuningModel | None = None,
) -> float:
    """Separation derivative of eta by Richardson-extrapolated differences.

    Step h = max(1e-9 m, 1e-4 * gap); the stencil switches to one-sided
    (forward) when a central stencil would close the gap.
    """
    model = detuning_model or capacitive_detuning_model(geom, dev)
    gap = geom.r0 + r
    if gap <= 0:
        raise ValueError(f"displacement r = {r!r} closes the gap")
    h = max(1e-9, 1e-4 * gap)

    def f(rr: float) -> float:
        return kerr_eta(*model(geom.r0 + rr), dev).eta

    one_sided = gap - h <= 0
    if one_sided:
        d1 = (-3.0 * f(r) + 4.0 * f(r + h) - f(r + 2.0 * h)) / (2.0 * h)
        d2 = (-3.0 * f(r) + 4.0 * f(r + h / 2) - f(r + h)) / h
    else:
        d1 = (f(r + h) - f(r - h)) / (2.0 * h)
        d2 = (f(r + h / 2) - f(r - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def eta_curve(
    geom: PlateGeometry,
    dev: DeviceParams,
    r_grid: np.ndarray,
    detuning_model: DetuningModel | None = None,
) -> EtaCurve:
    """eta, eta/kappa and d eta/dr over a strictly increasing r grid."""
    r_grid = np.asarray(r_grid, dtype=float)
    model = detuning_model or capacitive_detuning_model(geom, dev)
    with warnings.catch_warnings():
        warnings.simplefilter("once", ValidityWarning)
        etas = np.array([eta_at(geom, dev, r, model).eta for r in r_grid])
        ratios = etas / dev.kappa
        derivs = np.array([d_eta_dr(geom, dev, r, model) for r in r_grid])
    return EtaCurve(r_grid, etas, ratios, derivs)


# ---------------------------------------------------------------------------
# displacement precision
# ---------------------------------------------------------------------------

def displacement_precision(
    n_bar: float,
    geom: PlateGeometry,
    dev: DeviceParams,
    r: float,
    t: float,
    phi_t: float | None = None,
    output_port: str = "a",
    quadrature: str = "X",
    detuning_model: DetuningModel | None = None,
) -> DisplacementPrecision:
    """delta(rt) = delta(eta t) / |d eta / dr| at one operating point.

    The Kerr-phase precision is the rederived closed form at eta(r) * t,
    with phi_t resolved to the scanned optimum when not pinned.  delta r at
    the fixed probe time t is also returned.
    """
    if t <= 0:
        raise ValueError("probe time must be positive")
    strength = eta_at(geom, dev, r, detuning_model)
    slope = d_eta_dr(geom, dev, r, detuning_model)
    if abs(slope) < 1e-300:
        raise UnobservableDisplacementError(
            f"d eta/dr vanishes at r = {r!r}; displacement is unobservable there"
        )
    config = InterferometerConfig(
        alpha=math.sqrt(n_bar),
        phi_t=phi_t,
        eta_t=strength.eta * t,
        output_port=output_port,
        quadrature=quadrature,
    )
    config = resolve_operating_phase(config)
    res = precision_closed_form(config, variant="rederived")
    return DisplacementPrecision(
        delta_rt_x=res.delta_eta_t_x / abs(slope),
        delta_rt_y=res.delta_eta_t_y / abs(slope),
        delta_r_x=res.delta_eta_t_x / abs(slope) / t,
        delta_r_y=res.delta_eta_t_y / abs(slope) / t,
        eta=strength.eta,
        eta_t=strength.eta * t,
        d_eta_dr=slope,
        phi_t=config.phi_t,
    )
