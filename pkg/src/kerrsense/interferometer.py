"""Two-coupler interferometer with one Kerr arm, and its readout precision.

Pipeline: a coherent tone |alpha, 0> enters a 50/50 coupler, mode 'a'
accumulates the linear phase phi_t and the self-Kerr phase eta_t * n(n-1),
a second coupler recombines the arms, and a homodyne measurement of one
output port yields X or Y quadrature statistics.

The same output moments are computed two independent ways:

* ``output_state_oracle`` / ``oracle_moments``: exact evolution on the
  truncated Fock space (supported up to n_bar ~ 100);
* ``analytic_moments``: closed-form coherent-state moments of the
  Kerr-evolved arm, propagated linearly through the second coupler, valid
  at any photon number.

The closed forms used throughout (arm amplitude beta = alpha cos(theta_t),
arm photon number n_arm = |beta|^2):

    <a>   = beta exp(-i phi_t) exp(n_arm (e^{-2i eta_t} - 1))
    <a^2> = beta^2 exp(-2i phi_t) e^{-2i eta_t} exp(n_arm (e^{-4i eta_t} - 1))
    <n>   = n_arm

See docs/PHYSICS.md for the derivation and for the precision formulas in
trigonometric form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import fock
from .errors import (
    GridError,
    OracleCeilingError,
    TruncationError,
    UnobservablePhaseError,
)
from .numerics import fit_power_law, scanned_maximum

#: photon-number ceiling of the exact two-mode oracle
ORACLE_N_BAR_MAX = 100.0

#: waveguides go nonlinear above this input photon number; configs refuse it
N_BAR_MAX = 1.0e7

#: below this absolute derivative magnitude a phase is reported as unobservable
DERIVATIVE_FLOOR = 1e-30

#: a quadrature component this far below the full derivative magnitude is a
#: symmetry zero buried in rounding, not a real slope
DERIVATIVE_RELATIVE_FLOOR = 1e-12

#: grid for the operating-phase scan before golden-section refinement
_PHASE_SCAN_POINTS = 720


@dataclass(frozen=True)
class InterferometerConfig:
    """Operating point of the interferometer.

    alpha is the input coherent amplitude (n_bar = |alpha|^2); theta_t the
    coupler angle (pi/4 = 50/50); phi_t and eta_t the accumulated linear and
    Kerr phases in the nonlinear arm.  phi_t=None means "resolve to the
    operating phase that maximizes the readout sensitivity" wherever a
    precision is computed.
    """

    alpha: complex
    theta_t: float = math.pi / 4.0
    phi_t: float | None = 0.0
    eta_t: float = 0.0
    output_port: str = "a"
    quadrature: str = "X"

    def __post_init__(self):
        # tiny slack so sqrt(n)**2 rounding cannot reject the ceiling itself
        if self.n_bar > N_BAR_MAX * (1.0 + 1e-12):
            raise ValueError(
                f"n_bar = {self.n_bar:.4g} exceeds the supported maximum "
                f"{N_BAR_MAX:.0e}"
            )
        if self.output_port not in ("a", "b", "auto"):
            raise ValueError(f"output_port must be 'a', 'b' or 'auto', got {self.output_port!r}")
        if self.quadrature not in ("X", "Y"):
            raise ValueError(f"quadrature must be 'X' or 'Y', got {self.quadrature!r}")
        if not math.isfinite(self.theta_t):
            raise ValueError("theta_t must be finite")

    @property
    def n_bar(self) -> float:
        return abs(self.alpha) ** 2

    def with_phases(self, phi_t: float | None = None, eta_t: float | None = None) -> "InterferometerConfig":
        kwargs = {}
        if phi_t is not None:
            kwargs["phi_t"] = phi_t
        if eta_t is not None:
            kwargs["eta_t"] = eta_t
        return replace(self, **kwargs)


@dataclass(frozen=True)
class QuadratureMoments:
    """Homodyne means and variances at the selected output port."""

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    #: derivative of the selected quadrature mean w.r.t. eta_t
    d_mean_d_eta_t: float


@dataclass(frozen=True)
class PrecisionResult:
    """Per-quadrature precision of estimating the Kerr phase eta_t."""

    delta_eta_t_x: float
    delta_eta_t_y: float
    method: str
    phi_t: float = field(default=float("nan"), compare=False)

    def selected(self, quadrature: str) -> float:
        return self.delta_eta_t_x if quadrature == "X" else self.delta_eta_t_y


@dataclass(frozen=True)
class ScalingFit:
    """Power-law fit of precision against photon number."""

    slope: float
    prefactor: float
    n_bar: np.ndarray
    delta: np.ndarray


# ---------------------------------------------------------------------------
# closed-form moment engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _PortMoments:
    m1: complex          # <a_out>
    m2: complex          # <a_out^2>
    occupation: float    # <n_out>
    d_m1_d_eta_t: complex
    d_m1_d_phi_t: complex


def kerr_arm_mean(config: InterferometerConfig) -> complex:
    """<a> of the Kerr-evolved arm, before recombination.

    |<a>| / |beta| = exp(-2 n_arm sin^2(eta_t)): the coherence damping that
    sets the exponential prefactor of the precision formulas.
    """
    _require_phase(config)
    beta = config.alpha * math.cos(config.theta_t)
    n_arm = abs(beta) ** 2
    return beta * cmath.exp(-1j * config.phi_t) * cmath.exp(
        n_arm * (cmath.exp(-2j * config.eta_t) - 1.0)
    )


def _arm_moments(config: InterferometerConfig):
    """Moments of both arms just before the second coupler."""
    c = math.cos(config.theta_t)
    s = math.sin(config.theta_t)
    beta = config.alpha * c
    gamma = -1j * config.alpha * s
    n_arm = abs(beta) ** 2
    phase = cmath.exp(-1j * config.phi_t)
    a1 = beta * phase * cmath.exp(n_arm * (cmath.exp(-2j * config.eta_t) - 1.0))
    a2 = (
        beta ** 2
        * phase ** 2
        * cmath.exp(-2j * config.eta_t)
        * cmath.exp(n_arm * (cmath.exp(-4j * config.eta_t) - 1.0))
    )
    d_a1 = a1 * (-2j * n_arm * cmath.exp(-2j * config.eta_t))
    return c, s, a1, a2, n_arm, gamma, d_a1


def _port_moments(config: InterferometerConfig, port: str) -> _PortMoments:
    c, s, a1, a2, n_arm, gamma, d_a1 = _arm_moments(config)
    b1, b2, n_ref = gamma, gamma ** 2, abs(gamma) ** 2
    cross = -2j * c * s * a1 * b1
    if port == "a":
        m1 = c * a1 - 1j * s * b1
        m2 = c * c * a2 + cross - s * s * b2
        occ = c * c * n_arm + s * s * n_ref + 2 * c * s * (a1.conjugate() * b1).imag
        d_eta = c * d_a1
        d_phi = c * (-1j * a1)
    else:
        m1 = c * b1 - 1j * s * a1
        m2 = c * c * b2 + cross - s * s * a2
        occ = c * c * n_ref + s * s * n_arm + 2 * c * s * (b1.conjugate() * a1).imag
        d_eta = -1j * s * d_a1
        d_phi = -1j * s * (-1j * a1)
    return _PortMoments(m1, m2, occ, d_eta, d_phi)


def _quadratures(m1: complex, m2: complex, occ: float):
    mean_x, mean_y = m1.real, m1.imag
    var_x = (2.0 * m2.real + 2.0 * occ + 1.0) / 4.0 - mean_x ** 2
    var_y = (-2.0 * m2.real + 2.0 * occ + 1.0) / 4.0 - mean_y ** 2
    return mean_x, mean_y, max(var_x, 0.0), max(var_y, 0.0)


def _require_phase(config: InterferometerConfig) -> None:
    if config.phi_t is None:
        raise ValueError(
            "phi_t is unresolved; call resolve_operating_phase() or set a value"
        )


def _resolve_port(config: InterferometerConfig) -> str:
    """'auto' picks the port whose mean field signal is extremal."""
    if config.output_port != "auto":
        return config.output_port
    best, best_port = -1.0, "a"
    for port in ("a", "b"):
        signal = abs(_port_moments(config, port).m1)
        if signal > best + 1e-15:
            best, best_port = signal, port
    return best_port


def analytic_moments(config: InterferometerConfig) -> QuadratureMoments:
    """Closed-form quadrature moments at the selected output port.

    Valid at any photon number, including the regime far beyond the exact
    oracle.  The eta_t derivative of the selected mean is analytic, not a
    finite difference.
    """
    _require_phase(config)
    pm = _port_moments(config, _resolve_port(config))
    mean_x, mean_y, var_x, var_y = _quadratures(pm.m1, pm.m2, pm.occupation)
    d_mean = pm.d_m1_d_eta_t.real if config.quadrature == "X" else pm.d_m1_d_eta_t.imag
    return QuadratureMoments(mean_x, mean_y, var_x, var_y, d_mean)


# ---------------------------------------------------------------------------
# exact oracle
# ---------------------------------------------------------------------------

def output_state_oracle(config: InterferometerConfig) -> fock.TwoModeState:
    """Exact truncated-space output state U_BS U_eta U_BS |alpha, 0>."""
    _require_phase(config)
    n_bar = config.n_bar
    if n_bar > ORACLE_N_BAR_MAX:
        raise OracleCeilingError(
            f"n_bar = {n_bar:.4g} exceeds the exact-oracle ceiling "
            f"{ORACLE_N_BAR_MAX:.0f}; use the analytic moment engine instead"
        )
    cutoff = fock.recommended_cutoff(n_bar)
    try:
        input_state = fock.coherent_state(config.alpha, cutoff)
    except TruncationError:
        # near the ceiling the recommended rule can leave a hair more than
        # the tolerated leak; one widening step restores it
        cutoff += 8
        input_state = fock.coherent_state(config.alpha, cutoff)
    state = fock.two_mode_product(input_state, fock.vacuum(cutoff))
    state = fock.apply_beamsplitter(state, config.theta_t)
    state = fock.apply_kerr(state, "a", config.phi_t, config.eta_t)
    return fock.apply_beamsplitter(state, config.theta_t)


def oracle_moments(config: InterferometerConfig, derivative_h: float | None = None) -> QuadratureMoments:
    """Quadrature moments from the exact oracle.

    The eta_t derivative is a Richardson-extrapolated central difference of
    the oracle mean (four extra oracle evaluations); the default step
    shrinks with photon number since the mean oscillates on the 1/n_bar
    phase scale.
    """
    _require_phase(config)
    port = _resolve_port(config)
    m1, m2, occ = fock.mode_moments(output_state_oracle(config), port)
    mean_x, mean_y, var_x, var_y = _quadratures(m1, m2, occ)

    def mean_at(eta_t: float) -> float:
        state = output_state_oracle(config.with_phases(eta_t=eta_t))
        m1e, _, _ = fock.mode_moments(state, port)
        return m1e.real if config.quadrature == "X" else m1e.imag

    if derivative_h is None:
        derivative_h = 1e-4 / max(1.0, config.n_bar / 10.0)
    h = derivative_h
    d1 = (mean_at(config.eta_t + h) - mean_at(config.eta_t - h)) / (2.0 * h)
    d2 = (mean_at(config.eta_t + h / 2) - mean_at(config.eta_t - h / 2)) / h
    return QuadratureMoments(mean_x, mean_y, var_x, var_y, (4.0 * d2 - d1) / 3.0)


# ---------------------------------------------------------------------------
# precision of the Kerr-phase estimate
# ---------------------------------------------------------------------------

def _deltas_from(var_x: float, var_y: float, d_x: float, d_y: float):
    scale = math.hypot(d_x, d_y)
    floor = max(DERIVATIVE_FLOOR, DERIVATIVE_RELATIVE_FLOOR * scale)
    dx = math.sqrt(var_x) / abs(d_x) if abs(d_x) >= floor else math.inf
    dy = math.sqrt(var_y) / abs(d_y) if abs(d_y) >= floor else math.inf
    return dx, dy


def _check_observable(config: InterferometerConfig, dx: float, dy: float) -> None:
    selected = dx if config.quadrature == "X" else dy
    if not math.isfinite(selected):
        raise UnobservablePhaseError(
            f"d<{config.quadrature}>/d(eta t) vanishes at phi_t = {config.phi_t!r}; "
            "the Kerr phase is unobservable in this quadrature"
        )


def precision_numeric(
    config: InterferometerConfig,
    h: float | None = None,
    method: str = "analytic",
) -> PrecisionResult:
    """delta(eta t) = dX / |d<X>/d(eta t)| with a central-difference slope.

    The slope is a Richardson-extrapolated pair of central stencils, so the
    truncation error is O(h^4) even close to stationary phases.  method
    'analytic' differentiates the closed-form means; 'oracle' differentiates
    the exact Fock simulation (photon-number ceiling applies).
    """
    config = resolve_operating_phase(config)
    if h is None:
        h = 1e-6 * max(1.0, 1.0 / max(config.n_bar, 1e-12))
    if h <= 0:
        raise ValueError("finite-difference step must be positive")

    if method == "analytic":
        port = _resolve_port(config)

        def m1_at(eta_t: float) -> complex:
            return _port_moments(config.with_phases(eta_t=eta_t), port).m1

        pm = _port_moments(config, port)
        _, _, var_x, var_y = _quadratures(pm.m1, pm.m2, pm.occupation)
        d1 = (m1_at(config.eta_t + h) - m1_at(config.eta_t - h)) / (2.0 * h)
        d2 = (m1_at(config.eta_t + h / 2) - m1_at(config.eta_t - h / 2)) / h
        dm1 = (4.0 * d2 - d1) / 3.0
        d_x, d_y = dm1.real, dm1.imag
    elif method == "oracle":
        mom_x = oracle_moments(config)
        mom_y = oracle_moments(replace(config, quadrature="Y"))
        var_x, var_y = mom_x.var_x, mom_x.var_y
        d_x, d_y = mom_x.d_mean_d_eta_t, mom_y.d_mean_d_eta_t
    else:
        raise ValueError(f"method must be 'analytic' or 'oracle', got {method!r}")

    dx, dy = _deltas_from(var_x, var_y, d_x, d_y)
    _check_observable(config, dx, dy)
    return PrecisionResult(dx, dy, method, phi_t=config.phi_t)


def precision_closed_form(
    config: InterferometerConfig,
    variant: str = "rederived",
) -> PrecisionResult:
    """Closed-form delta(eta t) for both quadratures.

    variant 'rederived' uses the exact analytic derivative of the
    propagated output moments and is the package's ground truth.  variant
    'published' evaluates the literature expression literally, with its
    photon number read as the full input n_bar and the ambiguous symbol in
    its phi_2 phase read as the linear phase; it is retained for
    documentation and comparison only (see docs/PHYSICS.md) and requires a
    50/50 coupler.
    """
    config = resolve_operating_phase(config)
    if variant == "rederived":
        pm = _port_moments(config, _resolve_port(config))
        _, _, var_x, var_y = _quadratures(pm.m1, pm.m2, pm.occupation)
        dx, dy = _deltas_from(var_x, var_y, pm.d_m1_d_eta_t.real, pm.d_m1_d_eta_t.imag)
        method = "closed_form_rederived"
    elif variant == "published":
        if not math.isclose(config.theta_t, math.pi / 4.0, rel_tol=0, abs_tol=1e-12):
            raise ValueError("the published closed form is defined for theta_t = pi/4 only")
        dx, dy = _published_deltas(config.n_bar, config.phi_t, config.eta_t)
        method = "closed_form_published"
    else:
        raise ValueError(f"variant must be 'rederived' or 'published', got {variant!r}")
    _check_observable(config, dx, dy)
    return PrecisionResult(dx, dy, method, phi_t=config.phi_t)


def _published_deltas(n_bar: float, phi_t: float, eta_t: float):
    """Literal evaluation of the literature precision expressions.

    delta(eta t)(X) = e^{2 n sin^2(eta t)} sqrt(1 + n - 2 A cos^2(phi1) + B)
                      / (2 sqrt(2) n^{3/2} |sin(phi1 + 2 eta t)|)
    with A = e^{-4 n sin^2(eta t)} n, B = e^{n(cos(4 eta t) - 1)} n cos(phi2),
    phi1 = phi t + n sin(2 eta t), phi2 = 2(phi + eta) t + n sin(4 eta t),
    and the Y form with cos^2 -> sin^2, +B -> -B, sin -> cos.
    """
    n = n_bar
    with np.errstate(over="ignore", invalid="ignore"):
        a_coef = math.exp(max(-700.0, -4.0 * n * math.sin(eta_t) ** 2)) * n
        b_mag = math.exp(max(-700.0, n * (math.cos(4.0 * eta_t) - 1.0))) * n
        phi1 = phi_t + n * math.sin(2.0 * eta_t)
        phi2 = 2.0 * (phi_t + eta_t) + n * math.sin(4.0 * eta_t)
        b_coef = b_mag * math.cos(phi2)
        log_pref = 2.0 * n * math.sin(eta_t) ** 2
        pref = math.exp(log_pref) if log_pref < 700.0 else math.inf
        denom = 2.0 * math.sqrt(2.0) * n ** 1.5

        def one(num_sq: float, slope: float) -> float:
            if abs(slope) < DERIVATIVE_FLOOR or num_sq < 0:
                return math.inf
            return pref * math.sqrt(num_sq) / (denom * abs(slope))

        dx = one(1.0 + n - 2.0 * a_coef * math.cos(phi1) ** 2 + b_coef,
                 math.sin(phi1 + 2.0 * eta_t))
        dy = one(1.0 + n - 2.0 * a_coef * math.sin(phi1) ** 2 - b_coef,
                 math.cos(phi1 + 2.0 * eta_t))
    return dx, dy


# ---------------------------------------------------------------------------
# operating phase and scaling
# ---------------------------------------------------------------------------

def optimal_phi_t(config: InterferometerConfig, estimate: str = "eta_t") -> float:
    """Linear phase maximizing |d<mean>/d(estimated phase)| / dX.

    Deterministic: a 720-point scan over one full period followed by
    golden-section refinement of the best bracket.
    """
    port = config.output_port if config.output_port != "auto" else "a"
    quad = config.quadrature

    def sensitivity(phi: float) -> float:
        pm = _port_moments(replace(config, phi_t=phi, output_port=port), port)
        _, _, var_x, var_y = _quadratures(pm.m1, pm.m2, pm.occupation)
        d = pm.d_m1_d_eta_t if estimate == "eta_t" else pm.d_m1_d_phi_t
        slope = d.real if quad == "X" else d.imag
        var = var_x if quad == "X" else var_y
        if var <= 0:
            return 0.0
        return abs(slope) / math.sqrt(var)

    phi, _ = scanned_maximum(sensitivity, 0.0, 2.0 * math.pi, _PHASE_SCAN_POINTS)
    return phi


def resolve_operating_phase(
    config: InterferometerConfig, estimate: str = "eta_t"
) -> InterferometerConfig:
    """Fill in phi_t=None with the scanned optimum; no-op otherwise."""
    if config.phi_t is not None:
        return config
    return replace(config, phi_t=optimal_phi_t(config, estimate))


def precision_linear_phase(config: InterferometerConfig) -> PrecisionResult:
    """delta(phi t) for the linear-phase estimate (eta_t plays no role).

    The shot-noise control case: with eta_t = 0 this is an ordinary
    two-path interferometer.
    """
    config = resolve_operating_phase(config, estimate="phi_t")
    pm = _port_moments(config, _resolve_port(config))
    _, _, var_x, var_y = _quadratures(pm.m1, pm.m2, pm.occupation)
    dx, dy = _deltas_from(var_x, var_y, pm.d_m1_d_phi_t.real, pm.d_m1_d_phi_t.imag)
    _check_observable(config, dx, dy)
    return PrecisionResult(dx, dy, "closed_form_rederived", phi_t=config.phi_t)


def scaling_exponent(
    n_bar_grid: np.ndarray,
    config_template: InterferometerConfig,
    estimate: str = "eta_t",
    n_bar_eta_t: float = 1e-3,
) -> ScalingFit:
    """Fit delta against n_bar on log-log axes at the scanned optimum.

    For the Kerr estimate the accumulated phase is rescaled per grid point
    so that n_bar * eta_t stays at ``n_bar_eta_t`` (the small-time manifold);
    for the linear-phase estimate eta_t is held at zero.  The grid must span
    at least three decades.
    """
    n_bars = np.asarray(n_bar_grid, dtype=float)
    if np.any(n_bars <= 0):
        raise GridError("photon numbers must be positive")
    deltas = []
    for n_bar in n_bars:
        if estimate == "eta_t":
            cfg = replace(
                config_template,
                alpha=math.sqrt(n_bar),
                eta_t=n_bar_eta_t / n_bar,
                phi_t=None,
            )
            res = precision_closed_form(cfg, variant="rederived")
        elif estimate == "phi_t":
            cfg = replace(config_template, alpha=math.sqrt(n_bar), eta_t=0.0, phi_t=None)
            res = precision_linear_phase(cfg)
        else:
            raise ValueError(f"estimate must be 'eta_t' or 'phi_t', got {estimate!r}")
        deltas.append(res.selected(config_template.quadrature))
    deltas = np.asarray(deltas)
    slope, prefactor = fit_power_law(n_bars, deltas)
    return ScalingFit(slope, prefactor, n_bars, deltas)


def delta_eta_from_delta_eta_t(delta_eta_t: float, t: float) -> float:
    """Convert a precision on the product eta*t to a precision on eta at fixed t."""
    if t <= 0:
        raise ValueError("t must be positive")
    return delta_eta_t / t
