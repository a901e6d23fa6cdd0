"""Cross-validation suite: oracle-equivalence and reference-value checks.

Each check is a plain function returning a CheckResult so the same code
backs both the ``validate`` CLI subcommand (text report, exit status) and
the acceptance tests.  Checks tagged 'must' gate the exit status; 'info'
entries document quantified discrepancies between this model and figures
quoted elsewhere, with the model's computed counterpart always included.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from . import device as dvc
from . import metrology
from .config import SweepSettings, default_config
from .constants import GOLD_DENSITY
from .errors import KerrsenseError, UnobservablePhaseError
from .interferometer import (
    InterferometerConfig,
    analytic_moments,
    output_state_oracle,
    precision_closed_form,
    precision_numeric,
    scaling_exponent,
    _port_moments,
    _quadratures,
    _resolve_port,
)
from .sweep import SweepSpec, rows_to_csv, run_sweep

_SEED = 20260809

#: displacement precision quoted alongside the published minimum-force figure
PUBLISHED_DELTA_RT = 1e-22
#: published minimum detectable force, N/Hz (not reproducible from k * delta_rt)
PUBLISHED_MIN_FORCE = 6.6e-17
#: published small-time precision prefactor (delta = C * n_bar^-1.5)
PUBLISHED_PREFACTOR = 2.0
#: published displacement-precision order of magnitude at n_bar = 1e7
DISPLACEMENT_BAND = (1e-22, 1e-20)


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    kind: str           # 'must' or 'info'
    passed: bool | None  # None for pure documentation entries
    detail: str
    runtime: float = 0.0

    @property
    def status(self) -> str:
        if self.passed is None:
            return "NOTE"
        return "PASS" if self.passed else "FAIL"


def _timed(func):
    def wrapper(*args, **kwargs) -> CheckResult:
        t0 = time.perf_counter()
        result = func(*args, **kwargs)
        return replace(result, runtime=time.perf_counter() - t0)

    return wrapper


# ---------------------------------------------------------------------------
# must checks
# ---------------------------------------------------------------------------

@_timed
def check_oracle_equivalence(samples: int = 200, tol: float = 1e-8,
                             time_limit: float = 60.0) -> CheckResult:
    """Closed-form moments against the exact Fock oracle, random configs."""
    from . import fock

    rng = np.random.default_rng(_SEED)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(samples):
        n_bar = rng.uniform(0.05, 9.0)
        cfg = InterferometerConfig(
            alpha=math.sqrt(n_bar) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi)),
            phi_t=rng.uniform(0.0, 2.0 * math.pi),
            eta_t=rng.uniform(0.0, 0.3),
        )
        state = output_state_oracle(cfg)
        for port in ("a", "b"):
            pm = _port_moments(cfg, port)
            ana = _quadratures(pm.m1, pm.m2, pm.occupation)
            orc = _quadratures(*fock.mode_moments(state, port))
            worst = max(worst, max(abs(a - o) for a, o in zip(ana, orc)))
    elapsed = time.perf_counter() - t0
    ok = worst < tol and elapsed < time_limit
    return CheckResult(
        "oracle_equivalence", "must", ok,
        f"max |analytic - oracle| = {worst:.3e} over {samples} random configs "
        f"(tol {tol:.0e}); runtime {elapsed:.1f} s (limit {time_limit:.0f} s)",
    )


@_timed
def check_closed_form_vs_numeric(samples: int = 1000, rtol: float = 1e-6,
                                 time_limit: float = 30.0) -> CheckResult:
    """Rederived closed form against central finite differences."""
    rng = np.random.default_rng(_SEED + 1)
    t0 = time.perf_counter()
    worst, used, skipped = 0.0, 0, 0
    while used + skipped < samples:
        n_bar = math.exp(rng.uniform(math.log(0.25), math.log(100.0)))
        cfg = InterferometerConfig(
            alpha=math.sqrt(n_bar),
            phi_t=rng.uniform(0.0, 2.0 * math.pi),
            eta_t=rng.uniform(0.0, 0.3),
        )
        pm = _port_moments(cfg, "a")
        d = pm.d_m1_d_eta_t
        # near-singular phases make the finite difference ill conditioned;
        # they are the unobservable-phase neighborhoods excluded by contract
        if abs(d) < 1e-30 or min(abs(d.real), abs(d.imag)) < 1e-5 * abs(d):
            skipped += 1
            continue
        closed = precision_closed_form(cfg, variant="rederived")
        numeric = precision_numeric(cfg, method="analytic")
        worst = max(
            worst,
            abs(closed.delta_eta_t_x - numeric.delta_eta_t_x) / numeric.delta_eta_t_x,
            abs(closed.delta_eta_t_y - numeric.delta_eta_t_y) / numeric.delta_eta_t_y,
        )
        used += 1
    elapsed = time.perf_counter() - t0
    ok = worst < rtol and elapsed < time_limit
    return CheckResult(
        "closed_form_vs_finite_difference", "must", ok,
        f"max relative deviation = {worst:.3e} over {used} configs "
        f"({skipped} near-singular excluded; rtol {rtol:.0e}); "
        f"runtime {elapsed:.1f} s (limit {time_limit:.0f} s)",
    )


def _kerr_scaling():
    grid = np.geomspace(1e2, 1e6, 9)
    return scaling_exponent(grid, InterferometerConfig(alpha=10.0), estimate="eta_t",
                            n_bar_eta_t=1e-3)


@_timed
def check_super_heisenberg_slope(tol: float = 0.02) -> CheckResult:
    fit = _kerr_scaling()
    ok = abs(fit.slope - (-1.5)) <= tol
    return CheckResult(
        "super_heisenberg_slope", "must", ok,
        f"fitted slope = {fit.slope:.5f} over n_bar in [1e2, 1e6] at "
        f"n_bar*eta_t = 1e-3, optimal phase (required -1.50 +/- {tol})",
    )


@_timed
def check_sql_slope(tol: float = 0.02) -> CheckResult:
    grid = np.geomspace(1e2, 1e6, 9)
    fit = scaling_exponent(grid, InterferometerConfig(alpha=10.0), estimate="phi_t")
    ok = abs(fit.slope - (-0.5)) <= tol
    return CheckResult(
        "shot_noise_slope", "must", ok,
        f"fitted slope = {fit.slope:.5f} for the linear-phase estimate at "
        f"eta_t = 0 (required -0.50 +/- {tol})",
    )


@_timed
def check_spring_constant() -> CheckResult:
    k = metrology.spring_constant(metrology.Cantilever())
    ok = 0.255 <= k <= 0.345
    return CheckResult(
        "spring_constant", "must", ok,
        f"default cantilever k = {k:.4f} N/m (required within [0.255, 0.345])",
    )


def loaded_cantilever() -> metrology.Cantilever:
    """Default beam with the 50 um gold proof mass attached."""
    return metrology.Cantilever(added_mass=metrology.added_mass_cube(50e-6, GOLD_DENSITY))


@_timed
def check_zero_point_motion() -> CheckResult:
    ligo = metrology.zero_point_motion(10.7, 2.0 * math.pi * 1.0)
    cant = loaded_cantilever()
    x_cant = metrology.zero_point_motion(
        metrology.effective_mass(cant), metrology.resonant_frequency(cant)
    )
    ok = 4e-19 <= ligo <= 2e-18 and 3e-16 <= x_cant <= 3e-15
    return CheckResult(
        "zero_point_motion", "must", ok,
        f"10.7 kg mirror at 1 Hz: x_zpm = {ligo:.3e} m (band [4e-19, 2e-18]); "
        f"loaded cantilever: x_zpm = {x_cant:.3e} m (band [3e-16, 3e-15])",
    )


@_timed
def check_kappa_invariance() -> CheckResult:
    cfg = default_config()
    grid = np.linspace(cfg.sweep.start, cfg.sweep.stop, 9)
    base = dvc.eta_curve(cfg.geometry, cfg.device, grid)
    scaled_dev = replace(cfg.device, kappa=cfg.device.kappa * 1e3)
    scaled = dvc.eta_curve(cfg.geometry, scaled_dev, grid)
    identical = base.eta.tobytes() == scaled.eta.tobytes()
    ratio_scaled = np.allclose(scaled.eta_over_kappa * 1e3, base.eta_over_kappa,
                               rtol=1e-12, atol=0.0)
    ok = identical and ratio_scaled
    return CheckResult(
        "kappa_invariance", "must", ok,
        f"eta bit-identical under kappa x1e3: {identical}; "
        f"eta/kappa rescaled by 1e-3: {ratio_scaled}",
    )


@_timed
def check_eq5_consistency(points: int = 50, rtol: float = 1e-4) -> CheckResult:
    """Chained delta(rt) against a finite difference through the full map."""
    cfg = default_config()
    geom, dev = cfg.geometry, cfg.device
    n_bar, t = 1e4, 1e-12
    worst = 0.0
    for r in np.linspace(-0.7e-6, -0.3e-6, points):
        dp = dvc.displacement_precision(n_bar, geom, dev, r, t)
        phi_t = dp.phi_t

        def mean_x(rr: float) -> float:
            eta = dvc.eta_at(geom, dev, rr).eta
            c = InterferometerConfig(alpha=math.sqrt(n_bar), phi_t=phi_t, eta_t=eta * t)
            return analytic_moments(c).mean_x

        gap = geom.r0 + r
        h = max(1e-9, 1e-4 * gap)
        d1 = (mean_x(r + h) - mean_x(r - h)) / (2.0 * h)
        d2 = (mean_x(r + h / 2) - mean_x(r - h / 2)) / h
        slope = (4.0 * d2 - d1) / 3.0

        eta = dvc.eta_at(geom, dev, r).eta
        c0 = InterferometerConfig(alpha=math.sqrt(n_bar), phi_t=phi_t, eta_t=eta * t)
        pm = _port_moments(c0, _resolve_port(c0))
        _, _, var_x, _ = _quadratures(pm.m1, pm.m2, pm.occupation)
        direct = math.sqrt(var_x) * t / abs(slope)
        worst = max(worst, abs(direct - dp.delta_rt_x) / dp.delta_rt_x)
    ok = worst < rtol
    return CheckResult(
        "displacement_chain_consistency", "must", ok,
        f"max relative gap between chained delta(rt) and the through-composition "
        f"finite difference = {worst:.3e} over {points} points (rtol {rtol:.0e})",
    )


def photon_sweep_spec(points: int = 7) -> SweepSpec:
    cfg = default_config()
    return SweepSpec(
        variable="n_bar", start=1e2, stop=1e6, points=points, scale="log",
        fixed=replace(cfg, sweep=SweepSettings(variable="n_bar", start=1e2,
                                               stop=1e6, points=points, scale="log")),
    )


@_timed
def check_determinism() -> CheckResult:
    spec = photon_sweep_spec()
    first = rows_to_csv(spec, run_sweep(spec, jobs=1))
    second = rows_to_csv(spec, run_sweep(spec, jobs=1))
    parallel = rows_to_csv(spec, run_sweep(spec, jobs=2))
    ok = first == second == parallel
    return CheckResult(
        "sweep_determinism", "must", ok,
        f"repeated serial runs byte-identical: {first == second}; "
        f"parallel (2 workers) equals serial: {first == parallel} "
        f"({len(first.splitlines()) - 1} rows)",
    )


# ---------------------------------------------------------------------------
# documented discrepancies (info entries with computed counterparts)
# ---------------------------------------------------------------------------

@_timed
def info_super_heisenberg_prefactor() -> CheckResult:
    fit = _kerr_scaling()
    lo, hi = 0.95 * PUBLISHED_PREFACTOR, 1.05 * PUBLISHED_PREFACTOR
    within = lo <= fit.prefactor <= hi
    return CheckResult(
        "super_heisenberg_prefactor", "info", None,
        f"achieved prefactor at the scanned optimum = {fit.prefactor:.4f} "
        f"(delta = C * n_bar^{fit.slope:.3f}); the published small-time claim is "
        f"C = {PUBLISHED_PREFACTOR:g} (within 5%: {within}).  The exact model pins "
        f"C = 1: at the optimum delta(eta t) -> (2 sqrt(2) n_arm^1.5)^-1 with "
        f"n_arm = n_bar/2 behind a 50/50 coupler, which equals n_bar^-1.5.  "
        f"C = 2 would require the Kerr generator eta/2 * n(n-1), i.e. a "
        f"half-strength phase convention.  See docs/PHYSICS.md.",
    )


@_timed
def info_displacement_band() -> CheckResult:
    cfg = default_config()
    sw = cfg.sweep
    n_bar, t = 1e7, cfg.interferometer.probe_time
    best, best_r, at_zero = math.inf, math.nan, math.nan
    for r in np.linspace(sw.start, sw.stop, sw.points):
        try:
            dp = dvc.displacement_precision(n_bar, cfg.geometry, cfg.device, float(r), t)
        except (KerrsenseError, ValueError):
            continue
        val = min(dp.delta_rt_x, dp.delta_rt_y)
        if val < best:
            best, best_r = val, float(r)
    try:
        at_zero = min(
            dvc.displacement_precision(n_bar, cfg.geometry, cfg.device, 0.0, t).delta_rt_x,
            dvc.displacement_precision(n_bar, cfg.geometry, cfg.device, 0.0, t).delta_rt_y,
        )
    except (KerrsenseError, ValueError):
        pass
    lo, hi = DISPLACEMENT_BAND
    within = lo <= best <= hi
    return CheckResult(
        "displacement_precision_band", "info", None,
        f"delta(rt) at n_bar = 1e7 on the default separation grid: optimum "
        f"{best:.3e} m/Hz at r = {best_r * 1e6:+.3f} um, {at_zero:.3e} m/Hz at "
        f"r = 0 (published order 1e-21, band [{lo:.0e}, {hi:.0e}]; optimum within "
        f"band: {within}).  The declared capacitive detuning map crosses two "
        f"zero-detuning resonances near r = -0.10 um and r = +0.11 um where "
        f"|d eta/dr| peaks, so this model resolves displacements far below the "
        f"published order there.",
    )


@_timed
def info_phi2_symbol() -> CheckResult:
    cfg = InterferometerConfig(alpha=2.0, phi_t=0.3, eta_t=0.05)
    red = precision_closed_form(cfg, variant="rederived")
    pub = precision_closed_form(cfg, variant="published")
    worst = 0.0
    for n_bar in (1.0, 4.0, 9.0):
        for eta_t in (0.01, 0.05, 0.1, 0.2):
            for phi_t in np.linspace(0.2, 5.8, 7):
                c = InterferometerConfig(alpha=math.sqrt(n_bar), phi_t=float(phi_t),
                                         eta_t=eta_t)
                try:
                    a = precision_closed_form(c, variant="rederived")
                    b = precision_closed_form(c, variant="published")
                except UnobservablePhaseError:
                    continue
                if math.isfinite(a.delta_eta_t_x) and math.isfinite(b.delta_eta_t_x):
                    worst = max(worst, abs(b.delta_eta_t_x - a.delta_eta_t_x) / a.delta_eta_t_x)
    return CheckResult(
        "phi2_symbol_ambiguity", "info", None,
        f"the published precision formula contains a phase phi_2 = 2(delta+eta)t "
        f"+ n sin(4 eta t) whose symbol 'delta' collides with the precision symbol; "
        f"read here as the linear phase phi.  Even so the published form evaluates "
        f"the arm photon number as the full input n_bar where the rederived form "
        f"uses n_bar/2 behind the 50/50 coupler: at n_bar=4, eta_t=0.05, phi_t=0.3 "
        f"the X precision is {red.delta_eta_t_x:.5f} (rederived, ground truth) vs "
        f"{pub.delta_eta_t_x:.5f} (published); max relative deviation over a "
        f"reference grid = {worst:.2e}.  The rederived variant is the default "
        f"everywhere.",
    )


@_timed
def info_symmetric_cancellation() -> CheckResult:
    cfg = default_config()
    dev = cfg.device
    sym = dvc.kerr_eta(dev.delta0, dev.Delta0, dev)
    split = dvc.eta_at(cfg.geometry, dev, -0.51e-6)
    return CheckResult(
        "kerr_symmetric_cancellation", "info", None,
        f"with the symmetric defaults (delta = Delta = -2pi*60 MHz, g1 = g2) the "
        f"two Kerr terms cancel except for the linewidth asymmetry: eta = "
        f"{sym.eta:.3e} rad/s at the baseline separation.  The published nonzero "
        f"curve therefore implies an asymmetry the parameters do not specify; "
        f"here the declared capacitive map supplies it, e.g. eta = {split.eta:.3e} "
        f"rad/s at gap 0.5 um (eta/kappa = {split.eta_over_kappa:.3e} at the "
        f"default kappa; the ratio reaches 1e3-1e4 for kappa/2pi in "
        f"[{split.eta / 1e4 / (2 * math.pi):.2f}, {split.eta / 1e3 / (2 * math.pi):.2f}] Hz).",
    )


@_timed
def info_min_force_figure() -> CheckResult:
    cant = loaded_cantilever()
    k = metrology.spring_constant(cant)
    sens = metrology.force_sensitivity(cant, PUBLISHED_DELTA_RT)
    published_resolution = metrology.gravity_resolution(
        PUBLISHED_MIN_FORCE, metrology.effective_mass(cant)
    )
    return CheckResult(
        "min_force_figure", "info", None,
        f"from k = {k:.3f} N/m and the quoted displacement precision "
        f"{PUBLISHED_DELTA_RT:.0e} m/Hz the stated formula gives delta F = k*delta(rt) "
        f"= {sens.min_force:.2e} N/Hz (gravity resolution {sens.gravity_resolution:.2e} g, "
        f"source mass at 1 m = {sens.reference_mass_at_1m:.2e} kg), whereas the "
        f"published figure is {PUBLISHED_MIN_FORCE:.1e} N/Hz (which would correspond "
        f"to {published_resolution:.2e} g).  No stated formula reproduces the "
        f"published number from the other published values; it is reported here "
        f"for comparison only.",
    )


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

_INFO_REQUIRED = ("phi2_symbol_ambiguity", "kerr_symmetric_cancellation", "min_force_figure")


def check_discrepancy_entries(results: list[CheckResult]) -> CheckResult:
    present = {r.check_id for r in results if r.kind == "info"}
    missing = [name for name in _INFO_REQUIRED if name not in present]
    return CheckResult(
        "discrepancy_ledger_present", "must", not missing,
        "required [info] entries present: " + (", ".join(_INFO_REQUIRED) if not missing
                                                else f"missing {missing}"),
    )


def run_validation(fast: bool = False) -> list[CheckResult]:
    """Run every check; 'fast' trims sample counts for interactive use."""
    results = [
        check_oracle_equivalence(samples=40 if fast else 200),
        check_closed_form_vs_numeric(samples=200 if fast else 1000),
        check_super_heisenberg_slope(),
        check_sql_slope(),
        check_spring_constant(),
        check_zero_point_motion(),
        check_kappa_invariance(),
        check_eq5_consistency(points=10 if fast else 50),
        check_determinism(),
        info_super_heisenberg_prefactor(),
        info_displacement_band(),
        info_phi2_symbol(),
        info_symmetric_cancellation(),
        info_min_force_figure(),
    ]
    results.append(check_discrepancy_entries(results))
    return results


def render_report(results: list[CheckResult]) -> str:
    lines = ["kerrsense validation report", "=" * 27, ""]
    must = [r for r in results if r.kind == "must"]
    for r in results:
        tag = f"[{r.kind}]"
        lines.append(f"{tag} {r.status} {r.check_id}: {r.detail}")
        lines.append("")
    passed = sum(1 for r in must if r.passed)
    lines.append(f"summary: {passed}/{len(must)} must checks passed; "
                 f"{len(results) - len(must)} info entries; "
                 f"total runtime {sum(r.runtime for r in results):.1f} s")
    lines.append("")
    return "\n".join(lines)


def validate(report_path=None, fast: bool = False) -> int:
    """Run the suite, optionally write the report; 0 on success, 2 otherwise."""
    results = run_validation(fast=fast)
    report = render_report(results)
    if report_path is not None:
        with open(report_path, "w") as fh:
            fh.write(report)
    ok = all(r.passed for r in results if r.kind == "must")
    return 0 if ok else 2
