"""Deterministic parameter sweeps over the composed model, with CSV output.

Grid points are pure-function evaluations gathered by index, so the output
is identical whether computed serially or by a process pool, and two runs
of the same spec produce byte-identical CSV files.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import device as dvc
from .config import FullConfig
from .errors import GridError, KerrsenseError, UnobservablePhaseError
from .interferometer import (
    InterferometerConfig,
    analytic_moments,
    precision_closed_form,
    resolve_operating_phase,
)

_SWEEP_VARIABLES = ("r", "n_bar", "eta_t", "phi_t")

#: CSV numeric format: scientific, 12 significant digits, '.' separator
_NUM_FMT = "{:.11e}"

_COLUMN_UNITS = {
    "r": "r_m",
    "n_bar": "n_bar_dimensionless",
    "eta_t": "eta_t_rad",
    "phi_t": "phi_t_rad",
}


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable plus a full fixed-configuration snapshot."""

    variable: str
    start: float
    stop: float
    points: int
    scale: str
    fixed: FullConfig

    def __post_init__(self):
        if self.variable not in _SWEEP_VARIABLES:
            raise GridError(f"variable must be one of {_SWEEP_VARIABLES}, got {self.variable!r}")
        if self.points < 2:
            raise GridError(f"points must be >= 2, got {self.points}")
        if not self.start < self.stop:
            raise GridError(f"start must be < stop, got [{self.start}, {self.stop}]")
        if self.scale not in ("linear", "log"):
            raise GridError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise GridError("log scale requires start > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "linear":
            return np.linspace(self.start, self.stop, self.points)
        return np.geomspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    """One grid point of the composed model.

    Non-finite entries are legal only on rows whose status flags why.
    """

    value: float
    eta: float
    eta_over_kappa: float
    delta_eta_t_x: float
    delta_eta_t_y: float
    delta_rt_x: float
    delta_rt_y: float
    d_eta_dr: float
    d_mean_x_d_eta_t: float
    d_mean_y_d_eta_t: float
    phi_t: float
    status: str = "ok"


CSV_COLUMNS = (
    "eta_rad_per_s",
    "eta_over_kappa_dimensionless",
    "delta_eta_t_x_rad",
    "delta_eta_t_y_rad",
    "delta_rt_x_m_per_hz",
    "delta_rt_y_m_per_hz",
    "d_eta_dr_rad_per_s_per_m",
    "d_mean_x_d_eta_t_per_rad",
    "d_mean_y_d_eta_t_per_rad",
    "phi_t_rad",
    "status_flag",
)


def _nan_row(value: float, status: str) -> SweepRow:
    nan = float("nan")
    return SweepRow(value, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, status)


def evaluate_point(spec: SweepSpec, value: float) -> SweepRow:
    """Evaluate one grid point; failures become flagged rows, not exceptions."""
    fixed = spec.fixed
    itf = fixed.interferometer
    n_bar = itf.n_bar
    eta_t = None
    phi_t = itf.phi_t
    r = fixed.sweep.r_fixed

    if spec.variable == "r":
        r = value
    elif spec.variable == "n_bar":
        n_bar = value
    elif spec.variable == "eta_t":
        eta_t = value
    else:
        phi_t = value

    try:
        strength = dvc.eta_at(fixed.geometry, fixed.device, r)
        slope = dvc.d_eta_dr(fixed.geometry, fixed.device, r)
    except (ValueError, KerrsenseError) as exc:
        return _nan_row(value, f"flagged:{type(exc).__name__}")

    if eta_t is None:
        eta_t = strength.eta * itf.probe_time

    try:
        config = InterferometerConfig(
            alpha=math.sqrt(n_bar),
            theta_t=itf.theta_t,
            phi_t=phi_t,
            eta_t=eta_t,
            output_port=itf.output_port,
            quadrature=itf.quadrature,
        )
        config = resolve_operating_phase(config)
        moments = analytic_moments(config)
        moments_y = analytic_moments(replace(config, quadrature="Y"))
        precision = precision_closed_form(config, variant="rederived")
    except UnobservablePhaseError:
        return _nan_row(value, "flagged:unobservable_phase")
    except (ValueError, KerrsenseError) as exc:
        return _nan_row(value, f"flagged:{type(exc).__name__}")

    status = "ok" if slope != 0.0 else "flagged:unobservable_displacement"
    return SweepRow(
        value=value,
        eta=strength.eta,
        eta_over_kappa=strength.eta_over_kappa,
        delta_eta_t_x=precision.delta_eta_t_x,
        delta_eta_t_y=precision.delta_eta_t_y,
        delta_rt_x=precision.delta_eta_t_x / abs(slope) if slope else float("inf"),
        delta_rt_y=precision.delta_eta_t_y / abs(slope) if slope else float("inf"),
        d_eta_dr=slope,
        d_mean_x_d_eta_t=moments.d_mean_d_eta_t,
        d_mean_y_d_eta_t=moments_y.d_mean_d_eta_t,
        phi_t=config.phi_t,
        status=status,
    )


def _worker(args: tuple[SweepSpec, float]) -> SweepRow:
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, jobs: int | None = None) -> list[SweepRow]:
    """Evaluate the grid; rows come back in grid order regardless of jobs."""
    grid = spec.grid()
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(grid) < 4:
        return [evaluate_point(spec, float(v)) for v in grid]
    tasks = [(spec, float(v)) for v in grid]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_worker, tasks))


def _fmt(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return _NUM_FMT.format(x)


def csv_header(spec: SweepSpec) -> str:
    return ",".join((_COLUMN_UNITS[spec.variable],) + CSV_COLUMNS)


def rows_to_csv(spec: SweepSpec, rows: list[SweepRow]) -> str:
    """Render rows in the pinned byte-stable format (newline terminated)."""
    lines = [csv_header(spec)]
    for row in rows:
        lines.append(
            ",".join(
                [
                    _fmt(row.value),
                    _fmt(row.eta),
                    _fmt(row.eta_over_kappa),
                    _fmt(row.delta_eta_t_x),
                    _fmt(row.delta_eta_t_y),
                    _fmt(row.delta_rt_x),
                    _fmt(row.delta_rt_y),
                    _fmt(row.d_eta_dr),
                    _fmt(row.d_mean_x_d_eta_t),
                    _fmt(row.d_mean_y_d_eta_t),
                    _fmt(row.phi_t),
                    row.status,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(spec: SweepSpec, rows: list[SweepRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(rows_to_csv(spec, rows))
