"""Command-line front end.

Subcommands map one-to-one onto the operation families: ``precision``,
``eta-curve``, ``displacement-curve``, ``photon-sweep``, ``gravimeter``,
``zpm``, ``validate`` and ``plot``.  Exit codes: 0 success, 1 usage or
configuration error, 2 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import device as dvc
from . import metrology
from .config import FullConfig, default_config, parse_config
from .constants import GOLD_DENSITY
from .errors import ConfigError, KerrsenseError
from .interferometer import (
    InterferometerConfig,
    precision_closed_form,
    precision_numeric,
    resolve_operating_phase,
)
from .sweep import SweepSpec, run_sweep, write_csv
from .validation import (
    PUBLISHED_MIN_FORCE,
    loaded_cantilever,
    render_report,
    run_validation,
)

USAGE_ERROR, VALIDATION_ERROR = 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _load_config(path: str | None) -> FullConfig:
    if path is None:
        return default_config()
    return parse_config(path)


def _interferometer_config(cfg: FullConfig, args) -> InterferometerConfig:
    itf = cfg.interferometer
    n_bar = args.n_bar if getattr(args, "n_bar", None) is not None else itf.n_bar
    eta_t = args.eta_t if getattr(args, "eta_t", None) is not None else itf.eta_t
    phi_t = itf.phi_t
    if getattr(args, "phi_t", None) is not None:
        phi_t = None if args.phi_t == "optimal" else float(args.phi_t)
    return InterferometerConfig(
        alpha=math.sqrt(n_bar),
        theta_t=itf.theta_t,
        phi_t=phi_t,
        eta_t=eta_t,
        output_port=itf.output_port,
        quadrature=itf.quadrature,
    )


def _sweep_spec(cfg: FullConfig, args, variable: str | None = None) -> SweepSpec:
    sw = cfg.sweep
    return SweepSpec(
        variable=variable or sw.variable,
        start=args.start if args.start is not None else sw.start,
        stop=args.stop if args.stop is not None else sw.stop,
        points=args.points if args.points is not None else sw.points,
        scale=args.scale if args.scale is not None else sw.scale,
        fixed=cfg,
    )


def _maybe_plot(rows, spec, args, default_columns):
    if getattr(args, "plot", None):
        from .plotting import render_plot

        render_plot(rows, spec, default_columns, args.plot,
                    logx=spec.scale == "log", logy=True)
        print(f"plot written to {args.plot}")


def _cmd_precision(args) -> int:
    cfg = _load_config(args.config)
    config = resolve_operating_phase(_interferometer_config(cfg, args))
    closed = precision_closed_form(config, variant="rederived")
    numeric = precision_numeric(config, method="analytic")
    published = precision_closed_form(config, variant="published")
    print(f"n_bar            = {config.n_bar:.6g}")
    print(f"eta_t            = {config.eta_t:.6g} rad")
    print(f"phi_t (operating)= {config.phi_t:.9f} rad")
    print(f"delta(eta t) X   = {closed.delta_eta_t_x:.6e}   "
          f"[finite-difference check {numeric.delta_eta_t_x:.6e}]")
    print(f"delta(eta t) Y   = {closed.delta_eta_t_y:.6e}   "
          f"[finite-difference check {numeric.delta_eta_t_y:.6e}]")
    print(f"published form   = {published.delta_eta_t_x:.6e} (X) "
          f"{published.delta_eta_t_y:.6e} (Y)  [comparison only]")
    return 0


def _cmd_eta_curve(args) -> int:
    cfg = _load_config(args.config)
    spec = _sweep_spec(cfg, args, variable="r")
    rows = run_sweep(spec, jobs=args.jobs)
    write_csv(spec, rows, args.out)
    print(f"{len(rows)} rows written to {args.out}")
    _maybe_plot(rows, spec, args, ["eta_over_kappa_dimensionless"])
    return 0


def _cmd_displacement_curve(args) -> int:
    cfg = _load_config(args.config)
    spec = _sweep_spec(cfg, args, variable="r")
    rows = run_sweep(spec, jobs=args.jobs)
    write_csv(spec, rows, args.out)
    print(f"{len(rows)} rows written to {args.out}")
    _maybe_plot(rows, spec, args, ["delta_rt_x_m_per_hz", "delta_rt_y_m_per_hz"])
    return 0


def _cmd_photon_sweep(args) -> int:
    cfg = _load_config(args.config)
    spec = _sweep_spec(cfg, args, variable="n_bar")
    if args.start is None and cfg.sweep.variable != "n_bar":
        spec = replace(spec, start=1e2, stop=1e6, points=25, scale="log")
    rows = run_sweep(spec, jobs=args.jobs)
    write_csv(spec, rows, args.out)
    print(f"{len(rows)} rows written to {args.out}")
    _maybe_plot(rows, spec, args, ["delta_rt_x_m_per_hz", "delta_rt_y_m_per_hz"])
    return 0


def _cmd_gravimeter(args) -> int:
    cfg = _load_config(args.config)
    cant = loaded_cantilever()
    if args.delta_rt is not None:
        delta_rt = args.delta_rt
        source = "command line"
    else:
        dp = dvc.displacement_precision(
            1e7, cfg.geometry, cfg.device, cfg.sweep.r_fixed,
            cfg.interferometer.probe_time,
        )
        delta_rt = min(dp.delta_rt_x, dp.delta_rt_y)
        source = (f"device model at r = {cfg.sweep.r_fixed * 1e6:+.3f} um, "
                  f"n_bar = 1e7, t = {cfg.interferometer.probe_time:.1e} s")
    sens = metrology.force_sensitivity(cant, delta_rt)
    m_eff = metrology.effective_mass(cant)
    print("gravimeter figures (default cantilever + 50 um gold cube)")
    print(f"  spring constant        = {sens.spring_constant:.4f} N/m")
    print(f"  beam mass              = {metrology.beam_mass(cant):.4e} kg")
    print(f"  proof mass (gold cube) = {metrology.added_mass_cube(50e-6, GOLD_DENSITY):.4e} kg")
    print(f"  effective mass         = {m_eff:.4e} kg")
    print(f"  resonance Omega        = {metrology.resonant_frequency(cant):.4e} rad/s")
    print(f"  delta(rt) used         = {delta_rt:.4e} m/Hz   [{source}]")
    print(f"  min detectable force   = {sens.min_force:.4e} N/Hz")
    print(f"  gravity resolution     = {sens.gravity_resolution:.4e} g")
    print(f"  source mass at 1 m     = {sens.reference_mass_at_1m:.4e} kg")
    print(f"  published force figure = {PUBLISHED_MIN_FORCE:.1e} N/Hz "
          f"(resolution {metrology.gravity_resolution(PUBLISHED_MIN_FORCE, m_eff):.2e} g) "
          f"[comparison only]")
    return 0


def _cmd_zpm(args) -> int:
    cant = loaded_cantilever()
    m_eff = metrology.effective_mass(cant)
    omega = metrology.resonant_frequency(cant)
    print("zero-point motion floors")
    print(f"  loaded cantilever: m_eff = {m_eff:.4e} kg, Omega = {omega:.4e} rad/s, "
          f"x_zpm = {metrology.zero_point_motion(m_eff, omega):.4e} m")
    print(f"  10.7 kg mirror at 1 Hz: "
          f"x_zpm = {metrology.zero_point_motion(10.7, 2 * math.pi):.4e} m")
    return 0


def _cmd_validate(args) -> int:
    results = run_validation(fast=args.fast)
    report = render_report(results)
    if args.report:
        Path(args.report).write_text(report)
        print(f"report written to {args.report}")
    else:
        print(report)
    ok = all(r.passed for r in results if r.kind == "must")
    return 0 if ok else VALIDATION_ERROR


def _cmd_plot(args) -> int:
    from .plotting import _ROW_FIELDS, render_plot
    from .sweep import SweepRow

    with open(args.csv, newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        records = list(reader)
    if not records:
        print("error: CSV contains no data rows", file=sys.stderr)
        return USAGE_ERROR
    variable_col = columns[0]
    y_cols = [c.strip() for c in args.y.split(",")]
    rows = []
    for rec in records:
        kwargs = {"value": float(rec[variable_col]), "status": rec.get("status_flag", "ok")}
        for col, attr in _ROW_FIELDS.items():
            kwargs[attr] = float(rec[col]) if col in rec else float("nan")
        rows.append(SweepRow(**kwargs))

    variable = {"r_m": "r", "n_bar_dimensionless": "n_bar", "eta_t_rad": "eta_t",
                "phi_t_rad": "phi_t"}.get(variable_col, "r")
    spec = SweepSpec(variable=variable, start=rows[0].value,
                     stop=rows[-1].value if rows[-1].value > rows[0].value
                     else rows[0].value + 1.0,
                     points=max(len(rows), 2), scale="linear", fixed=default_config())
    render_plot(rows, spec, y_cols, args.out, logx=args.logx, logy=args.logy)
    print(f"plot written to {args.out}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="kerrsense",
                     description="nonlinear microwave interferometer simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sweep=False):
        p.add_argument("--config", help="configuration file (defaults used if omitted)")
        if sweep:
            p.add_argument("--out", required=True, help="output CSV path")
            p.add_argument("--plot", help="optional SVG output path")
            p.add_argument("--start", type=float)
            p.add_argument("--stop", type=float)
            p.add_argument("--points", type=int)
            p.add_argument("--scale", choices=["linear", "log"])
            p.add_argument("--jobs", type=int, default=None,
                           help="worker count (default: all cores)")

    p = sub.add_parser("precision", help="Kerr-phase precision at one operating point")
    common(p)
    p.add_argument("--n-bar", type=float, dest="n_bar")
    p.add_argument("--eta-t", type=float, dest="eta_t")
    p.add_argument("--phi-t", dest="phi_t", help="radians, or 'optimal'")
    p.set_defaults(func=_cmd_precision)

    p = sub.add_parser("eta-curve", help="Kerr coefficient vs plate displacement")
    common(p, sweep=True)
    p.set_defaults(func=_cmd_eta_curve)

    p = sub.add_parser("displacement-curve", help="delta(rt) vs plate displacement")
    common(p, sweep=True)
    p.set_defaults(func=_cmd_displacement_curve)

    p = sub.add_parser("photon-sweep", help="delta(rt) vs input photon number")
    common(p, sweep=True)
    p.set_defaults(func=_cmd_photon_sweep)

    p = sub.add_parser("gravimeter", help="force and gravity sensitivity table")
    common(p)
    p.add_argument("--delta-rt", type=float, dest="delta_rt",
                   help="override the displacement precision, m/Hz")
    p.set_defaults(func=_cmd_gravimeter)

    p = sub.add_parser("zpm", help="zero-point motion floors")
    common(p)
    p.set_defaults(func=_cmd_zpm)

    p = sub.add_parser("validate", help="run the cross-validation suite")
    p.add_argument("--report", help="write the report to this path")
    p.add_argument("--fast", action="store_true", help="reduced sample counts")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("plot", help="render an SVG from a sweep CSV")
    p.add_argument("--csv", required=True, help="CSV produced by a sweep command")
    p.add_argument("--y", required=True, help="comma-separated y columns")
    p.add_argument("--out", required=True)
    p.add_argument("--logx", action="store_true")
    p.add_argument("--logy", action="store_true")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (KerrsenseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
