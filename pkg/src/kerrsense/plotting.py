"""Vector-graphic rendering of sweep results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .sweep import CSV_COLUMNS, SweepRow, SweepSpec, _COLUMN_UNITS  # noqa: E402

_ROW_FIELDS = {
    "eta_rad_per_s": "eta",
    "eta_over_kappa_dimensionless": "eta_over_kappa",
    "delta_eta_t_x_rad": "delta_eta_t_x",
    "delta_eta_t_y_rad": "delta_eta_t_y",
    "delta_rt_x_m_per_hz": "delta_rt_x",
    "delta_rt_y_m_per_hz": "delta_rt_y",
    "d_eta_dr_rad_per_s_per_m": "d_eta_dr",
    "d_mean_x_d_eta_t_per_rad": "d_mean_x_d_eta_t",
    "d_mean_y_d_eta_t_per_rad": "d_mean_y_d_eta_t",
    "phi_t_rad": "phi_t",
}


def render_plot(
    rows: list[SweepRow],
    spec: SweepSpec,
    y_columns: list[str],
    path: str | Path,
    logx: bool = False,
    logy: bool = False,
) -> Path:
    """Write an SVG of the selected columns against the swept variable.

    Single-point inputs render as markers; axis limits leave a 5% margin
    around the data.
    """
    if not rows:
        raise ValueError("cannot plot an empty sweep")
    for col in y_columns:
        if col not in _ROW_FIELDS:
            raise ValueError(f"unknown column {col!r}; choose from {sorted(_ROW_FIELDS)}")

    x = [row.value for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    marker = "o" if len(rows) == 1 else None
    for col in y_columns:
        y = [getattr(row, _ROW_FIELDS[col]) for row in rows]
        ax.plot(x, y, marker=marker, label=col)
    ax.set_xlabel(_COLUMN_UNITS[spec.variable])
    ax.set_ylabel(", ".join(y_columns))
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.margins(0.05)
    ax.grid(True, alpha=0.3)
    if len(y_columns) > 1:
        ax.legend(fontsize=8)
    path = Path(path)
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


def plottable_columns() -> tuple[str, ...]:
    return CSV_COLUMNS[:-1]
