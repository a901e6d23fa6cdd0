"""Small numerical helpers: differentiation, 1-d maximization, power-law fits."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import GridError

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Plain second-order central difference."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_derivative(
    f: Callable[[float], float],
    x: float,
    h: float,
    one_sided: bool = False,
) -> float:
    """Derivative by Richardson extrapolation of two stencil widths.

    Central stencils give an O(h^4) estimate from the O(h^2) pair
    (4 D(h/2) - D(h)) / 3.  The one-sided variant uses the forward
    three-point rule, for points where x - h is outside the domain.
    """
    if h <= 0:
        raise ValueError("step must be positive")
    if one_sided:
        def fwd(step: float) -> float:
            return (-3.0 * f(x) + 4.0 * f(x + step) - f(x + 2.0 * step)) / (2.0 * step)

        d1, d2 = fwd(h), fwd(h / 2.0)
    else:
        d1 = central_difference(f, x, h)
        d2 = central_difference(f, x, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, float]:
    """Deterministic golden-section search for a maximum on [lo, hi].

    Returns (argmax, max).  Assumes f is unimodal on the bracket; callers
    locate the bracket with a coarse grid first.
    """
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def scanned_maximum(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: int,
    refine_tol: float = 1e-12,
) -> tuple[float, float]:
    """Coarse grid scan followed by golden-section refinement."""
    grid = np.linspace(lo, hi, points)
    vals = np.array([f(g) for g in grid])
    i = int(np.argmax(vals))
    a = grid[max(0, i - 1)]
    b = grid[min(points - 1, i + 1)]
    return golden_section_max(f, a, b, tol=refine_tol)


def fit_power_law(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares fit y = C * x**p on log-log axes; returns (p, C).

    Requires x to span at least three decades.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3:
        raise GridError("power-law fit needs at least 3 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise GridError("power-law fit needs strictly positive data")
    span = np.log10(x.max() / x.min())
    if span < 3.0 - 1e-9:
        raise GridError(f"grid spans {span:.2f} decades; at least 3 required")
    slope, intercept = np.polyfit(np.log10(x), np.log10(y), 1)
    return float(slope), float(10.0 ** intercept)
