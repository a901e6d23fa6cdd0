"""Mechanical sensing applications of the displacement readout.

Cantilever stiffness, minimum detectable force, gravity resolution and
zero-point-motion floors.  Every formula is assembled from dimension-checked
quantities (units.Quantity), so a mismatched expression fails when it is
built rather than returning a plausible-looking number.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import units as u
from .constants import GRAVITATIONAL_CONSTANT, HBAR, STANDARD_GRAVITY

#: standard end-loaded beam factor for the distributed mass contribution
BEAM_MASS_FACTOR = 0.24

#: a force-per-bandwidth figure is referred to this integration window
UNIT_BANDWIDTH = u.Quantity(1.0, u.HERTZ_ANGULAR)


@dataclass(frozen=True)
class Cantilever:
    """Rectangular end-loaded cantilever, optionally mass loaded at the tip."""

    length: float = 200e-6
    width: float = 70e-6
    thickness: float = 0.8e-6
    density: float = 3184.0
    youngs_modulus: float = 250e9
    added_mass: float = 0.0

    def __post_init__(self):
        for name in ("length", "width", "thickness", "density", "youngs_modulus"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.added_mass < 0:
            raise ValueError("added_mass must be non-negative")


@dataclass(frozen=True)
class ForceSensitivity:
    """Force and gravity sensitivity derived from a displacement precision."""

    spring_constant: float      # N/m
    min_force: float            # N/Hz
    gravity_resolution: float   # dimensionless, in units of g
    reference_mass_at_1m: float  # kg: mass at 1 m exerting min_force on the sensor

    def __post_init__(self):
        for name in ("spring_constant", "min_force", "gravity_resolution",
                     "reference_mass_at_1m"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def spring_constant(c: Cantilever) -> float:
    """k = E w t^3 / (4 l^3) for an end-loaded rectangular beam, N/m."""
    e = u.Quantity(c.youngs_modulus, u.PASCAL)
    w = u.Quantity(c.width, u.METER)
    t = u.Quantity(c.thickness, u.METER)
    l = u.Quantity(c.length, u.METER)
    return (e * w * t ** 3 / (4.0 * l ** 3)).in_units(u.NEWTON_PER_METER)


def beam_mass(c: Cantilever) -> float:
    """Distributed mass of the bare beam, kg."""
    rho = u.Quantity(c.density, u.KG_PER_M3)
    vol = (
        u.Quantity(c.length, u.METER)
        * u.Quantity(c.width, u.METER)
        * u.Quantity(c.thickness, u.METER)
    )
    return (rho * vol).in_units(u.KILOGRAM)


def effective_mass(c: Cantilever) -> float:
    """Tip-equivalent mass: added mass plus 0.24 of the beam mass."""
    return c.added_mass + BEAM_MASS_FACTOR * beam_mass(c)


def resonant_frequency(c: Cantilever) -> float:
    """Omega = sqrt(k / m_eff), rad/s."""
    k = u.Quantity(spring_constant(c), u.NEWTON_PER_METER)
    m = u.Quantity(effective_mass(c), u.KILOGRAM)
    return (k / m).sqrt().in_units(u.HERTZ_ANGULAR)


def added_mass_cube(side: float, density: float) -> float:
    """Mass of a cubic proof mass, kg."""
    if side < 0 or density < 0:
        raise ValueError("side and density must be non-negative")
    rho = u.Quantity(density, u.KG_PER_M3)
    s = u.Quantity(side, u.METER)
    return (rho * s ** 3).in_units(u.KILOGRAM)


def min_detectable_force(k: float, delta_rt: float) -> float:
    """delta F = k * delta(rt), N/Hz.

    Direct product of the spring constant with the displacement-per-bandwidth
    precision; reported values from elsewhere are compared against this, never
    substituted for it.
    """
    if k <= 0 or delta_rt <= 0:
        raise ValueError("inputs must be positive")
    kk = u.Quantity(k, u.NEWTON_PER_METER)
    drt = u.Quantity(delta_rt, (1, 0, 1))  # m/Hz = m*s
    return (kk * drt).in_units(u.NEWTON_PER_HERTZ)


def gravity_resolution(delta_f: float, sensing_mass: float) -> float:
    """Smallest resolvable acceleration in units of g, over a 1 Hz window."""
    if sensing_mass <= 0:
        raise ValueError("sensing_mass must be positive")
    force = (u.Quantity(delta_f, u.NEWTON_PER_HERTZ) * UNIT_BANDWIDTH).in_units(u.NEWTON)
    weight = (
        u.Quantity(sensing_mass, u.KILOGRAM) * u.Quantity(STANDARD_GRAVITY, u.M_PER_S2)
    ).in_units(u.NEWTON)
    return force / weight


def gravitational_force(m1: float, m2: float, distance: float) -> float:
    """Newtonian attraction G m1 m2 / d^2, N."""
    if distance <= 0:
        raise ValueError("distance must be positive")
    g = u.Quantity(GRAVITATIONAL_CONSTANT, u.M3_PER_KG_S2)
    f = g * u.Quantity(m1, u.KILOGRAM) * u.Quantity(m2, u.KILOGRAM) / (
        u.Quantity(distance, u.METER) ** 2
    )
    return f.in_units(u.NEWTON)


def reference_mass_at_1m(delta_f: float, sensing_mass: float) -> float:
    """Source mass at 1 m whose pull on the sensor equals delta_f (over 1 Hz)."""
    force = (u.Quantity(delta_f, u.NEWTON_PER_HERTZ) * UNIT_BANDWIDTH).in_units(u.NEWTON)
    denom = GRAVITATIONAL_CONSTANT * sensing_mass
    return force / denom  # distance fixed at 1 m


def zero_point_motion(mass: float, omega: float) -> float:
    """x_zpm = sqrt(hbar / (2 m Omega)), meters."""
    if mass <= 0 or omega <= 0:
        raise ValueError("mass and omega must be positive")
    hb = u.Quantity(HBAR, u.JOULE_SECOND)
    m = u.Quantity(mass, u.KILOGRAM)
    om = u.Quantity(omega, u.HERTZ_ANGULAR)
    return (hb / (2.0 * m * om)).sqrt().in_units(u.METER)


def force_sensitivity(c: Cantilever, delta_rt: float) -> ForceSensitivity:
    """Bundle of force/gravity figures for a loaded cantilever."""
    k = spring_constant(c)
    df = min_detectable_force(k, delta_rt)
    m = effective_mass(c)
    if m <= 0:
        raise ValueError("effective mass must be positive")
    return ForceSensitivity(
        spring_constant=k,
        min_force=df,
        gravity_resolution=gravity_resolution(df, m),
        reference_mass_at_1m=reference_mass_at_1m(df, m),
    )
