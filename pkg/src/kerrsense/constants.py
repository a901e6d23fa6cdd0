"""Pinned physical constants (SI, CODATA 2018 where applicable).

All frequencies elsewhere in the package are angular (rad/s).
"""

# Reduced Planck constant, J*s
HBAR = 1.054571817e-34

# Elementary charge, C
ELEMENTARY_CHARGE = 1.602176634e-19

# Vacuum permittivity, F/m
VACUUM_PERMITTIVITY = 8.8541878128e-12

# Newtonian gravitational constant, m^3 kg^-1 s^-2
GRAVITATIONAL_CONSTANT = 6.674300000e-11

# Standard acceleration of gravity, m/s^2 (exact by definition)
STANDARD_GRAVITY = 9.80665

# Density of gold, kg/m^3
GOLD_DENSITY = 19300.0
