"""Minimal dimension-checked quantities for the mechanics formulas.

A Quantity carries SI base-dimension exponents (m, kg, s).  Addition of
mismatched dimensions, or taking a square root of odd exponents, raises
UnitError at the point the formula is built, not as silent wrong numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnitError

Dim = tuple[int, int, int]  # exponents of (meter, kilogram, second)

DIMENSIONLESS: Dim = (0, 0, 0)
METER: Dim = (1, 0, 0)
KILOGRAM: Dim = (0, 1, 0)
SECOND: Dim = (0, 0, 1)
HERTZ_ANGULAR: Dim = (0, 0, -1)
NEWTON: Dim = (1, 1, -2)
NEWTON_PER_METER: Dim = (0, 1, -2)
PASCAL: Dim = (-1, 1, -2)
JOULE_SECOND: Dim = (2, 1, -1)
KG_PER_M3: Dim = (-3, 1, 0)
NEWTON_PER_HERTZ: Dim = (1, 1, -1)
M3_PER_KG_S2: Dim = (3, -1, -2)
M_PER_S2: Dim = (1, 0, -2)


def _fmt(dim: Dim) -> str:
    return f"m^{dim[0]} kg^{dim[1]} s^{dim[2]}"


@dataclass(frozen=True)
class Quantity:
    value: float
    dim: Dim = DIMENSIONLESS

    def _require(self, dim: Dim, what: str) -> None:
        if self.dim != dim:
            raise UnitError(f"{what}: expected {_fmt(dim)}, got {_fmt(self.dim)}")

    def __add__(self, other: "Quantity") -> "Quantity":
        if not isinstance(other, Quantity):
            return NotImplemented
        if self.dim != other.dim:
            raise UnitError(f"cannot add {_fmt(self.dim)} and {_fmt(other.dim)}")
        return Quantity(self.value + other.value, self.dim)

    def __sub__(self, other: "Quantity") -> "Quantity":
        if not isinstance(other, Quantity):
            return NotImplemented
        if self.dim != other.dim:
            raise UnitError(f"cannot subtract {_fmt(other.dim)} from {_fmt(self.dim)}")
        return Quantity(self.value - other.value, self.dim)

    def __mul__(self, other):
        if isinstance(other, Quantity):
            return Quantity(
                self.value * other.value,
                tuple(a + b for a, b in zip(self.dim, other.dim)),
            )
        return Quantity(self.value * other, self.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Quantity):
            return Quantity(
                self.value / other.value,
                tuple(a - b for a, b in zip(self.dim, other.dim)),
            )
        return Quantity(self.value / other, self.dim)

    def __pow__(self, exponent: int) -> "Quantity":
        if not isinstance(exponent, int):
            raise UnitError("quantity exponents must be integers")
        return Quantity(self.value ** exponent, tuple(d * exponent for d in self.dim))

    def sqrt(self) -> "Quantity":
        if any(d % 2 for d in self.dim):
            raise UnitError(f"square root of {_fmt(self.dim)} is not dimensionally valid")
        return Quantity(math.sqrt(self.value), tuple(d // 2 for d in self.dim))

    def in_units(self, dim: Dim) -> float:
        """Unwrap to a float, asserting the expected dimension."""
        self._require(dim, "result")
        return self.value
