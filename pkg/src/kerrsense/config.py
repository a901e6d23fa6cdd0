"""Plain-text configuration: key = value with sections and unit suffixes.

Sections: [device], [geometry], [interferometer], [sweep].  Every key has a
default reproducing the reference device, so an empty file is a complete
configuration.  Unknown sections or keys are hard errors.

Value grammar:

* frequencies: ``2pi*100MHz`` or ``100MHz`` both mean an angular
  2*pi*1e8 rad/s (the optional ``2pi*`` prefix mirrors the usual notation
  and is never applied twice); a bare number is taken as rad/s directly.
  Suffixes: GHz, MHz, Hz.
* lengths: ``1.01um``, ``500nm``, or a bare number in meters.
* capacitance: ``100fF`` or a bare number in farads.
* times, angles and counts: bare numbers (s, rad, dimensionless).
* phi_t additionally accepts the word ``optimal``.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .device import DeviceParams, PlateGeometry
from .errors import ConfigError

_TWO_PI = 2.0 * math.pi

_FREQ_SCALE = {"GHz": 1e9, "MHz": 1e6, "Hz": 1.0}
_LENGTH_SCALE = {"um": 1e-6, "nm": 1e-9}
_CAP_SCALE = {"fF": 1e-15}

_VALUE_RE = re.compile(
    r"^(?P<sign>[+-])?(?P<prefix>2pi\*)?(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?P<suffix>[A-Za-z]*)$"
)


@dataclass(frozen=True)
class InterferometerSettings:
    n_bar: float = 1e4
    theta_t: float = math.pi / 4.0
    phi_t: float | None = None  # None = optimal operating phase
    eta_t: float = 1e-9
    output_port: str = "a"
    quadrature: str = "X"
    probe_time: float = 1e-15  # seconds


@dataclass(frozen=True)
class SweepSettings:
    variable: str = "r"
    start: float = -0.85e-6
    stop: float = 1.99e-6
    points: int = 75
    scale: str = "linear"
    r_fixed: float = -0.51e-6  # operating point for non-r sweeps


@dataclass(frozen=True)
class FullConfig:
    device: DeviceParams
    geometry: PlateGeometry
    interferometer: InterferometerSettings
    sweep: SweepSettings


def default_config() -> FullConfig:
    return FullConfig(DeviceParams(), PlateGeometry(), InterferometerSettings(), SweepSettings())


def _parse_scaled(raw: str, key: str, line: int, kind: str) -> float:
    """Parse a number with an optional unit suffix according to the key kind."""
    m = _VALUE_RE.match(raw.replace(" ", ""))
    if m is None:
        raise ConfigError(f"line {line}: cannot parse value {raw!r} for key {key!r}")
    num = float(m.group("num"))
    if m.group("sign") == "-":
        num = -num
    prefix = m.group("prefix") is not None
    suffix = m.group("suffix")

    if kind == "frequency":
        if suffix:
            if suffix not in _FREQ_SCALE:
                raise ConfigError(
                    f"line {line}: unknown frequency suffix {suffix!r} for key {key!r}"
                )
            return _TWO_PI * num * _FREQ_SCALE[suffix]
        return _TWO_PI * num if prefix else num
    if prefix:
        raise ConfigError(f"line {line}: '2pi*' prefix is only valid on frequencies ({key!r})")
    if kind == "length":
        if suffix:
            if suffix not in _LENGTH_SCALE:
                raise ConfigError(
                    f"line {line}: unknown length suffix {suffix!r} for key {key!r}"
                )
            return num * _LENGTH_SCALE[suffix]
        return num
    if kind == "capacitance":
        if suffix:
            if suffix not in _CAP_SCALE:
                raise ConfigError(
                    f"line {line}: unknown capacitance suffix {suffix!r} for key {key!r}"
                )
            return num * _CAP_SCALE[suffix]
        return num
    if suffix:
        raise ConfigError(
            f"line {line}: key {key!r} takes a bare number, got suffix {suffix!r}"
        )
    return num


# key -> (kind, attribute); kinds: frequency, length, capacitance, number, int, str
_DEVICE_KEYS = {
    "EJ": "frequency", "C_self": "capacitance", "g1": "frequency", "g2": "frequency",
    "Omega_c": "frequency", "delta0": "frequency", "Delta0": "frequency",
    "gamma_21": "frequency", "gamma_23": "frequency", "gamma_43": "frequency",
    "kappa": "frequency", "E_p": "frequency",
}
_GEOMETRY_KEYS = {
    "width": "length", "length": "length", "thickness": "length", "r0": "length",
    "model": "str",
}
_INTERFEROMETER_KEYS = {
    "n_bar": "number", "theta_t": "number", "phi_t": "phase_or_optimal",
    "eta_t": "number", "output_port": "str", "quadrature": "str",
    "probe_time": "number",
}
_SWEEP_KEYS = {
    "variable": "str", "start": "sweep_value", "stop": "sweep_value",
    "points": "int", "scale": "str", "r_fixed": "length",
}
_SECTIONS = {
    "device": _DEVICE_KEYS,
    "geometry": _GEOMETRY_KEYS,
    "interferometer": _INTERFEROMETER_KEYS,
    "sweep": _SWEEP_KEYS,
}


def _line_of(text: str, key: str) -> int:
    for i, line in enumerate(text.splitlines(), start=1):
        if re.match(rf"^\s*{re.escape(key)}\s*=", line):
            return i
    return 0


def parse_config(path: str | Path) -> FullConfig:
    """Load a configuration file, filling every missing key with its default."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"configuration file not found: {path}")
    text = path.read_text()

    parser = configparser.ConfigParser(
        inline_comment_prefixes=("#",), interpolation=None, strict=True
    )
    parser.optionxform = str  # keys are case sensitive (delta0 vs Delta0)
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    raw_values: dict[str, dict[str, str]] = {name: {} for name in _SECTIONS}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(
                f"unknown section [{section}] in {path}; expected one of "
                f"{sorted(_SECTIONS)}"
            )
        allowed = _SECTIONS[section]
        for key, raw in parser.items(section):
            if key not in allowed:
                raise ConfigError(
                    f"line {_line_of(text, key)}: unknown key {key!r} in section [{section}]"
                )
            raw_values[section][key] = raw.strip()

    # the sweep variable types its own start/stop, so resolve it first
    sweep_variable = raw_values["sweep"].get("variable", "r")
    values: dict[str, dict[str, object]] = {}
    for section, entries in raw_values.items():
        allowed = _SECTIONS[section]
        values[section] = {
            key: _convert(raw, key, _line_of(text, key), allowed[key], sweep_variable)
            for key, raw in entries.items()
        }

    return FullConfig(
        device=DeviceParams(**values["device"]),
        geometry=PlateGeometry(**values["geometry"]),
        interferometer=InterferometerSettings(**values["interferometer"]),
        sweep=SweepSettings(**values["sweep"]),
    )


def _convert(raw: str, key: str, line: int, kind: str, sweep_variable):
    if kind == "str":
        return raw
    if kind == "int":
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"line {line}: key {key!r} needs an integer, got {raw!r}") from exc
    if kind == "phase_or_optimal":
        if raw.lower() == "optimal":
            return None
        return _parse_scaled(raw, key, line, "number")
    if kind == "sweep_value":
        # r sweeps take lengths; the others are dimensionless/radians
        target = "length" if sweep_variable == "r" else "number"
        return _parse_scaled(raw, key, line, target)
    return _parse_scaled(raw, key, line, kind)
