"""Configuration parsing: defaults, unit suffixes, hard errors."""

import math

import pytest

from kerrsense.config import default_config, parse_config
from kerrsense.errors import ConfigError

TWO_PI = 2.0 * math.pi


def write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return path


class TestDefaults:
    def test_empty_file_reproduces_reference_device(self, tmp_path):
        cfg = parse_config(write(tmp_path, ""))
        dev = cfg.device
        assert dev.EJ == pytest.approx(TWO_PI * 15e9)
        assert dev.C_self == pytest.approx(100e-15)
        assert dev.g1 == pytest.approx(TWO_PI * 100e6)
        assert dev.g2 == pytest.approx(TWO_PI * 100e6)
        assert dev.Omega_c == pytest.approx(TWO_PI * 1500e6)
        assert dev.delta0 == pytest.approx(-TWO_PI * 60e6)
        assert dev.Delta0 == pytest.approx(-TWO_PI * 60e6)
        assert dev.E_p == pytest.approx(TWO_PI * 5e6)
        geo = cfg.geometry
        assert (geo.width, geo.length, geo.thickness) == (200e-6, 70e-6, 0.16e-6)
        assert geo.r0 == 1.01e-6
        assert cfg.interferometer.phi_t is None  # optimal by default
        assert cfg.sweep.variable == "r"

    def test_default_config_helper_matches_empty_file(self, tmp_path):
        assert parse_config(write(tmp_path, "")) == default_config()


class TestUnitParsing:
    def test_angular_frequency_prefix(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\ng1 = 2pi*50MHz\n"))
        assert cfg.device.g1 == pytest.approx(TWO_PI * 50e6)

    def test_plain_frequency_suffix_means_ordinary_frequency(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\ng1 = 50MHz\n"))
        assert cfg.device.g1 == pytest.approx(TWO_PI * 50e6)

    def test_bare_number_is_angular(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\nkappa = 6.28e7\n"))
        assert cfg.device.kappa == 6.28e7

    def test_negative_angular_value(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\ndelta0 = -2pi*30MHz\n"))
        assert cfg.device.delta0 == pytest.approx(-TWO_PI * 30e6)

    def test_case_sensitive_detuning_keys(self, tmp_path):
        cfg = parse_config(
            write(tmp_path, "[device]\ndelta0 = -2pi*50MHz\nDelta0 = -2pi*70MHz\n")
        )
        assert cfg.device.delta0 == pytest.approx(-TWO_PI * 50e6)
        assert cfg.device.Delta0 == pytest.approx(-TWO_PI * 70e6)

    def test_length_suffixes(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[geometry]\nr0 = 500nm\nwidth = 150um\n"))
        assert cfg.geometry.r0 == pytest.approx(500e-9)
        assert cfg.geometry.width == pytest.approx(150e-6)

    def test_capacitance_suffix(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\nC_self = 80fF\n"))
        assert cfg.device.C_self == pytest.approx(80e-15)

    def test_optimal_phase_keyword(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[interferometer]\nphi_t = optimal\n"))
        assert cfg.interferometer.phi_t is None
        cfg = parse_config(write(tmp_path, "[interferometer]\nphi_t = 1.25\n"))
        assert cfg.interferometer.phi_t == 1.25

    def test_sweep_values_typed_by_variable(self, tmp_path):
        cfg = parse_config(
            write(tmp_path, "[sweep]\nvariable = r\nstart = -0.5um\nstop = 1um\n")
        )
        assert cfg.sweep.start == pytest.approx(-0.5e-6)
        assert cfg.sweep.stop == pytest.approx(1e-6)
        cfg = parse_config(
            write(tmp_path, "[sweep]\nvariable = n_bar\nstart = 100\nstop = 1e6\n"
                            "scale = log\n")
        )
        assert cfg.sweep.start == 100.0

    def test_inline_comments_ignored(self, tmp_path):
        cfg = parse_config(write(tmp_path, "[device]\ng1 = 2pi*80MHz  # pump side\n"))
        assert cfg.device.g1 == pytest.approx(TWO_PI * 80e6)


class TestErrors:
    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            parse_config(tmp_path / "absent.cfg")

    def test_unknown_key_is_hard_error(self, tmp_path):
        with pytest.raises(ConfigError, match="unknown key 'g3'"):
            parse_config(write(tmp_path, "[device]\ng3 = 2pi*1MHz\n"))

    def test_unknown_section_is_hard_error(self, tmp_path):
        with pytest.raises(ConfigError, match=r"unknown section \[amplifier\]"):
            parse_config(write(tmp_path, "[amplifier]\ngain = 3\n"))

    def test_malformed_value_names_key_and_line(self, tmp_path):
        with pytest.raises(ConfigError, match="line 3.*'g1'"):
            parse_config(write(tmp_path, "[device]\nkappa = 2pi*1MHz\ng1 = fifty\n"))

    def test_unknown_suffix_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="suffix"):
            parse_config(write(tmp_path, "[geometry]\nr0 = 1.01km\n"))

    def test_angular_prefix_rejected_on_lengths(self, tmp_path):
        with pytest.raises(ConfigError, match="2pi"):
            parse_config(write(tmp_path, "[geometry]\nr0 = 2pi*1um\n"))

    def test_suffix_rejected_on_dimensionless(self, tmp_path):
        with pytest.raises(ConfigError, match="bare number"):
            parse_config(write(tmp_path, "[interferometer]\nn_bar = 1MHz\n"))
