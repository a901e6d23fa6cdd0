"""Device model: capacitance, detuning map, Kerr coefficient, displacement."""

import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrsense import device as dvc
from kerrsense.constants import VACUUM_PERMITTIVITY
from kerrsense.errors import UnobservableDisplacementError

# eps0 * 200um * 70um / 1.01um, fixed by independent evaluation
C_AT_BASELINE = 1.22731316217e-13
# declared capacitive map at gap 0.5 um, locked after the first validated run
GOLDEN_DELTA = -2.72552790978658915e9
GOLDEN_BIG_DELTA = 1.97154567292503881e9
GOLDEN_ETA_HALF_UM = 1.53372339404463046e6


@pytest.fixture
def geom():
    return dvc.PlateGeometry()


@pytest.fixture
def dev():
    return dvc.DeviceParams()


class TestCapacitance:
    def test_baseline_value(self, geom):
        c = dvc.coupling_capacitance(geom, 1.01e-6)
        assert c == pytest.approx(C_AT_BASELINE, rel=1e-11)
        assert c == pytest.approx(
            VACUUM_PERMITTIVITY * 1.4e-8 / 1.01e-6, rel=1e-14
        )

    def test_doubling_gap_halves_capacitance(self, geom):
        c1 = dvc.coupling_capacitance(geom, 0.8e-6)
        c2 = dvc.coupling_capacitance(geom, 1.6e-6)
        assert c2 == pytest.approx(c1 / 2.0, rel=1e-14)

    def test_vanishes_at_large_gap(self, geom):
        assert dvc.coupling_capacitance(geom, 1.0) < 1e-18

    def test_rejects_closed_gap(self, geom):
        with pytest.raises(ValueError):
            dvc.coupling_capacitance(geom, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(
        gap=st.floats(1e-8, 1e-4),
        factor=st.floats(1.001, 10.0),
        model=st.sampled_from(["parallel_plate", "parallel_plate_with_fringe"]),
    )
    def test_strictly_decreasing_in_gap(self, gap, factor, model):
        geometry = dvc.PlateGeometry(model=model)
        assert dvc.coupling_capacitance(geometry, gap * factor) < dvc.coupling_capacitance(
            geometry, gap
        )

    def test_fringe_correction_increases_capacitance_at_micron_gaps(self, geom):
        fringe = dvc.PlateGeometry(model="parallel_plate_with_fringe")
        assert dvc.coupling_capacitance(fringe, 1e-6) > dvc.coupling_capacitance(geom, 1e-6)

    def test_fringe_correction_clamped_outside_validity(self, geom):
        # the first-order edge term would go negative for gap >> thickness;
        # there the model falls back to the plain parallel plate
        fringe = dvc.PlateGeometry(model="parallel_plate_with_fringe")
        for gap in (1e-5, 1e-4):
            c = dvc.coupling_capacitance(fringe, gap)
            assert c == dvc.coupling_capacitance(geom, gap)
            assert c > 0


class TestDetuningMap:
    def test_baseline_anchoring_exact(self, geom, dev):
        c0 = dvc.coupling_capacitance(geom, geom.r0)
        delta, big_delta = dvc.detunings_from_capacitance(c0, dev, c0)
        assert delta == dev.delta0
        assert big_delta == dev.Delta0

    def test_zero_capacitance_shift(self, geom, dev):
        c0 = dvc.coupling_capacitance(geom, geom.r0)
        j_baseline = dvc.qubit_coupling(c0, dev)
        delta, big_delta = dvc.detunings_from_capacitance(0.0, dev, c0)
        assert delta == pytest.approx(dev.delta0 + j_baseline, rel=1e-12)
        assert big_delta == pytest.approx(dev.Delta0 - j_baseline, rel=1e-12)

    def test_golden_values_at_half_micron(self, geom, dev):
        c0 = dvc.coupling_capacitance(geom, geom.r0)
        cc = dvc.coupling_capacitance(geom, 0.5e-6)
        delta, big_delta = dvc.detunings_from_capacitance(cc, dev, c0)
        assert delta == pytest.approx(GOLDEN_DELTA, rel=1e-12)
        assert big_delta == pytest.approx(GOLDEN_BIG_DELTA, rel=1e-12)

    def test_transmon_frequency_scale(self, dev):
        # sqrt(8 EJ EC) - EC with the default parameters sits near 2pi*4.6 GHz
        assert dev.qubit_frequency == pytest.approx(2.9076e10, rel=1e-3)


class TestKerrCoefficient:
    def test_symmetric_configuration_cancels_exactly(self, dev):
        sym = replace(dev, gamma_43=dev.gamma_21 + dev.gamma_23)
        strength = dvc.kerr_eta(-1e8, -1e8, sym)
        assert strength.eta == 0.0

    def test_zero_linewidth_reduction(self):
        dev = dvc.DeviceParams(gamma_21=0.0, gamma_23=0.0, gamma_43=0.0)
        delta, big_delta = -3e8, -4e8
        strength = dvc.kerr_eta(delta, big_delta, dev)
        expected = (dev.g1 / dev.Omega_c) ** 2 * dev.g1 ** 2 * (
            1.0 / big_delta - 1.0 / delta
        )
        assert strength.eta == pytest.approx(expected, rel=1e-12)

    def test_validity_warning(self):
        with pytest.warns(dvc.ValidityWarning):
            noisy = dvc.DeviceParams(Omega_c=2 * math.pi * 300e6)
        with pytest.warns(dvc.ValidityWarning):
            dvc.kerr_eta(-1e8, -2e8, noisy)

    def test_golden_eta_at_operating_point(self, geom, dev):
        strength = dvc.eta_at(geom, dev, -0.51e-6)
        assert strength.eta == pytest.approx(GOLDEN_ETA_HALF_UM, rel=1e-12)

    def test_kappa_invariance_bitwise(self, geom, dev):
        grid = np.linspace(-0.6e-6, 1.0e-6, 7)
        base = dvc.eta_curve(geom, dev, grid)
        scaled = dvc.eta_curve(geom, replace(dev, kappa=dev.kappa * 10.0), grid)
        assert base.eta.tobytes() == scaled.eta.tobytes()
        np.testing.assert_allclose(
            scaled.eta_over_kappa * 10.0, base.eta_over_kappa, rtol=1e-12
        )

    def test_eta_over_kappa_range_claim(self, geom, dev):
        # the ratio reaches 1e3..1e4 for some kappa in the declared
        # bad-cavity range (2pi*1 Hz .. 2pi*10 GHz)
        eta = abs(dvc.eta_at(geom, dev, -0.51e-6).eta)
        kappa_low = eta / 1e4
        kappa_high = eta / 1e3
        assert kappa_low >= 2 * math.pi * 1.0
        assert kappa_high <= 2 * math.pi * 10e9


class TestEtaCurve:
    def test_constant_capacitance_stub_is_flat(self, geom, dev):
        stub = dvc.constant_detuning_model(dev.delta0 - 1e8, dev.Delta0 + 1e8)
        curve = dvc.eta_curve(geom, dev, np.linspace(-0.5e-6, 0.5e-6, 9), stub)
        assert np.ptp(curve.eta) == 0.0
        np.testing.assert_allclose(curve.d_eta_dr, 0.0, atol=1e-16)

    def test_derivative_matches_independent_difference(self, geom, dev):
        for r in (-0.51e-6, -0.3e-6, 0.4e-6):
            h = 0.2e-9
            fd = (
                dvc.eta_at(geom, dev, r + h).eta - dvc.eta_at(geom, dev, r - h).eta
            ) / (2.0 * h)
            assert dvc.d_eta_dr(geom, dev, r) == pytest.approx(fd, rel=1e-5)

    def test_detuning_zero_crossings_create_resonances(self, geom, dev):
        # Delta crosses zero near r = -0.101 um, delta near r = +0.111 um;
        # |d eta/dr| peaks there by orders of magnitude
        model = dvc.capacitive_detuning_model(geom, dev)
        delta_m, big_delta_m = model(geom.r0 - 0.10111e-6)
        assert abs(big_delta_m) < 2 * math.pi * 1e6
        delta_p, big_delta_p = model(geom.r0 + 0.11109e-6)
        assert abs(delta_p) < 2 * math.pi * 1e6
        near = abs(dvc.d_eta_dr(geom, dev, -0.101e-6))
        far = abs(dvc.d_eta_dr(geom, dev, -0.51e-6))
        assert near > 100.0 * far

    def test_grid_closing_gap_rejected(self, geom, dev):
        with pytest.raises(ValueError):
            dvc.eta_at(geom, dev, -geom.r0)

    def test_curve_requires_increasing_grid(self, geom, dev):
        with pytest.raises(ValueError):
            dvc.EtaCurve(
                np.array([0.0, 0.0]), np.zeros(2), np.zeros(2), np.zeros(2)
            )


class TestDisplacementPrecision:
    def test_ratio_identity(self, geom, dev):
        # delta(rt) * |d eta/dr| equals delta(eta t) by construction
        from kerrsense.interferometer import InterferometerConfig, precision_closed_form

        dp = dvc.displacement_precision(1e4, geom, dev, -0.51e-6, 1e-12)
        cfg = InterferometerConfig(alpha=100.0, phi_t=dp.phi_t, eta_t=dp.eta_t)
        res = precision_closed_form(cfg)
        assert dp.delta_rt_x * abs(dp.d_eta_dr) == pytest.approx(
            res.delta_eta_t_x, rel=1e-12
        )
        assert dp.delta_r_x == pytest.approx(dp.delta_rt_x / 1e-12, rel=1e-12)

    def test_flat_map_is_unobservable(self, geom, dev):
        stub = dvc.constant_detuning_model(dev.delta0, dev.Delta0)
        with pytest.raises(UnobservableDisplacementError):
            dvc.displacement_precision(1e4, geom, dev, -0.2e-6, 1e-12,
                                       detuning_model=stub)

    def test_scaling_with_photon_number(self, geom, dev):
        # d eta/dr carries no n_bar, so delta(rt) inherits the -3/2 power law
        from kerrsense.numerics import fit_power_law

        n_bars = np.geomspace(1e2, 1e6, 7)
        values = [
            dvc.displacement_precision(n, geom, dev, -0.51e-6, 1e-15).delta_rt_x
            for n in n_bars
        ]
        slope, _ = fit_power_law(n_bars, np.array(values))
        assert slope == pytest.approx(-1.5, abs=0.02)

    def test_headline_operating_point_regression(self, geom, dev):
        # n_bar = 1e7 at the r = 0 separation; locked after first validated run
        dp = dvc.displacement_precision(1e7, geom, dev, 0.0, 1e-15)
        assert min(dp.delta_rt_x, dp.delta_rt_y) == pytest.approx(3.597e-25, rel=1e-2)

    def test_probe_time_must_be_positive(self, geom, dev):
        with pytest.raises(ValueError):
            dvc.displacement_precision(1e4, geom, dev, 0.0, 0.0)
