"""Truncated Fock-space substrate: states, operators, evolutions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from kerrsense import fock
from kerrsense.errors import DimensionMismatchError, TruncationError

# independently computed with 30-digit arithmetic: exp(-2) * 2^4 / sqrt(4!)
COHERENT_ALPHA2_AMP4 = 0.44200318416631864
# exp(exp(-0.1j) - 1): mean of a coherent |1> after eta_t = 0.05 Kerr phases
KERR_MEAN_ALPHA1 = 0.99006221907915408 - 0.099170982657312264j


def random_two_mode(rng: np.random.Generator, cutoff: int) -> fock.TwoModeState:
    amps = rng.normal(size=cutoff * cutoff) + 1j * rng.normal(size=cutoff * cutoff)
    amps /= np.linalg.norm(amps)
    return fock.TwoModeState(amps, cutoff)


class TestCoherentState:
    def test_vacuum_limit(self):
        state = fock.coherent_state(0, 8)
        expected = np.zeros(8)
        expected[0] = 1.0
        np.testing.assert_array_equal(state.amplitudes, expected)

    def test_mean_photon_number_is_alpha_squared(self):
        state = fock.coherent_state(1.0, 32)
        assert abs(state.mean_photon_number() - 1.0) < 1e-10

    def test_amplitude_against_independent_evaluation(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        oracle = float(mp.e ** (-2) * 16 / mp.sqrt(24))
        assert abs(oracle - COHERENT_ALPHA2_AMP4) < 1e-16
        state = fock.coherent_state(2.0, 40)
        assert state.amplitudes[4] == pytest.approx(COHERENT_ALPHA2_AMP4, abs=1e-14)

    def test_complex_alpha_phases(self):
        alpha = 1.2 * np.exp(0.7j)
        state = fock.coherent_state(alpha, 32)
        # amplitude phases go as n * arg(alpha)
        ratio = state.amplitudes[3] / state.amplitudes[2]
        assert np.angle(ratio) == pytest.approx(0.7, abs=1e-12)

    def test_truncation_error_carries_achieved_norm(self):
        with pytest.raises(TruncationError) as err:
            fock.coherent_state(3.0, 5)
        assert 0.0 < err.value.achieved_norm < 1.0

    def test_explicit_truncation_override(self):
        state = fock.coherent_state(3.0, 5, allow_truncation=True)
        assert state.norm < 1.0 - 1e-10

    def test_recommended_cutoff_rule(self):
        assert fock.recommended_cutoff(0.0) == 10
        assert fock.recommended_cutoff(9.0) == 37
        assert fock.recommended_cutoff(100.0) == 170

    def test_recommended_cutoff_captures_norm(self):
        for n_bar in (0.5, 4.0, 25.0, 81.0):
            cutoff = fock.recommended_cutoff(n_bar)
            state = fock.coherent_state(math.sqrt(n_bar), cutoff)
            assert state.norm > 1.0 - 1e-10


class TestStateInvariants:
    def test_cutoff_minimum(self):
        with pytest.raises(ValueError):
            fock.StateVector(np.array([1.0 + 0j]), 1)

    def test_norm_enforced(self):
        with pytest.raises(TruncationError):
            fock.StateVector(np.array([0.5, 0.0, 0.0], complex), 3)

    def test_two_mode_dimension(self):
        state = fock.two_mode_product(fock.vacuum(6), fock.vacuum(6))
        assert state.dimension == 36

    def test_amplitudes_are_immutable(self):
        state = fock.vacuum(4)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 0.0


class TestOperators:
    def test_annihilation_matrix_elements(self):
        a = fock.annihilation_operator(6).matrix
        for n in range(1, 6):
            assert a[n - 1, n] == pytest.approx(math.sqrt(n))
        assert np.count_nonzero(a) == 5

    def test_number_operator_diagonal(self):
        n = fock.number_operator(5).matrix
        np.testing.assert_array_equal(np.diag(n).real, np.arange(5))
        assert np.count_nonzero(n - np.diag(np.diag(n))) == 0

    def test_expectation_vacuum_number(self):
        assert fock.expectation(fock.vacuum(8), fock.number_operator(8)) == 0

    def test_expectation_coherent_number(self):
        state = fock.coherent_state(2.0, 40)
        value = fock.expectation(state, fock.number_operator(40))
        assert value.real == pytest.approx(4.0, abs=1e-9)
        assert abs(value.imag) < 1e-12

    def test_expectation_coherent_quadrature(self):
        state = fock.coherent_state(1.0, 32)
        value = fock.expectation(state, fock.quadrature_x_operator(32))
        assert value.real == pytest.approx(1.0, abs=1e-9)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fock.expectation(fock.vacuum(8), fock.number_operator(9))

    def test_embed_operator_matches_kron_expectation(self):
        state = fock.two_mode_product(fock.coherent_state(1.0, 17), fock.vacuum(17))
        n_a = fock.embed_operator(fock.number_operator(17), "a", 17)
        assert fock.expectation(state, n_a).real == pytest.approx(1.0, abs=1e-10)


class TestBeamsplitter:
    def test_zero_angle_is_identity(self):
        rng = np.random.default_rng(3)
        state = random_two_mode(rng, 7)
        out = fock.apply_beamsplitter(state, 0.0)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-14)

    def test_coherent_in_coherent_out(self):
        alpha = 1.1 - 0.3j
        cutoff = 32
        state = fock.two_mode_product(fock.coherent_state(alpha, cutoff), fock.vacuum(cutoff))
        out = fock.apply_beamsplitter(state, math.pi / 4)
        c = math.cos(math.pi / 4)
        expected = fock.two_mode_product(
            fock.coherent_state(alpha * c, cutoff),
            fock.coherent_state(-1j * alpha * c, cutoff),
        )
        np.testing.assert_allclose(out.amplitudes, expected.amplitudes, atol=1e-10)

    def test_single_photon_splitting(self):
        cutoff = 4
        amps = np.zeros((cutoff, cutoff), complex)
        amps[1, 0] = 1.0
        out = fock.apply_beamsplitter(fock.TwoModeState(amps, cutoff), math.pi / 4)
        mat = out.as_matrix()
        assert mat[1, 0] == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert mat[0, 1] == pytest.approx(-1j / math.sqrt(2), abs=1e-12)

    def test_matches_dense_matrix_exponential(self):
        cutoff = 6
        rng = np.random.default_rng(11)
        state = random_two_mode(rng, cutoff)
        theta_t = 0.37
        a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
        big_a = np.kron(a, np.eye(cutoff))
        big_b = np.kron(np.eye(cutoff), a)
        gen = big_a.conj().T @ big_b + big_a @ big_b.conj().T
        expected = expm(-1j * theta_t * gen) @ state.amplitudes
        out = fock.apply_beamsplitter(state, theta_t)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-12)

    def test_two_quarter_splitters_equal_one_half(self):
        rng = np.random.default_rng(5)
        state = random_two_mode(rng, 9)
        twice = fock.apply_beamsplitter(fock.apply_beamsplitter(state, math.pi / 4), math.pi / 4)
        once = fock.apply_beamsplitter(state, math.pi / 2)
        fidelity = abs(np.vdot(twice.amplitudes, once.amplitudes)) ** 2
        assert fidelity > 1.0 - 1e-10

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), theta_t=st.floats(-3.0, 3.0))
    def test_unitarity_and_energy_conservation(self, seed, theta_t):
        rng = np.random.default_rng(seed)
        state = random_two_mode(rng, 6)
        out = fock.apply_beamsplitter(state, theta_t)
        assert abs(out.norm - state.norm) < 1e-10
        energy_in = state.mean_photon_number("a") + state.mean_photon_number("b")
        energy_out = out.mean_photon_number("a") + out.mean_photon_number("b")
        assert abs(energy_out - energy_in) < 1e-9

    def test_rejects_nonfinite_angle(self):
        state = fock.two_mode_product(fock.vacuum(4), fock.vacuum(4))
        with pytest.raises(ValueError):
            fock.apply_beamsplitter(state, math.inf)


class TestKerr:
    def test_identity_at_zero_phases(self):
        rng = np.random.default_rng(8)
        state = random_two_mode(rng, 6)
        out = fock.apply_kerr(state, "a", 0.0, 0.0)
        np.testing.assert_array_equal(out.amplitudes, state.amplitudes)

    def test_two_photon_phase(self):
        # n(n-1) = 2 at n = 2, so eta_t = pi/2 gives exp(-i pi) = -1
        cutoff = 5
        amps = np.zeros((cutoff, cutoff), complex)
        amps[2, 0] = 1.0
        out = fock.apply_kerr(fock.TwoModeState(amps, cutoff), "a", 0.0, math.pi / 2)
        assert out.as_matrix()[2, 0] == pytest.approx(-1.0, abs=1e-12)

    def test_kerr_evolved_coherent_mean(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        oracle = complex(mp.e ** (mp.e ** (-0.1j) - 1))
        assert abs(oracle - KERR_MEAN_ALPHA1) < 1e-15
        state = fock.apply_kerr_single(fock.coherent_state(1.0, 32), 0.0, 0.05)
        m1, _, _ = fock.single_mode_moments(state)
        assert m1 == pytest.approx(KERR_MEAN_ALPHA1, abs=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(0, 2**31 - 1),
        phi_t=st.floats(-5.0, 5.0),
        eta_t=st.floats(-2.0, 2.0),
        mode=st.sampled_from(["a", "b"]),
    )
    def test_photon_distribution_unchanged(self, seed, phi_t, eta_t, mode):
        rng = np.random.default_rng(seed)
        state = random_two_mode(rng, 6)
        out = fock.apply_kerr(state, mode, phi_t, eta_t)
        assert out.norm == pytest.approx(state.norm, abs=1e-14)
        for m in ("a", "b"):
            np.testing.assert_allclose(
                out.photon_distribution(m), state.photon_distribution(m), atol=1e-12
            )


class TestCutoffConvergence:
    def test_moments_stable_under_cutoff_increase(self):
        alpha = math.sqrt(6.0)
        base = fock.recommended_cutoff(6.0)
        values = []
        for cutoff in (base, base + 8):
            state = fock.two_mode_product(
                fock.coherent_state(alpha, cutoff), fock.vacuum(cutoff)
            )
            state = fock.apply_beamsplitter(state, math.pi / 4)
            state = fock.apply_kerr(state, "a", 0.3, 0.1)
            state = fock.apply_beamsplitter(state, math.pi / 4)
            m1, m2, occ = fock.mode_moments(state, "a")
            values.append((m1, m2, occ))
        for a, b in zip(values[0], values[1]):
            assert abs(a - b) < 1e-8
