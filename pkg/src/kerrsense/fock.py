"""Exact linear algebra on a truncated Fock space.

Single-mode states are complex amplitude vectors indexed by photon number
0..cutoff-1; two-mode states are row-major over (n_a, n_b) with a shared
per-mode cutoff.  All states are immutable after construction and every
operation returns a new state, so everything here is safe to call from
parallel workers.

Conventions (fixed for the whole package):

* beamsplitter: U(theta_t) = exp(-i * theta_t * (a^dag b + a b^dag)),
  50/50 at theta_t = pi/4.  On coherent inputs
  U |alpha, beta> = |alpha c - i beta s,  beta c - i alpha s>
  with c = cos(theta_t), s = sin(theta_t).
* Kerr/phase map on one mode: diagonal phases
  exp(-i * (phi_t * n + eta_t * n * (n - 1))), since a^dag^2 a^2 = n(n-1).
* quadratures: X = (a + a^dag)/2, Y = -i (a - a^dag)/2; coherent-state
  variance is 1/4 in this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .errors import DimensionMismatchError, TruncationError

#: default tolerated probability leak outside the truncated basis
DEFAULT_LEAK_TOL = 1e-10

#: hard ceiling on the per-mode cutoff; two-mode vectors grow as cutoff^2 and
#: the cached coupler eigenblocks as cutoff^3
MAX_CUTOFF = 256


def recommended_cutoff(n_bar: float) -> int:
    """Cutoff such that the Poisson tail above it is below ~1e-12.

    ceil(n_bar + 6 sqrt(n_bar) + 10); generous for small n_bar, tight enough
    to keep two-mode simulations tractable for n_bar up to ~100.
    """
    if n_bar < 0:
        raise ValueError("n_bar must be non-negative")
    return int(math.ceil(n_bar + 6.0 * math.sqrt(n_bar) + 10.0))


def _check_cutoff(cutoff: int) -> None:
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    if cutoff > MAX_CUTOFF:
        raise MemoryError(
            f"cutoff {cutoff} exceeds the supported maximum {MAX_CUTOFF} "
            f"(two-mode dimension would be {cutoff ** 2})"
        )


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Pure state of a single bosonic mode on a truncated Fock basis."""

    amplitudes: np.ndarray
    cutoff: int
    leak_tol: float = field(default=DEFAULT_LEAK_TOL, repr=False)

    def __post_init__(self):
        _check_cutoff(self.cutoff)
        amps = _frozen(self.amplitudes)
        if amps.shape != (self.cutoff,):
            raise DimensionMismatchError(
                f"amplitude vector has shape {amps.shape}, expected ({self.cutoff},)"
            )
        object.__setattr__(self, "amplitudes", amps)
        norm = self.norm
        if not (1.0 - self.leak_tol <= norm <= 1.0 + 1e-12):
            raise TruncationError(
                f"state norm {norm!r} outside [1 - {self.leak_tol}, 1]",
                achieved_norm=norm,
            )

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def photon_distribution(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_photon_number(self) -> float:
        return float(np.arange(self.cutoff) @ self.photon_distribution())


@dataclass(frozen=True)
class TwoModeState:
    """Pure state of two modes, row-major over (n_a, n_b), shared cutoff."""

    amplitudes: np.ndarray
    cutoff: int
    leak_tol: float = field(default=DEFAULT_LEAK_TOL, repr=False)

    def __post_init__(self):
        _check_cutoff(self.cutoff)
        amps = _frozen(self.amplitudes.reshape(-1))
        if amps.shape != (self.cutoff ** 2,):
            raise DimensionMismatchError(
                f"two-mode amplitude vector has length {amps.shape[0]}, "
                f"expected cutoff^2 = {self.cutoff ** 2}"
            )
        object.__setattr__(self, "amplitudes", amps)
        norm = self.norm
        if not (1.0 - self.leak_tol <= norm <= 1.0 + 1e-12):
            raise TruncationError(
                f"two-mode norm {norm!r} outside [1 - {self.leak_tol}, 1]",
                achieved_norm=norm,
            )

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def dimension(self) -> int:
        return self.cutoff ** 2

    def as_matrix(self) -> np.ndarray:
        """(n_a, n_b)-indexed view of the amplitudes."""
        return self.amplitudes.reshape(self.cutoff, self.cutoff)

    def photon_distribution(self, mode: str) -> np.ndarray:
        """Marginal photon-number probabilities of one mode ('a' or 'b')."""
        prob = np.abs(self.as_matrix()) ** 2
        return prob.sum(axis=1) if _mode_axis(mode) == 0 else prob.sum(axis=0)

    def mean_photon_number(self, mode: str) -> float:
        return float(np.arange(self.cutoff) @ self.photon_distribution(mode))


@dataclass(frozen=True)
class Operator:
    """Dense matrix operator on a truncated single- or two-mode space."""

    matrix: np.ndarray
    hermitian: bool

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"operator matrix must be square, got {mat.shape}")
        object.__setattr__(self, "matrix", mat)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _mode_axis(mode: str) -> int:
    if mode == "a":
        return 0
    if mode == "b":
        return 1
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


# ---------------------------------------------------------------------------
# operator constructors
# ---------------------------------------------------------------------------

def annihilation_operator(cutoff: int) -> Operator:
    """<n-1| a |n> = sqrt(n)."""
    _check_cutoff(cutoff)
    return Operator(np.diag(np.sqrt(np.arange(1, cutoff)), 1), hermitian=False)


def creation_operator(cutoff: int) -> Operator:
    return Operator(annihilation_operator(cutoff).matrix.conj().T, hermitian=False)


def number_operator(cutoff: int) -> Operator:
    _check_cutoff(cutoff)
    return Operator(np.diag(np.arange(cutoff, dtype=float)).astype(complex), hermitian=True)


def quadrature_x_operator(cutoff: int) -> Operator:
    a = annihilation_operator(cutoff).matrix
    return Operator((a + a.conj().T) / 2.0, hermitian=True)


def quadrature_y_operator(cutoff: int) -> Operator:
    a = annihilation_operator(cutoff).matrix
    return Operator(-1j * (a - a.conj().T) / 2.0, hermitian=True)


def embed_operator(op: Operator, mode: str, cutoff: int) -> Operator:
    """Lift a single-mode operator onto the two-mode space (dense kron).

    Intended for tests and small cutoffs; the evolution routines never
    build cutoff^2 x cutoff^2 matrices.
    """
    if op.dimension != cutoff:
        raise DimensionMismatchError(
            f"operator dimension {op.dimension} does not match cutoff {cutoff}"
        )
    eye = np.eye(cutoff, dtype=complex)
    if _mode_axis(mode) == 0:
        return Operator(np.kron(op.matrix, eye), hermitian=op.hermitian)
    return Operator(np.kron(eye, op.matrix), hermitian=op.hermitian)


# ---------------------------------------------------------------------------
# state constructors
# ---------------------------------------------------------------------------

def vacuum(cutoff: int) -> StateVector:
    amps = np.zeros(cutoff, dtype=complex)
    amps[0] = 1.0
    return StateVector(amps, cutoff)


def coherent_state(
    alpha: complex,
    cutoff: int,
    leak_tol: float = DEFAULT_LEAK_TOL,
    allow_truncation: bool = False,
) -> StateVector:
    """Coherent state |alpha> with amplitudes exp(-|a|^2/2) a^n / sqrt(n!).

    Amplitude magnitudes are evaluated in log space so that photon numbers
    of order 10^3 do not overflow the factorial.

    Raises TruncationError (carrying the achieved norm) when the cutoff
    captures less than 1 - leak_tol of the state, unless the caller
    explicitly opts in with allow_truncation=True.
    """
    _check_cutoff(cutoff)
    alpha = complex(alpha)
    if alpha == 0:
        return vacuum(cutoff)
    n = np.arange(cutoff)
    log_mag = -abs(alpha) ** 2 / 2.0 + n * math.log(abs(alpha)) - gammaln(n + 1) / 2.0
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    norm = float(np.vdot(amps, amps).real)
    if norm < 1.0 - leak_tol and not allow_truncation:
        raise TruncationError(
            f"cutoff {cutoff} captures only norm {norm!r} of |alpha|^2 = "
            f"{abs(alpha)**2:.6g}; recommended cutoff is "
            f"{recommended_cutoff(abs(alpha)**2)}",
            achieved_norm=norm,
        )
    tol = leak_tol if norm >= 1.0 - leak_tol else (1.0 - norm) * (1.0 + 1e-9)
    return StateVector(amps, cutoff, leak_tol=tol)


def two_mode_product(state_a: StateVector, state_b: StateVector) -> TwoModeState:
    if state_a.cutoff != state_b.cutoff:
        raise DimensionMismatchError("both modes must share one cutoff")
    amps = np.outer(state_a.amplitudes, state_b.amplitudes)
    tol = max(state_a.leak_tol, state_b.leak_tol, DEFAULT_LEAK_TOL)
    return TwoModeState(amps, state_a.cutoff, leak_tol=tol)


# ---------------------------------------------------------------------------
# evolutions
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _beamsplitter_blocks(cutoff: int):
    """Eigendecomposition of the hopping generator, block per total photon N.

    a^dag b + a b^dag conserves N = n_a + n_b, so on the truncated space the
    generator is block tridiagonal over na = max(0, N-cutoff+1)..min(N, cutoff-1)
    with couplings sqrt((na+1)(N-na)).  exp(-i theta_t G) is assembled exactly
    per block from the (real, orthogonal) eigenvectors.
    """
    blocks = []
    for total in range(2 * cutoff - 1):
        lo = max(0, total - cutoff + 1)
        hi = min(total, cutoff - 1)
        nas = np.arange(lo, hi + 1)
        if len(nas) == 1:
            blocks.append((nas, None, None))
            continue
        offdiag = np.sqrt((nas[:-1] + 1.0) * (total - nas[:-1]))
        evals, evecs = eigh_tridiagonal(np.zeros(len(nas)), offdiag)
        blocks.append((nas, evals, evecs))
    return blocks


def apply_beamsplitter(state: TwoModeState, theta_t: float) -> TwoModeState:
    """Evolve by exp(-i * theta_t * (a^dag b + a b^dag)), exactly.

    The exponential is taken of the generator restricted to the truncated
    two-mode space (no Gaussian shortcut), so non-Gaussian inputs are
    handled without approximation.  Norm and total photon number are
    conserved to rounding.
    """
    if not math.isfinite(theta_t):
        raise ValueError("theta_t must be finite")
    psi = state.as_matrix()
    out = np.zeros_like(psi)
    for nas, evals, evecs in _beamsplitter_blocks(state.cutoff):
        nbs = (nas[0] + nas[-1]) - nas  # n_b = N - n_a
        vec = psi[nas, nbs]
        if evals is None:
            out[nas, nbs] = vec
        else:
            out[nas, nbs] = evecs @ (np.exp(-1j * theta_t * evals) * (evecs.T @ vec))
    return TwoModeState(out, state.cutoff, leak_tol=max(state.leak_tol, 1e-12))


def _kerr_phases(cutoff: int, phi_t: float, eta_t: float) -> np.ndarray:
    n = np.arange(cutoff, dtype=float)
    return np.exp(-1j * (phi_t * n + eta_t * n * (n - 1.0)))


def apply_kerr(state: TwoModeState, mode: str, phi_t: float, eta_t: float) -> TwoModeState:
    """Apply exp(-i (phi_t n + eta_t n(n-1))) on the selected mode.

    a^dag^2 a^2 = n(n-1) exactly, so this is a diagonal phase map: the norm
    and the per-mode photon-number distributions are untouched.
    """
    phases = _kerr_phases(state.cutoff, phi_t, eta_t)
    psi = state.as_matrix()
    out = psi * phases[:, None] if _mode_axis(mode) == 0 else psi * phases[None, :]
    return TwoModeState(out, state.cutoff, leak_tol=state.leak_tol)


def apply_kerr_single(state: StateVector, phi_t: float, eta_t: float) -> StateVector:
    """Single-mode version of apply_kerr."""
    phases = _kerr_phases(state.cutoff, phi_t, eta_t)
    return StateVector(state.amplitudes * phases, state.cutoff, leak_tol=state.leak_tol)


# ---------------------------------------------------------------------------
# expectations and moments
# ---------------------------------------------------------------------------

def expectation(state: StateVector | TwoModeState, op: Operator) -> complex:
    """<state| op |state>.  Real up to rounding when op is hermitian."""
    amps = state.amplitudes
    if op.dimension != amps.shape[0]:
        raise DimensionMismatchError(
            f"operator dimension {op.dimension} does not match state dimension "
            f"{amps.shape[0]}"
        )
    return complex(np.vdot(amps, op.matrix @ amps))


def mode_moments(state: TwoModeState, mode: str) -> tuple[complex, complex, float]:
    """(<a>, <a^2>, <n>) of the selected mode, via ladder index shifts."""
    psi = state.as_matrix()
    if _mode_axis(mode) == 1:
        psi = psi.T
    n = np.arange(state.cutoff)
    root_n = np.sqrt(n[1:])
    m1 = complex(np.sum(root_n[:, None] * np.conj(psi[:-1, :]) * psi[1:, :]))
    root_nn = np.sqrt(n[2:] * (n[2:] - 1.0))
    m2 = complex(np.sum(root_nn[:, None] * np.conj(psi[:-2, :]) * psi[2:, :]))
    occ = float(np.sum(n[:, None] * np.abs(psi) ** 2))
    return m1, m2, occ


def single_mode_moments(state: StateVector) -> tuple[complex, complex, float]:
    """(<a>, <a^2>, <n>) for a single-mode state."""
    n = np.arange(state.cutoff)
    amps = state.amplitudes
    m1 = complex(np.sum(np.sqrt(n[1:]) * np.conj(amps[:-1]) * amps[1:]))
    m2 = complex(np.sum(np.sqrt(n[2:] * (n[2:] - 1.0)) * np.conj(amps[:-2]) * amps[2:]))
    occ = float(n @ (np.abs(amps) ** 2))
    return m1, m2, occ
