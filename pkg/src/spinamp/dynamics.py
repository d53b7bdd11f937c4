"""Initial states, exact density-matrix evolution, and the gate-cascade oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalIntegrityError
from .spin_algebra import SystemLayout, hermitian_exponential, require_hermitian

DENSITY_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
POLARIZATION_IMAG_TOL = 1e-10
POLARIZATION_BOUND_SLACK = 1e-9


def initial_state(layout: SystemLayout, s_initial: str) -> np.ndarray:
    """Product state with all measuring spins up and S up or down.

    Returns the rank-1 projector onto the corresponding computational basis
    state.
    """
    if s_initial not in ("up", "down"):
        raise ValueError(f"s_initial must be 'up' or 'down', got {s_initial!r}")
    bits = [1 if s_initial == "down" else 0] + [0] * layout.n_i_spins
    index = layout.basis_index(bits)
    rho = np.zeros((layout.dimension, layout.dimension), dtype=complex)
    rho[index, index] = 1.0
    return rho


def validate_density(rho: np.ndarray, tol: float = DENSITY_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    rho = require_hermitian(np.asarray(rho, dtype=complex), tol=tol, what="density matrix")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise NumericalIntegrityError(f"density matrix trace {tr!r} != 1")
    lam = np.linalg.eigvalsh(rho)
    if lam.min() < EIGENVALUE_FLOOR:
        raise NumericalIntegrityError(
            f"density matrix has negative eigenvalue {lam.min():.3e}"
        )
    return rho


@dataclass(frozen=True)
class PolarizationTrace:
    """Per-spin z polarizations along a time grid.

    ``per_spin`` is (N+1) x n_times with the target spin in row 0 and I_k
    in row k.  ``times`` is in inverse-coupling units; ``omega1`` scales the
    parallel drive-unit time column.
    """

    times: np.ndarray
    per_spin: np.ndarray
    omega1: float

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        per_spin = np.asarray(self.per_spin, dtype=float)
        if times.ndim != 1 or per_spin.ndim != 2 or per_spin.shape[1] != times.size:
            raise ValueError(
                f"shape mismatch: times {times.shape}, per_spin {per_spin.shape}"
            )
        if np.max(np.abs(per_spin)) > 0.5 + POLARIZATION_BOUND_SLACK:
            raise NumericalIntegrityError(
                f"polarization out of bounds: max |P| = {np.max(np.abs(per_spin))!r}"
            )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "per_spin", per_spin)

    @property
    def n_spins(self) -> int:
        return self.per_spin.shape[0] - 1

    @property
    def times_scaled(self) -> np.ndarray:
        """Times in drive units (t * omega1)."""
        return self.times * self.omega1

    @property
    def target(self) -> np.ndarray:
        return self.per_spin[0]

    @property
    def total_i(self) -> np.ndarray:
        """Total polarization of the measuring spins (target excluded)."""
        return self.per_spin[1:].sum(axis=0)

    @property
    def delta_p(self) -> np.ndarray:
        total = self.total_i
        return total - total[0]

    @property
    def total_z(self) -> np.ndarray:
        """Total z component including the target spin."""
        return self.per_spin.sum(axis=0)


def _check_time_grid(times: np.ndarray) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 1:
        raise ValueError("time grid must be a non-empty 1-d array")
    if times[0] != 0.0:
        raise ValueError(f"time grid must start at 0, got {times[0]!r}")
    if times.size > 1 and not np.all(np.diff(times) > 0):
        raise ValueError("time grid must be strictly increasing")
    return times


def evolve(
    h: np.ndarray,
    rho0: np.ndarray,
    times,
    omega1: float,
    layout: SystemLayout | None = None,
) -> PolarizationTrace:
    """Evolve rho0 under H and record every spin's z polarization.

    One eigendecomposition of H serves the whole grid: in the eigenbasis
    rho(t) picks up pure phases, so P_k(t) = Tr(Iz_k rho(t)) reduces to
    quadratic forms in the phase vectors.  The trace and the eigenbasis
    populations are constants of this representation; the numerical
    integrity checks are the initial-state validation and the imaginary
    parts of the polarizations, which collect all roundoff of the
    transform.
    """
    h = require_hermitian(np.asarray(h, dtype=complex), what="Hamiltonian")
    rho0 = validate_density(rho0)
    if h.shape != rho0.shape:
        raise ValueError(f"dimension mismatch: H {h.shape} vs rho {rho0.shape}")
    times = _check_time_grid(times)
    if layout is None:
        layout = _layout_for_dimension(h.shape[0])

    lam, v = np.linalg.eigh(h)
    rho_e = v.conj().T @ rho0 @ v
    phases = np.exp(-1j * np.outer(lam, times))

    per_spin = np.empty((layout.total_spins, times.size))
    worst_imag = 0.0
    for slot in range(layout.total_spins):
        zdiag = layout.z_diagonal(slot)
        obs_e = (v.conj().T * zdiag) @ v
        coeff = obs_e * rho_e.T
        values = np.einsum("it,it->t", phases.conj(), coeff @ phases)
        worst_imag = max(worst_imag, float(np.max(np.abs(values.imag))))
        per_spin[slot] = values.real
    if worst_imag > POLARIZATION_IMAG_TOL:
        raise NumericalIntegrityError(
            f"polarization picked up imaginary part {worst_imag:.3e} "
            f"> {POLARIZATION_IMAG_TOL:.1e}"
        )
    return PolarizationTrace(times=times, per_spin=per_spin, omega1=omega1)


def _layout_for_dimension(dim: int) -> SystemLayout:
    total = int(round(np.log2(dim)))
    if 2 ** total != dim or total < 1:
        raise ValueError(f"dimension {dim} is not a power of two")
    return SystemLayout(total - 1)


def density_at(h: np.ndarray, rho0: np.ndarray, t: float) -> np.ndarray:
    """rho(t) = U(t) rho0 U(t)^dagger, reconstructed exactly."""
    u = hermitian_exponential(h, t)
    return u @ np.asarray(rho0, dtype=complex) @ u.conj().T


def cnot_chain(bits, trigger: int = 1) -> tuple[int, ...]:
    """Apply the amplification gate cascade to a basis-state bit pattern.

    ``bits`` holds the target spin first (0 = up, 1 = down), then the
    measuring spins in chain order.  Gate k flips bit k when bit k-1 is in
    the triggering state (down by default), applied in ascending k, so a
    triggering target state propagates a flip down the whole register.
    """
    if trigger not in (0, 1):
        raise ValueError(f"trigger must be 0 or 1, got {trigger!r}")
    state = [int(b) for b in bits]
    if any(b not in (0, 1) for b in state):
        raise ValueError("bits must all be 0 or 1")
    for k in range(1, len(state)):
        if state[k - 1] == trigger:
            state[k] ^= 1
    return tuple(state)
