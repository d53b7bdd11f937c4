"""Spin-1/2 operator algebra on a labelled multi-spin Hilbert space.

The cluster consists of one target spin S and N measuring spins I_1..I_N,
all spin-1/2.  Slot 0 is S and slot k (1 <= k <= N) is I_k.  Computational
basis states are indexed with slot 0 as the most significant bit; bit value
0 means "up" (aligned with the external field, z-eigenvalue +1/2), so the
all-up state is the first basis vector.

All operators are dense complex matrices.  Spin operators carry angular
momentum normalization (Pauli matrix over two, eigenvalues +-1/2).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import NumericalIntegrityError

HERMITICITY_TOL = 1e-12
UNITARITY_TOL = 1e-10

PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
}
SPIN_HALF = {axis: 0.5 * mat for axis, mat in PAULI.items()}
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class SystemLayout:
    """Slot assignment for a cluster of one S spin plus N I spins."""

    n_i_spins: int

    def __post_init__(self):
        if self.n_i_spins < 0:
            raise ValueError(f"n_i_spins must be >= 0, got {self.n_i_spins}")

    @property
    def total_spins(self) -> int:
        return self.n_i_spins + 1

    @property
    def dimension(self) -> int:
        return 2 ** self.total_spins

    def bit(self, state_index: int, slot: int) -> int:
        """Bit of a basis-state index at ``slot`` (0 = up, 1 = down)."""
        self._check_slot(slot)
        return (state_index >> (self.total_spins - 1 - slot)) & 1

    def basis_index(self, bits) -> int:
        """Basis-state index for a bit pattern ordered slot 0 first."""
        bits = tuple(bits)
        if len(bits) != self.total_spins:
            raise ValueError(f"expected {self.total_spins} bits, got {len(bits)}")
        index = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bits must be 0 or 1, got {b!r}")
            index = (index << 1) | b
        return index

    def z_diagonal(self, slot: int) -> np.ndarray:
        """Diagonal of the z operator at ``slot`` (+1/2 for up, -1/2 for down)."""
        self._check_slot(slot)
        bits = (np.arange(self.dimension) >> (self.total_spins - 1 - slot)) & 1
        return 0.5 - bits.astype(float)

    def _check_slot(self, slot: int) -> None:
        if not 0 <= slot < self.total_spins:
            raise IndexError(
                f"slot {slot} out of range for {self.total_spins}-spin layout"
            )


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, what: str = "operator") -> np.ndarray:
    """Validate Hermiticity within ``tol`` (max-abs entry of A - A^dagger)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise NumericalIntegrityError(
            f"{what} is not Hermitian: max |A - A^H| = {dev:.3e} > {tol:.1e}"
        )
    return a


def symmetrize(a: np.ndarray) -> np.ndarray:
    """(A + A^dagger)/2; use after long arithmetic chains to shed roundoff."""
    return 0.5 * (a + a.conj().T)


def embed_operator(layout: SystemLayout, factors: dict[int, np.ndarray]) -> np.ndarray:
    """Tensor-embed per-slot 2x2 matrices, identity on all other slots."""
    for slot in factors:
        layout._check_slot(slot)
    eye = np.eye(2, dtype=complex)
    mats = [factors.get(slot, eye) for slot in range(layout.total_spins)]
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def single_spin_operator(layout: SystemLayout, slot: int, axis: str) -> np.ndarray:
    """Angular momentum operator (x, y or z) of the spin at ``slot``.

    Slot 0 gives the S-spin operator, slot k >= 1 gives I_k.  Eigenvalues
    are exactly +-1/2, each with multiplicity dimension/2.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    layout._check_slot(slot)
    if axis == "z":
        return np.diag(layout.z_diagonal(slot)).astype(complex)
    return embed_operator(layout, {slot: SPIN_HALF[axis]})


def two_spin_coupling(
    layout: SystemLayout,
    slot_a: int,
    slot_b: int,
    form: str,
    strength: float,
) -> np.ndarray:
    """Secular two-spin coupling between distinct slots.

    ``full_secular`` is strength * [Iz_a Iz_b - (Ix_a Ix_b + Iy_a Iy_b)/2],
    ``zz`` keeps only the Iz_a Iz_b product.  Both commute with the total
    z operator.
    """
    if slot_a == slot_b:
        raise ValueError(f"coupling requires distinct slots, got {slot_a} twice")
    layout._check_slot(slot_a)
    layout._check_slot(slot_b)
    zz = embed_operator(layout, {slot_a: SPIN_HALF["z"], slot_b: SPIN_HALF["z"]})
    if form == "zz":
        return strength * zz
    if form == "full_secular":
        xx = embed_operator(layout, {slot_a: SPIN_HALF["x"], slot_b: SPIN_HALF["x"]})
        yy = embed_operator(layout, {slot_a: SPIN_HALF["y"], slot_b: SPIN_HALF["y"]})
        return strength * (zz - 0.5 * (xx + yy))
    raise ValueError(f"unknown coupling form {form!r} (expected 'zz' or 'full_secular')")


def total_z_operator(layout: SystemLayout) -> np.ndarray:
    """Sum of all z operators, S included (the conserved total z component)."""
    diag = np.zeros(layout.dimension)
    for slot in range(layout.total_spins):
        diag += layout.z_diagonal(slot)
    return np.diag(diag).astype(complex)


def transverse_field(layout: SystemLayout, amplitude: float) -> np.ndarray:
    """(amplitude/2) * (Sx + sum_k Ix_k): the resonant drive on every spin.

    The factor 1/2 is the rotating-frame reduction of a linearly polarized
    drive; the matched amplitude on S and I encodes the double-resonance
    matching condition.
    """
    h = np.zeros((layout.dimension, layout.dimension), dtype=complex)
    for slot in range(layout.total_spins):
        h += single_spin_operator(layout, slot, "x")
    return 0.5 * amplitude * h


def hermitian_exponential(h: np.ndarray, t: float) -> np.ndarray:
    """Exact propagator exp(-i*H*t) via eigendecomposition of Hermitian H."""
    h = require_hermitian(h, what="exponential input")
    lam, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * lam * t)) @ v.conj().T
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > UNITARITY_TOL:
        raise NumericalIntegrityError(
            f"propagator lost unitarity: max |U^H U - 1| = {dev:.3e}"
        )
    return u


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def slot_permutation_operator(layout: SystemLayout, perm) -> np.ndarray:
    """Unitary permutation matrix sending slot i to position perm[i]."""
    perm = tuple(perm)
    if sorted(perm) != list(range(layout.total_spins)):
        raise ValueError(f"perm must be a permutation of 0..{layout.total_spins - 1}")
    dim = layout.dimension
    source = np.arange(dim)
    target = np.zeros(dim, dtype=int)
    for slot in range(layout.total_spins):
        bit = (source >> (layout.total_spins - 1 - slot)) & 1
        target |= bit << (layout.total_spins - 1 - perm[slot])
    u = np.zeros((dim, dim), dtype=complex)
    u[target, source] = 1.0
    return u
