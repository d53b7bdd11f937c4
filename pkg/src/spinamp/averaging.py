"""Zeroth-order time averaging of the drive term in the coupling frame.

The drive (transverse) part of a model Hamiltonian, conjugated into the
interaction frame of the diagonal coupling part, becomes the periodically
modulated operator

    V(t) = U(t) V U(t)^dagger,   U(t) = exp(-i t H_zz),

whose time average over a full modulation period governs the slow
dynamics.  This module computes that average by quadrature and compares it
against the analytic effective Hamiltonians of :mod:`spinamp.models`,
itemizing discrepancies term by term in a labelled Pauli-product basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .spin_algebra import (
    PAULI,
    SystemLayout,
    require_hermitian,
    single_spin_operator,
    symmetrize,
)

DIAGONALITY_TOL = 1e-12
QUADRATURE_TOL = 1e-10
BREAKDOWN_MAX_SPINS = 6


@dataclass(frozen=True)
class AveragingJob:
    """Inputs of one averaging computation.

    ``h_zz`` must be diagonal in the computational basis (the z-z coupling
    part); ``v_rf`` is the operator to average (the transverse drive);
    ``t_c`` the averaging interval, ideally a common period of all phase
    factors of ``h_zz``.
    """

    h_zz: np.ndarray
    v_rf: np.ndarray
    t_c: float
    n_quad: int = 1024

    def __post_init__(self):
        h = np.asarray(self.h_zz, dtype=complex)
        v = require_hermitian(np.asarray(self.v_rf, dtype=complex), what="v_rf")
        if h.shape != v.shape:
            raise ValueError(f"shape mismatch: h_zz {h.shape} vs v_rf {v.shape}")
        off = np.max(np.abs(h - np.diag(np.diag(h))))
        if off > DIAGONALITY_TOL:
            raise ValueError(
                f"h_zz must be diagonal in the computational basis "
                f"(max off-diagonal {off:.3e})"
            )
        if np.max(np.abs(np.diag(h).imag)) > DIAGONALITY_TOL:
            raise ValueError("h_zz diagonal must be real")
        if not self.t_c > 0:
            raise ValueError(f"t_c must be positive, got {self.t_c}")
        if self.n_quad < 2:
            raise ValueError(f"n_quad must be >= 2, got {self.n_quad}")
        object.__setattr__(self, "h_zz", h)
        object.__setattr__(self, "v_rf", v)

    @property
    def levels(self) -> np.ndarray:
        return np.diag(self.h_zz).real


def toggled_operator(job: AveragingJob, t: float) -> np.ndarray:
    """V(t) = U(t) v U(t)^dagger with U(t) = exp(-i t h_zz) (diagonal)."""
    if not np.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    phases = np.exp(-1j * job.levels * t)
    return (phases[:, None] * job.v_rf) * phases.conj()[None, :]


def average_hamiltonian(job: AveragingJob, check_tol: float = QUADRATURE_TOL) -> np.ndarray:
    """Trapezoid average of the toggled operator over [0, t_c].

    The integrand is entrywise exp(-i w_jk t) v_jk, smooth and (for a
    well-chosen t_c) periodic, so the uniform trapezoid rule is spectrally
    accurate.  A doubling check guards the quadrature: if the result moves
    by more than ``check_tol`` when n_quad is doubled, a ConvergenceError
    with diagnostics is raised.
    """
    coarse = _trapezoid_average(job, job.n_quad)
    fine = _trapezoid_average(job, 2 * job.n_quad)
    drift = np.max(np.abs(fine - coarse))
    if drift > check_tol:
        raise ConvergenceError(
            f"averaging quadrature not converged: doubling n_quad from "
            f"{job.n_quad} moved the average by {drift:.3e} > {check_tol:.1e} "
            f"(t_c={job.t_c!r}; the interval is probably not a common period)"
        )
    return symmetrize(fine)


def _trapezoid_average(job: AveragingJob, n_quad: int) -> np.ndarray:
    ts = np.linspace(0.0, job.t_c, n_quad + 1)
    weights = np.full(n_quad + 1, 1.0)
    weights[0] = weights[-1] = 0.5
    # kernel_jk = sum_t w_t exp(-i (E_j - E_k) t), assembled as one product
    # of per-level phase matrices instead of n_quad full-size exponentials.
    phases = np.exp(-1j * np.outer(job.levels, ts))
    kernel = (phases * weights) @ phases.conj().T
    return job.v_rf * kernel / n_quad


def stable_average(
    job: AveragingJob,
    max_doublings: int = 6,
    tol: float = 1e-8,
) -> tuple[np.ndarray, float]:
    """Grow t_c until the average stabilizes; returns (average, t_c used).

    Fallback for coupling sets without an obvious common period: the
    interval is doubled until two consecutive averages agree within
    ``tol``.
    """
    current = AveragingJob(job.h_zz, job.v_rf, job.t_c, job.n_quad)
    prev = _trapezoid_average(current, current.n_quad)
    for _ in range(max_doublings):
        grown = AveragingJob(job.h_zz, job.v_rf, 2 * current.t_c, 2 * current.n_quad)
        nxt = _trapezoid_average(grown, grown.n_quad)
        if np.max(np.abs(nxt - prev)) < tol:
            return symmetrize(nxt), grown.t_c
        prev, current = nxt, grown
    raise ConvergenceError(
        f"average did not stabilize after {max_doublings} interval doublings "
        f"(final t_c={current.t_c!r})"
    )


def chain_zz_common_period(d1: float, g1: float, m_range: int) -> float:
    """Common period of the chain coupling phases for m_range <= 2.

    With couplings d1, d1/8 and matched g's, level differences are integer
    multiples of d1/16, giving the fundamental period 32*pi/d1.  For other
    coupling sets use :func:`stable_average`.
    """
    if m_range > 2:
        raise ValueError("closed-form period available for m_range <= 2 only")
    if g1 not in (d1, 0.0):
        raise ValueError("closed-form period assumes g1 equal to d1 (or zero)")
    return 32.0 * np.pi / d1


def pauli_labels(total_spins: int):
    """All nontrivial Pauli-product labels on ``total_spins`` slots."""
    for combo in itertools.product("1xyz", repeat=total_spins):
        if all(c == "1" for c in combo):
            continue
        yield combo


def _label_text(combo) -> str:
    parts = []
    for slot, c in enumerate(combo):
        if c == "1":
            continue
        name = "S" if slot == 0 else str(slot)
        parts.append(f"{c.upper()}{name}")
    return " ".join(parts)


def pauli_coefficients(op: np.ndarray, layout: SystemLayout, cutoff: float = 0.0) -> dict[str, float]:
    """Expand an operator over Pauli-product strings (unit-normalized).

    Coefficients are Tr(P op)/dim for products P of Pauli matrices
    (eigenvalues +-1); spin operators appear with the corresponding powers
    of 1/2 folded into the coefficient.  Only real parts are returned
    (Hermitian inputs); entries at or below ``cutoff`` in magnitude are
    dropped.
    """
    n = layout.total_spins
    if n > BREAKDOWN_MAX_SPINS:
        raise ValueError(
            f"Pauli breakdown limited to {BREAKDOWN_MAX_SPINS} spins, got {n}"
        )
    dim = layout.dimension
    sigma = {axis: single_spin_operator(layout, 0, axis) for axis in "xyz"}
    # Single-slot sigma matrices embedded on demand; building each product
    # string costs one kron chain of 2x2s.
    out = {}
    for combo in pauli_labels(n):
        p = np.eye(1, dtype=complex)
        for c in combo:
            p = np.kron(p, np.eye(2, dtype=complex) if c == "1" else PAULI[c])
        coeff = np.trace(p @ op) / dim
        if abs(coeff) > cutoff:
            out[_label_text(combo)] = float(coeff.real)
    return out


def _is_z_sector(label: str) -> bool:
    return all(term[0] == "Z" for term in label.split())


@dataclass(frozen=True)
class DiscrepancyReport:
    """Per-term comparison of an analytic operator against a numeric one.

    ``xy_residuals`` lists transverse-sector terms (anything containing an
    X or Y factor) where the two disagree; ``z_sector`` lists the
    longitudinal terms of the analytic operator, which the average of a
    purely transverse drive cannot produce and which are therefore reported
    separately rather than counted as disagreement.
    """

    max_abs_diff: float
    frobenius: float
    xy_max_abs_diff: float
    xy_residuals: dict[str, tuple[float, float]]
    z_sector: dict[str, tuple[float, float]]

    def lines(self) -> list[str]:
        out = [
            f"max |analytic - numeric|        = {self.max_abs_diff:.3e}",
            f"frobenius distance              = {self.frobenius:.3e}",
            f"transverse-sector max |diff|    = {self.xy_max_abs_diff:.3e}",
        ]
        if self.xy_residuals:
            out.append("transverse-sector residuals (analytic vs numeric):")
            for label, (a, b) in self.xy_residuals.items():
                out.append(f"  {label:24s} {a:+.6f}  vs  {b:+.6f}")
        else:
            out.append("transverse-sector residuals: none")
        if self.z_sector:
            out.append("longitudinal terms (reported separately):")
            for label, (a, b) in self.z_sector.items():
                out.append(f"  {label:24s} {a:+.6f}  vs  {b:+.6f}")
        return out


def compare_effective(
    analytic: np.ndarray,
    numeric: np.ndarray,
    layout: SystemLayout,
    term_cutoff: float = 1e-9,
) -> DiscrepancyReport:
    """Itemized discrepancy between an analytic operator and a numeric average."""
    analytic = np.asarray(analytic, dtype=complex)
    numeric = np.asarray(numeric, dtype=complex)
    if analytic.shape != numeric.shape:
        raise ValueError(f"shape mismatch: {analytic.shape} vs {numeric.shape}")
    diff = analytic - numeric
    coeff_a = pauli_coefficients(analytic, layout, cutoff=0.0)
    coeff_n = pauli_coefficients(numeric, layout, cutoff=0.0)
    xy_residuals = {}
    z_sector = {}
    xy_max = 0.0
    for label in sorted(set(coeff_a) | set(coeff_n)):
        a = coeff_a.get(label, 0.0)
        b = coeff_n.get(label, 0.0)
        if _is_z_sector(label):
            if max(abs(a), abs(b)) > term_cutoff:
                z_sector[label] = (a, b)
            continue
        xy_max = max(xy_max, abs(a - b))
        if abs(a - b) > term_cutoff:
            xy_residuals[label] = (a, b)
    return DiscrepancyReport(
        max_abs_diff=float(np.max(np.abs(diff))),
        frobenius=float(np.linalg.norm(diff)),
        xy_max_abs_diff=xy_max,
        xy_residuals=xy_residuals,
        z_sector=z_sector,
    )


def rotation_identity_residuals(
    layout: SystemLayout,
    z_slot: int,
    partner_slot: int,
    a: float,
    t: float,
) -> tuple[float, float]:
    """Residuals of the two toggling rotation identities.

    For U = exp(-i t a Z_j Z_k) the x and y operators of spin j transform
    as X_j -> X_j cos(a t/2) + 2 Y_j Z_k sin(a t/2) and
    Y_j -> Y_j cos(a t/2) - 2 X_j Z_k sin(a t/2).  Returns the max-abs
    deviation of each identity evaluated as matrices.
    """
    zj = layout.z_diagonal(z_slot)
    zk = layout.z_diagonal(partner_slot)
    phases = np.exp(-1j * a * t * zj * zk)
    x = single_spin_operator(layout, z_slot, "x")
    y = single_spin_operator(layout, z_slot, "y")
    zk_op = np.diag(zk)
    c, s = np.cos(a * t / 2), np.sin(a * t / 2)
    lhs_x = (phases[:, None] * x) * phases.conj()[None, :]
    lhs_y = (phases[:, None] * y) * phases.conj()[None, :]
    rhs_x = x * c + 2 * (y @ zk_op) * s
    rhs_y = y * c - 2 * (x @ zk_op) * s
    return (
        float(np.max(np.abs(lhs_x - rhs_x))),
        float(np.max(np.abs(lhs_y - rhs_y))),
    )
