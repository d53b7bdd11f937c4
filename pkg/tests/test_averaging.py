import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinamp.averaging import (
    AveragingJob,
    average_hamiltonian,
    chain_zz_common_period,
    compare_effective,
    pauli_coefficients,
    rotation_identity_residuals,
    stable_average,
    toggled_operator,
)
from spinamp.errors import ConvergenceError
from spinamp.models import (
    ModelSpec,
    build_graph,
    chain_couplings,
    chain_effective_m1,
    zz_coupling_part,
)
from spinamp.spin_algebra import (
    SystemLayout,
    single_spin_operator,
    slot_permutation_operator,
    transverse_field,
)


def two_spin_job(d=1.0, w=0.15, drive_slot=0):
    layout = SystemLayout(1)
    h_zz = np.diag(d * layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    v = (w / 2) * single_spin_operator(layout, drive_slot, "x")
    return layout, AveragingJob(h_zz=h_zz, v_rf=v, t_c=4 * np.pi / d)


def test_toggled_at_zero_is_identity_map():
    _, job = two_spin_job()
    assert np.allclose(toggled_operator(job, 0.0), job.v_rf, atol=1e-15)


def test_toggled_two_spin_analytic_x():
    # X-component rule: X1 cos(d t / 2) + 2 Y1 Z2 sin(d t / 2)
    layout = SystemLayout(1)
    d = 1.3
    h_zz = np.diag(d * layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    x = single_spin_operator(layout, 0, "x")
    y = single_spin_operator(layout, 0, "y")
    z2 = np.diag(layout.z_diagonal(1)).astype(complex)
    job = AveragingJob(h_zz=h_zz, v_rf=x, t_c=1.0)
    for t in (0.3, 1.7, 4.0):
        expected = x * np.cos(d * t / 2) + 2 * (y @ z2) * np.sin(d * t / 2)
        assert np.allclose(toggled_operator(job, t), expected, atol=1e-13)


def test_toggled_two_spin_analytic_y():
    # Y-component rule: Y1 cos(d t / 2) - 2 X1 Z2 sin(d t / 2)
    layout = SystemLayout(1)
    d = 0.9
    h_zz = np.diag(d * layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    x = single_spin_operator(layout, 0, "x")
    y = single_spin_operator(layout, 0, "y")
    z2 = np.diag(layout.z_diagonal(1)).astype(complex)
    job = AveragingJob(h_zz=h_zz, v_rf=y, t_c=1.0)
    for t in (0.5, 2.2):
        expected = y * np.cos(d * t / 2) - 2 * (x @ z2) * np.sin(d * t / 2)
        assert np.allclose(toggled_operator(job, t), expected, atol=1e-13)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.1, 10.0),
    t=st.floats(0.0, 20.0),
    pair=st.sampled_from([(1, 2), (0, 1), (2, 1), (0, 2)]),
)
def test_rotation_identities_random(a, t, pair):
    layout = SystemLayout(2)
    rx, ry = rotation_identity_residuals(layout, pair[0], pair[1], a, t)
    assert rx < 1e-12
    assert ry < 1e-12


def test_toggled_isospectral():
    layout = SystemLayout(2)
    graph = chain_couplings(2, 2, 1.0, 1.0)
    job = AveragingJob(
        h_zz=zz_coupling_part(layout, graph),
        v_rf=transverse_field(layout, 0.2),
        t_c=32 * np.pi,
    )
    ref = np.sort(np.linalg.eigvalsh(job.v_rf))
    for t in (0.7, 3.1, 12.0):
        lam = np.sort(np.linalg.eigvalsh(toggled_operator(job, t)))
        assert np.allclose(lam, ref, atol=1e-12)


def test_average_with_zero_coupling_returns_drive():
    layout = SystemLayout(1)
    v = transverse_field(layout, 0.15)
    job = AveragingJob(h_zz=np.zeros((4, 4), dtype=complex), v_rf=v, t_c=5.0)
    assert np.allclose(average_hamiltonian(job), v, atol=1e-13)


def test_two_spin_average_is_zero_over_period():
    _, job = two_spin_job()
    avg = average_hamiltonian(job)
    assert np.max(np.abs(avg)) < 1e-10


def test_three_spin_average_matches_projector():
    # middle spin with two equal couplings averages to the gated drive
    layout = SystemLayout(2)
    d, w = 1.0, 0.15
    z0, z1, z2 = (layout.z_diagonal(k) for k in range(3))
    h_zz = np.diag(d * (z0 * z1 + z1 * z2)).astype(complex)
    v = (w / 2) * single_spin_operator(layout, 1, "x")
    job = AveragingJob(h_zz=h_zz, v_rf=v, t_c=4 * np.pi / d)
    numeric = average_hamiltonian(job)
    x1 = single_spin_operator(layout, 1, "x")
    analytic = (w / 4) * x1 * (1.0 - 4.0 * z0 * z2)[None, :]
    assert np.max(np.abs(numeric - analytic)) < 1e-8


def test_average_stable_under_quadrature_doubling():
    _, job = two_spin_job()
    a1 = average_hamiltonian(AveragingJob(job.h_zz, job.v_rf, job.t_c, 512))
    a2 = average_hamiltonian(AveragingJob(job.h_zz, job.v_rf, job.t_c, 1024))
    assert np.max(np.abs(a1 - a2)) < 1e-10


def test_average_raises_off_period():
    # an interval that is not a common period fails the doubling check
    layout, _ = two_spin_job()
    h_zz = np.diag(layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    v = transverse_field(layout, 0.15)
    job = AveragingJob(h_zz=h_zz, v_rf=v, t_c=1.0, n_quad=8)
    with pytest.raises(ConvergenceError):
        average_hamiltonian(job)


def test_stable_average_reaches_period_multiple():
    # growing from a period multiple stays converged
    layout = SystemLayout(1)
    h_zz = np.diag(layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    v = transverse_field(layout, 0.15)
    job = AveragingJob(h_zz=h_zz, v_rf=v, t_c=4 * np.pi, n_quad=256)
    avg, t_c = stable_average(job, tol=1e-9)
    assert t_c >= 8 * np.pi
    assert np.max(np.abs(avg)) < 1e-9  # single-pair drive averages away


def test_stable_average_raises_when_never_commensurate():
    layout = SystemLayout(1)
    h_zz = np.diag(layout.z_diagonal(0) * layout.z_diagonal(1)).astype(complex)
    v = transverse_field(layout, 0.15)
    job = AveragingJob(h_zz=h_zz, v_rf=v, t_c=1.0, n_quad=64)
    with pytest.raises(ConvergenceError):
        stable_average(job, max_doublings=4, tol=1e-10)


def test_chain_common_period():
    assert chain_zz_common_period(1.0, 1.0, 2) == pytest.approx(32 * np.pi)
    with pytest.raises(ValueError):
        chain_zz_common_period(1.0, 1.0, 3)
    with pytest.raises(ValueError):
        chain_zz_common_period(1.0, 0.5, 2)


# --- comparisons -----------------------------------------------------------

def chain_job(n_spins, omega1=0.15):
    spec = ModelSpec(geometry="chain_1d", interaction="zz_weak",
                     n_spins=n_spins, m_range=1, omega1=omega1)
    layout = spec.layout()
    graph = build_graph(spec)
    job = AveragingJob(
        h_zz=zz_coupling_part(layout, graph),
        v_rf=transverse_field(layout, omega1),
        t_c=32 * np.pi,
    )
    return spec, layout, graph, job


def test_compare_identical_inputs():
    layout = SystemLayout(2)
    op = transverse_field(layout, 0.15)
    report = compare_effective(op, op, layout)
    assert report.max_abs_diff == 0.0
    assert report.frobenius == 0.0
    assert report.xy_residuals == {}


def test_chain_average_bulk_terms_match_analytic():
    spec, layout, graph, job = chain_job(5)
    numeric = average_hamiltonian(job)
    w = spec.omega1
    coeffs = pauli_coefficients(numeric, layout, cutoff=1e-10)
    # bulk spins 2 and 3: w/8 on X_k, -w/8 on X_k Z_{k-1} Z_{k+1}
    assert coeffs["X2"] == pytest.approx(w / 8, abs=1e-8)
    assert coeffs["Z1 X2 Z3"] == pytest.approx(-w / 8, abs=1e-8)
    assert coeffs["X3"] == pytest.approx(w / 8, abs=1e-8)
    assert coeffs["Z2 X3 Z4"] == pytest.approx(-w / 8, abs=1e-8)


def test_chain_average_edge_residuals_itemized():
    # the analytic edge terms differ from the exact average; the report
    # itemizes them rather than hiding them
    spec, layout, graph, job = chain_job(5)
    numeric = average_hamiltonian(job)
    analytic = chain_effective_m1(layout, graph, spec.omega1)
    report = compare_effective(analytic, numeric, layout, term_cutoff=1e-9)
    w = spec.omega1
    res = report.xy_residuals
    # frozen from the closed-form average of the end spins:
    # target spin: every transverse term averages away
    assert res["XS"] == pytest.approx((w / 16, 0.0), abs=1e-8)
    # first measuring spin: exact average is (w/4) X1 (1 - 4 Z_S Z_2)
    assert res["X1"] == pytest.approx((w / 16, w / 8), abs=1e-8)
    assert res["ZS X1 Z2"] == pytest.approx((-w / 16, -w / 8), abs=1e-8)
    # spin N-1 is a genuine bulk spin in the exact average but the analytic
    # form has no term for it
    assert res["X4"] == pytest.approx((0.0, w / 8), abs=1e-8)
    assert res["Z3 X4 Z5"] == pytest.approx((0.0, -w / 8), abs=1e-8)
    # last spin: exact average vanishes, analytic keeps an edge term
    assert res["X5"] == pytest.approx((w / 16, 0.0), abs=1e-8)
    # longitudinal terms are reported separately, not as residuals
    assert "ZS" in report.z_sector
    assert all(
        any(term[0] in "XY" for term in label.split()) for label in res
    )


def test_mirror_symmetry_without_target_couplings():
    # with the target decoupled the average commutes with chain reversal
    spec = ModelSpec(geometry="chain_1d", interaction="zz_weak",
                     n_spins=4, m_range=1, g1=0.0)
    layout = spec.layout()
    graph = build_graph(spec)
    job = AveragingJob(
        h_zz=zz_coupling_part(layout, graph),
        v_rf=transverse_field(layout, spec.omega1),
        t_c=4 * np.pi,
    )
    avg = average_hamiltonian(job)
    perm = (0, 4, 3, 2, 1)  # reverse the chain, keep the target slot
    u = slot_permutation_operator(layout, perm)
    assert np.max(np.abs(u @ avg @ u.conj().T - avg)) < 1e-12


def test_job_validation():
    layout = SystemLayout(1)
    x = single_spin_operator(layout, 0, "x")
    with pytest.raises(ValueError):
        AveragingJob(h_zz=x, v_rf=x, t_c=1.0)  # not diagonal
    z = np.diag(layout.z_diagonal(0)).astype(complex)
    with pytest.raises(ValueError):
        AveragingJob(h_zz=z, v_rf=x, t_c=-1.0)
    with pytest.raises(ValueError):
        AveragingJob(h_zz=z, v_rf=x, t_c=1.0, n_quad=1)


def test_pauli_coefficients_roundtrip():
    layout = SystemLayout(1)
    x0 = single_spin_operator(layout, 0, "x")
    z1 = single_spin_operator(layout, 1, "z")
    op = 0.3 * x0 + 0.5 * (x0 @ (2 * z1))
    coeffs = pauli_coefficients(op, layout, cutoff=1e-12)
    assert coeffs == pytest.approx({"XS": 0.15, "XS Z1": 0.25})
