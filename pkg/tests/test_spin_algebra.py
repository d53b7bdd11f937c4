import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import euler_product_unitary, random_hermitian
from spinamp.errors import NumericalIntegrityError
from spinamp.spin_algebra import (
    SystemLayout,
    commutator,
    hermitian_exponential,
    single_spin_operator,
    slot_permutation_operator,
    symmetrize,
    total_z_operator,
    transverse_field,
    two_spin_coupling,
)


def test_single_spin_z_convention():
    layout = SystemLayout(0)
    z = single_spin_operator(layout, 0, "z")
    assert np.allclose(z, np.diag([0.5, -0.5]))


def test_layout_properties():
    layout = SystemLayout(7)
    assert layout.total_spins == 8
    assert layout.dimension == 256
    assert layout.bit(0, 0) == 0
    assert layout.bit(2 ** 7, 0) == 1  # S slot is the most significant bit
    assert layout.basis_index([1, 0, 0, 0, 0, 0, 0, 0]) == 128


def test_layout_slot_errors():
    layout = SystemLayout(2)
    with pytest.raises(IndexError):
        single_spin_operator(layout, 3, "x")
    with pytest.raises(ValueError):
        single_spin_operator(layout, 0, "q")


@settings(max_examples=30, deadline=None)
@given(n=st.integers(0, 4), data=st.data())
def test_su2_commutator(n, data):
    layout = SystemLayout(n)
    slot = data.draw(st.integers(0, n))
    x = single_spin_operator(layout, slot, "x")
    y = single_spin_operator(layout, slot, "y")
    z = single_spin_operator(layout, slot, "z")
    assert np.allclose(commutator(x, y), 1j * z, atol=1e-14)


def test_tensor_embedding_eigenvalue():
    # basis state "S up, I1 up, I2 down" has I1^z eigenvalue +1/2
    layout = SystemLayout(2)
    index = layout.basis_index([0, 0, 1])
    z1 = single_spin_operator(layout, 1, "z")
    assert z1[index, index] == pytest.approx(0.5)
    z2 = single_spin_operator(layout, 2, "z")
    assert z2[index, index] == pytest.approx(-0.5)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(0, 4), axis=st.sampled_from("xyz"), data=st.data())
def test_spin_operator_trace_square_spectrum(n, axis, data):
    layout = SystemLayout(n)
    slot = data.draw(st.integers(0, n))
    op = single_spin_operator(layout, slot, axis)
    assert abs(np.trace(op)) < 1e-14
    assert np.allclose(op @ op, 0.25 * np.eye(layout.dimension), atol=1e-14)
    lam = np.sort(np.linalg.eigvalsh(op))
    half = layout.dimension // 2
    assert np.allclose(lam[:half], -0.5, atol=1e-12)
    assert np.allclose(lam[half:], 0.5, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    axes=st.tuples(st.sampled_from("xyz"), st.sampled_from("xyz")),
    data=st.data(),
)
def test_disjoint_slots_commute(axes, data):
    n = data.draw(st.integers(1, 4))
    layout = SystemLayout(n)
    slot_a = data.draw(st.integers(0, n))
    slot_b = data.draw(st.integers(0, n).filter(lambda s: s != slot_a))
    a = single_spin_operator(layout, slot_a, axes[0])
    b = single_spin_operator(layout, slot_b, axes[1])
    assert np.max(np.abs(commutator(a, b))) < 1e-14


def test_two_spin_full_secular_matrix():
    # two spins, coupling 1: diagonal (1/4, -1/4, -1/4, 1/4) plus
    # flip-flop element -1/4 between the mixed states
    layout = SystemLayout(1)
    h = two_spin_coupling(layout, 0, 1, "full_secular", 1.0)
    expected = np.diag([0.25, -0.25, -0.25, 0.25]).astype(complex)
    expected[1, 2] = expected[2, 1] = -0.25
    assert np.allclose(h, expected, atol=1e-15)


def test_two_spin_zz_diagonal():
    layout = SystemLayout(2)
    h = two_spin_coupling(layout, 1, 2, "zz", 0.7)
    assert np.max(np.abs(h - np.diag(np.diag(h)))) == 0


@pytest.mark.parametrize("form", ["zz", "full_secular"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_coupling_commutes_with_total_z(form, n):
    layout = SystemLayout(n)
    h = two_spin_coupling(layout, 1, n, form, 1.3)
    tz = total_z_operator(layout)
    assert np.max(np.abs(commutator(h, tz))) < 1e-14


def test_two_spin_coupling_errors():
    layout = SystemLayout(2)
    with pytest.raises(ValueError):
        two_spin_coupling(layout, 1, 1, "zz", 1.0)
    with pytest.raises(ValueError):
        two_spin_coupling(layout, 0, 1, "xy", 1.0)


def test_exponential_identity_at_zero(rng):
    h = random_hermitian(rng, 8)
    assert np.allclose(hermitian_exponential(h, 0.0), np.eye(8), atol=1e-14)


def test_exponential_two_pi_rotation():
    # a 2*pi rotation of a half-integer spin is -1
    layout = SystemLayout(0)
    z = single_spin_operator(layout, 0, "z")
    u = hermitian_exponential(z, 2 * np.pi)
    assert np.allclose(u, -np.eye(2), atol=1e-12)


def test_exponential_group_law(rng):
    h = random_hermitian(rng, 16)
    for t1, t2 in rng.uniform(-4, 4, size=(5, 2)):
        lhs = hermitian_exponential(h, t1) @ hermitian_exponential(h, t2)
        rhs = hermitian_exponential(h, t1 + t2)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_exponential_vs_product_formula(rng):
    # independent oracle: 2^14-step first-order multiplicative integrator
    h = random_hermitian(rng, 16, scale=1.0)
    t = 1.0
    exact = hermitian_exponential(h, t)
    approx = euler_product_unitary(h, t, 2 ** 14)
    assert np.max(np.abs(exact - approx)) < 1e-4


def test_exponential_rejects_non_hermitian(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    with pytest.raises(NumericalIntegrityError):
        hermitian_exponential(a, 1.0)


def test_commutator_basics(rng):
    a = random_hermitian(rng, 8)
    assert np.max(np.abs(commutator(a, a))) == 0
    with pytest.raises(ValueError):
        commutator(np.eye(4), np.eye(8))


def test_symmetrize():
    a = np.array([[1.0, 2.0], [0.0, 3.0]], dtype=complex)
    s = symmetrize(a)
    assert np.allclose(s, s.conj().T)


def test_transverse_field_structure():
    layout = SystemLayout(1)
    h = transverse_field(layout, 0.3)
    x0 = single_spin_operator(layout, 0, "x")
    x1 = single_spin_operator(layout, 1, "x")
    assert np.allclose(h, 0.15 * (x0 + x1), atol=1e-15)


def test_slot_permutation_swaps_operators():
    layout = SystemLayout(2)
    # reverse the two measuring spins, keep the target in place
    u = slot_permutation_operator(layout, (0, 2, 1))
    z1 = single_spin_operator(layout, 1, "z")
    z2 = single_spin_operator(layout, 2, "z")
    assert np.allclose(u @ z1 @ u.conj().T, z2, atol=1e-15)
    assert np.allclose(u @ u.conj().T, np.eye(layout.dimension), atol=1e-15)
    with pytest.raises(ValueError):
        slot_permutation_operator(layout, (0, 1, 1))
