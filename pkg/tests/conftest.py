"""Shared fixtures and independent test oracles.

The oracles here deliberately avoid the code paths they check: the
propagator oracle is a first-order multiplicative integrator (no
eigendecomposition), and the cascade oracle is the closed-form prefix-XOR
solution of the gate recurrence rather than the sequential loop.
"""

import numpy as np
import pytest

from spinamp.spin_algebra import SystemLayout


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def layout3():
    return SystemLayout(3)


def random_hermitian(rng, dim: int, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = 0.5 * (a + a.conj().T)
    return scale * h / np.sqrt(dim)


def euler_product_unitary(h: np.ndarray, t: float, n_steps: int) -> np.ndarray:
    """First-order product-formula propagator: prod over steps of (1 - i H dt).

    Sidesteps eigendecomposition entirely; error is O(|H| t)^2 / n_steps.
    """
    dim = h.shape[0]
    dt = t / n_steps
    step = np.eye(dim, dtype=complex) - 1j * dt * h
    u = np.eye(dim, dtype=complex)
    for _ in range(n_steps):
        u = step @ u
    return u


def cascade_prefix_xor(bits, trigger: int = 1) -> tuple:
    """Closed-form solution of the gate cascade.

    With trigger = 1 the recurrence c_k = b_k XOR [c_{k-1} == trigger]
    telescopes to the running XOR of the input bits; with trigger = 0 an
    alternating offset appears.
    """
    bits = list(bits)
    out = []
    acc = 0
    for k, b in enumerate(bits):
        acc ^= b
        if trigger == 1:
            out.append(acc)
        else:
            out.append(acc ^ (k % 2))
    return tuple(out)
