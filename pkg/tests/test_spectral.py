import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_hermitian, random_state
from sta_tradeoff.errors import DegeneracyError, ValidationError
from sta_tradeoff.spectral import (SIGMA_X, SIGMA_Y, SIGMA_Z, as_state, bures_angle, eigensystem_hermitian,
                                   reconstruct, state_norm_of_operator)


def test_sigma_z_eigensystem():
    es = eigensystem_hermitian(SIGMA_Z)
    np.testing.assert_array_equal(es.eigenvalues, [-1.0, 1.0])
    np.testing.assert_allclose(es.vector(0), [0, 1], atol=1e-15)
    np.testing.assert_allclose(es.vector(1), [1, 0], atol=1e-15)


def test_sigma_x_spectrum():
    es = eigensystem_hermitian(SIGMA_X + 0 * SIGMA_Z)
    np.testing.assert_allclose(es.eigenvalues, [-1.0, 1.0], atol=1e-15)


def test_rescaled_lz_spectrum():
    # characteristic polynomial of [[20, 1], [1, -20]]: lambda^2 - 401 = 0
    es = eigensystem_hermitian(SIGMA_X + 20 * SIGMA_Z)
    np.testing.assert_allclose(es.eigenvalues, [-math.sqrt(401), math.sqrt(401)], rtol=1e-14)
    assert es.eigenvalues[1] == pytest.approx(20.0250, abs=5e-5)


def test_rejects_non_hermitian_and_degenerate():
    with pytest.raises(ValidationError):
        eigensystem_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValidationError):
        eigensystem_hermitian(np.eye(3)[:2])
    with pytest.raises(DegeneracyError):
        eigensystem_hermitian(np.eye(2))


def test_gauge_largest_component_real_positive(rng):
    for dim in (2, 3, 5, 8):
        es = eigensystem_hermitian(random_hermitian(rng, dim))
        for k in range(dim):
            v = es.vector(k)
            j = np.argmax(np.abs(v))
            assert v[j].imag == pytest.approx(0.0, abs=1e-15)
            assert v[j].real > 0


def test_residual_and_orthonormality(rng):
    for dim in (2, 4, 8):
        H = random_hermitian(rng, dim)
        es = eigensystem_hermitian(H)
        for k in range(dim):
            lam, v = es.eigenvalues[k], es.vector(k)
            assert np.linalg.norm(H @ v - lam * v) <= 1e-10 * (1 + abs(lam))
        np.testing.assert_allclose(es.eigenvectors.conj().T @ es.eigenvectors, np.eye(dim), atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_reconstruction(dim, seed):
    H = random_hermitian(np.random.default_rng(seed), dim)
    np.testing.assert_allclose(reconstruct(eigensystem_hermitian(H)), H, atol=1e-9)


def test_state_norm_examples():
    rng = np.random.default_rng(3)
    psi = random_state(rng, 4)
    assert state_norm_of_operator(np.eye(4), psi) == pytest.approx(1.0, abs=1e-15)
    g = eigensystem_hermitian(SIGMA_X).vector(0)
    assert state_norm_of_operator(-2.5 * SIGMA_Y, g) == pytest.approx(2.5, abs=1e-14)
    H = SIGMA_X + 20 * SIGMA_Z
    assert state_norm_of_operator(H, eigensystem_hermitian(H).vector(0)) == pytest.approx(math.sqrt(401), rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(dim=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_state_norm_squared_is_expectation_of_square(dim, seed):
    rng = np.random.default_rng(seed)
    A = random_hermitian(rng, dim)
    psi = random_state(rng, dim)
    expect = np.vdot(psi, A @ A @ psi).real
    assert abs(state_norm_of_operator(A, psi) ** 2 - expect) <= 1e-10 * max(1.0, expect)


def test_state_norm_dimension_mismatch():
    with pytest.raises(ValidationError):
        state_norm_of_operator(SIGMA_Z, np.array([1, 0, 0], dtype=complex))


def test_bures_angle_examples():
    a = np.array([1, 0], dtype=complex)
    assert bures_angle(a, a) == 0.0
    assert bures_angle(a, np.array([0, 1], dtype=complex)) == pytest.approx(math.pi / 2, abs=1e-15)
    # rescaled LZ ground states at h=20 and h=0, explicit eigenvectors
    g20 = eigensystem_hermitian(SIGMA_X + 20 * SIGMA_Z).vector(0)
    g0 = eigensystem_hermitian(SIGMA_X).vector(0)
    half_angle = abs(math.atan2(1, 20) - math.atan2(1, 0)) / 2
    assert bures_angle(g20, g0) == pytest.approx(half_angle, abs=1e-12)
    assert bures_angle(g20, g0) == pytest.approx(0.76042, abs=5e-6)


@settings(max_examples=60, deadline=None)
@given(dim=st.integers(2, 6), seed=st.integers(0, 2**32 - 1), phase=st.floats(-math.pi, math.pi))
def test_bures_angle_symmetry_and_phase_invariance(dim, seed, phase):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng, dim), random_state(rng, dim)
    L = bures_angle(a, b)
    assert L == bures_angle(b, a)
    assert 0.0 <= L <= math.pi / 2
    assert bures_angle(np.exp(1j * phase) * a, b) == pytest.approx(L, abs=1e-12)
    assert L == pytest.approx(math.acos(min(1.0, abs(np.vdot(a, b)))), abs=1e-7)


def test_as_state_requires_normalization():
    with pytest.raises(ValidationError):
        as_state(np.array([1, 1], dtype=complex))
