import math
import warnings

import numpy as np
import pytest

from conftest import random_hermitian
from sta_tradeoff import cd_generic as cg
from sta_tradeoff import landau_zener as lz
from sta_tradeoff import oscillator as osc
from sta_tradeoff.errors import BoundaryError, DegeneracyError, TruncationWarning, ValidationError
from sta_tradeoff.spectral import SIGMA_Y, SIGMA_Z, eigensystem_hermitian, state_norm_of_operator

SQRT8 = math.sqrt(8.0)


def lz_schedule(delta=0.01, tau=1.0):
    p = lz.LZParams(delta, 0.2, -0.4, tau)
    return p, cg.HamiltonianSchedule(2, lambda t: lz.lz_hamiltonian(p, t), tau)


def static_schedule():
    H = np.diag([0.3, 1.1, 2.0]).astype(complex)
    return cg.HamiltonianSchedule(3, lambda t: H, 1.0)


def test_static_schedule():
    s = static_schedule()
    r = cg.counterdiabatic(s, 0.5, level=1)
    assert np.all(r.eigenstate_derivative == 0)
    assert np.all(r.h1 == 0)
    assert r.energy_norm == pytest.approx(1.1, rel=1e-15)


@pytest.mark.parametrize("tau", [1.0, 1e3])
def test_lz_derivative_norm_at_crossing(tau):
    _, s = lz_schedule(tau=tau)
    d = cg.eigenstate_derivative(s, tau / 2, 0, 1e-6 * tau)
    assert np.linalg.norm(d) == pytest.approx(20.0 / tau, rel=1e-6)


def test_lz_h1_matches_closed_form_at_crossing():
    for delta in (0.001, 0.01):
        p, s = lz_schedule(delta, 1.0)
        H1 = cg.cd_hamiltonian(s, 0.5)
        np.testing.assert_allclose(H1, lz.lz_cd_term(p, 0.5), atol=1e-6)
        # sweep towards negative field -> positive sigma_y coefficient |g_d| / (2 tau delta)
        assert H1[1, 0].imag == pytest.approx(0.4 / (2 * delta), rel=1e-6)


def test_oscillator_fock_derivative():
    p = osc.OscillatorParams(1.0, 4.0, 1.0)
    r60 = cg.oscillator_cd(p, 0.5, n_trunc=60)
    r80 = cg.oscillator_cd(p, 0.5, n_trunc=80)
    assert r60.cost_rate == pytest.approx(4 / (SQRT8 * 3), rel=1e-7)
    assert abs(r60.cost_rate - r80.cost_rate) < 1e-9
    assert r80.energy_norm == pytest.approx(math.sqrt(1.5 ** 2 + (4 / (SQRT8 * 3)) ** 2), rel=1e-7)
    assert r80.energy_norm == pytest.approx(1.5723, abs=5e-5)


def test_random_schedule_identities(rng):
    A = random_hermitian(rng, 4)
    B = random_hermitian(rng, 4)
    s = cg.HamiltonianSchedule(4, lambda t: A + t * B, 1.0)
    for level in range(4):
        for t in (0.2, 0.5, 0.8):
            r = cg.counterdiabatic(s, t, level)
            n, d = r.eigenstate, r.eigenstate_derivative
            np.testing.assert_allclose(r.h1 @ n, 1j * d, atol=1e-8)
            assert abs(np.vdot(n, d)) <= 1e-10
            np.testing.assert_allclose(r.h1, r.h1.conj().T, atol=1e-14)
            assert abs(np.vdot(n, r.h1 @ n)) <= 1e-10
            H = s.at(t) + r.h1
            assert r.energy_norm == pytest.approx(state_norm_of_operator(H, n), abs=1e-8)


def test_random_schedule_derivative_against_perturbation_sum(rng):
    # first-order perturbation theory: dn = sum_m |m><m|B|n> / (E_n - E_m)
    A = random_hermitian(rng, 5)
    B = random_hermitian(rng, 5)
    s = cg.HamiltonianSchedule(5, lambda t: A + t * B, 1.0)
    t = 0.4
    es = eigensystem_hermitian(A + t * B)
    for level in range(5):
        n = es.vector(level)
        dn = sum(es.vector(m) * np.vdot(es.vector(m), B @ n) / (es.eigenvalues[level] - es.eigenvalues[m])
                 for m in range(5) if m != level)
        np.testing.assert_allclose(cg.eigenstate_derivative(s, t, level), dn, atol=1e-7)


@pytest.mark.parametrize("tau, t, expected", [(1.0, 0.5, math.sqrt(401)), (1.0, 0.3, None)])
def test_lz_energy_norm(tau, t, expected):
    p, s = lz_schedule(tau=tau)
    r = cg.counterdiabatic(s, t)
    if expected is not None:
        assert r.energy_norm == pytest.approx(expected, rel=1e-8)
        assert r.energy_norm == pytest.approx(20.025, abs=5e-4)
    assert r.energy_norm == pytest.approx(lz.lz_epsilon(p, t), rel=1e-8)
    H = s.at(t) + r.h1
    assert r.energy_norm == pytest.approx(state_norm_of_operator(H, r.eigenstate), abs=1e-8)


def test_fock_matrix():
    p = osc.OscillatorParams(1.0, 4.0, 1.0)
    H = cg.build_oscillator_fock(p, 40, 0.5)
    np.testing.assert_allclose(H, np.diag(3.0 * (np.arange(40) + 0.5)), atol=1e-14)
    with pytest.warns(TruncationWarning):
        H = cg.build_oscillator_fock(p, 80, 1.0, omega_ref=1.0)
    assert eigensystem_hermitian(H).eigenvalues[0] == pytest.approx(2.5, abs=1e-8)
    heavy = osc.OscillatorParams(1.0, 4.0, 1.0, mass=2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        np.testing.assert_array_equal(cg.build_oscillator_fock(heavy, 80, 1.0, 1.0),
                                      cg.build_oscillator_fock(p, 80, 1.0, 1.0))
    with pytest.raises(ValidationError):
        cg.build_oscillator_fock(p, 20, 0.5)


def test_fock_no_warning_when_basis_adequate():
    p = osc.OscillatorParams(1.0, 4.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        cg.build_oscillator_fock(p, 80, 0.5, omega_ref=2.5)


def test_boundary_and_auto_stencil():
    p, s = lz_schedule()
    with pytest.raises(BoundaryError):
        cg.counterdiabatic(s, 0.0)
    with pytest.raises(BoundaryError):
        cg.counterdiabatic(s, 1.0 - 1e-7)
    for t in (0.0, 1.0):
        r = cg.counterdiabatic(s, t, stencil="auto")
        assert r.cost_rate == pytest.approx(lz.lz_cost_rate(p, t), rel=1e-7)


def test_degenerate_point_is_an_error():
    s = cg.HamiltonianSchedule(2, lambda t: (t - 0.5) * SIGMA_Z, 1.0)
    with pytest.raises(DegeneracyError):
        cg.counterdiabatic(s, 0.5)


def test_richardson_consistency_second_order():
    # at a step where stencil error dominates rounding, halving the step cuts the change ~4x
    for sched, t in ((lz_schedule()[1], 0.45), (lz_schedule(0.001)[1], 0.499)):
        d1, d2, err, ok = cg.richardson_consistency(sched, t, fd_step=1e-4)
        assert d2 <= d1
        assert d1 / d2 == pytest.approx(4.0, rel=0.1)
    _, s = lz_schedule()
    assert cg.richardson_consistency(s, 0.5)[3]


def test_richardson_consistency_fails_for_coarse_step():
    _, s = lz_schedule()
    assert not cg.richardson_consistency(s, 0.5, fd_step=0.01)[3]


def test_projection_idempotent(rng):
    for _ in range(20):
        n = rng.normal(size=6) + 1j * rng.normal(size=6)
        n /= np.linalg.norm(n)
        d = rng.normal(size=6) + 1j * rng.normal(size=6)
        once = cg.project_out(d, n)
        np.testing.assert_array_equal(cg.project_out(once, n), once)


@pytest.mark.parametrize("wd", [4.0, -0.75])
def test_fock_oracle_along_fig1_ramps(wd):
    p = osc.OscillatorParams(1.0, wd, 1.0)
    for t in np.linspace(0, 1, 52)[1:-1]:
        r = cg.oscillator_cd(p, t)
        assert r.cost_rate == pytest.approx(osc.osc_cost_rate(p, t), rel=1e-6)
        assert r.energy_norm == pytest.approx(osc.osc_epsilon(p, t), rel=1e-6)


def test_generic_protocol_matches_lz_closed_form():
    p, s = lz_schedule()
    gp = cg.GenericProtocol(s)
    closed = lz.LZProtocol(p)
    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert gp.angle(t) == pytest.approx(closed.angle(t), abs=1e-10)
        assert gp.cost_rate(t) == pytest.approx(closed.cost_rate(t), rel=1e-6)
        assert gp.epsilon(t) == pytest.approx(closed.epsilon(t), rel=1e-8)


def test_linear_interpolation_schedule():
    s = cg.linear_interpolation_schedule(np.diag([1.0, -1.0]), [[0, 1], [1, 0]], 2.0)
    np.testing.assert_allclose(s.at(1.0), [[0.5, 0.5], [0.5, -0.5]])
    with pytest.raises(ValidationError):
        cg.linear_interpolation_schedule(np.eye(2), np.eye(3), 1.0)
