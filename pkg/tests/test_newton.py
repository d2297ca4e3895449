import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerrbath.model import ModelParams, from_tau, rotation
from kerrbath.newton import (
    DOUBLED_BATH_FACTOR,
    BathInitialState,
    IntegrationError,
    hamiltonian,
    newton_oracle_rk4,
    newton_trajectory,
)


def test_initial_point(open_hot):
    np.testing.assert_array_equal(newton_trajectory(open_hot, tau=0.0), open_hot.r0.as_array())


@given(tau=st.floats(0, 50), q=st.floats(-5, 5), p=st.floats(-5, 5))
def test_norm_conserved(tau, q, p):
    params = ModelParams(capital_omega=0.1, n_modes=4, r0=(q, p))
    bath = BathInitialState(np.array([0.1, 2.0, 0.0, 3.3]))
    r = newton_trajectory(params, bath, tau)
    assert r @ r == pytest.approx(params.r0_sq, rel=1e-12, abs=1e-12)


def test_norm_conserved_on_grid(closed, tau_grid):
    r = newton_trajectory(closed, tau=tau_grid)
    np.testing.assert_allclose((r**2).sum(-1) / closed.hbar, 8.0, rtol=1e-13)


def test_composition():
    params = ModelParams(capital_omega=0.2, n_modes=3)
    bath = BathInitialState(np.array([0.4, 1.1, 0.2]))
    a, b = 0.37, 1.91
    r_ab = newton_trajectory(params, bath, a + b)
    r_a = newton_trajectory(params, bath, a)
    shifted = params.replace(r0=tuple(r_a))
    np.testing.assert_allclose(newton_trajectory(shifted, bath, b), r_ab, atol=1e-12)


def test_rotation_angle_pi():
    # omega_s = 0, Omega = 0, R0^T R0 / hbar = 8: angle is 8 tau.
    p = ModelParams(omega_s=0.0, r0=(2.0, 2.0))
    r = newton_trajectory(p, tau=math.pi / 8)
    np.testing.assert_allclose(r, -p.r0.as_array(), atol=1e-14)
    y = newton_oracle_rk4(p, np.zeros((0, 2)), float(from_tau(p, math.pi / 8)), 1e-4)
    np.testing.assert_allclose(y, -p.r0.as_array(), atol=1e-9)


def test_independent_of_hbar_in_physical_time():
    base = ModelParams(hbar=1.0, capital_omega=0.3, n_modes=3)
    bath = BathInitialState(np.array([0.5, 1.0, 2.0]))
    ref = newton_trajectory(base, bath, t=3.0)
    for h in (0.1, 0.01, 1e-4):
        np.testing.assert_allclose(newton_trajectory(base.replace(hbar=h), bath, t=3.0), ref, atol=1e-12)


def test_rk4_harmonic_limit():
    p = ModelParams(g_s=0.0, omega_s=1.3, r0=(1.0, 0.5))
    t = 2.0
    y = newton_oracle_rk4(p, np.zeros((0, 2)), t, 1e-3)
    np.testing.assert_allclose(y, rotation(1.3 * t) @ p.r0.as_array(), atol=1e-11)
    np.testing.assert_allclose(y, newton_trajectory(p, t=t), atol=1e-11)


def test_rk4_error_is_fourth_order():
    p = ModelParams(g_s=0.0, omega_s=1.0, r0=(1.0, 0.0))
    exact = rotation(1.0) @ p.r0.as_array()
    errs = [np.linalg.norm(newton_oracle_rk4(p, np.zeros((0, 2)), 1.0, h, energy_tol=1e-3) - exact) for h in (0.1, 0.05)]
    assert errs[0] / errs[1] == pytest.approx(16.0, rel=0.1)


@pytest.fixture
def one_mode():
    return ModelParams(capital_omega=2.0, n_modes=1, omega_s=0.7, r0=(1.2, -0.4))


def test_rk4_matches_closed_form_with_bath(one_mode):
    bath_pt = np.array([[1.5, 0.8]])
    t = float(from_tau(one_mode, 1.0))
    y = newton_oracle_rk4(one_mode, bath_pt, t, 1e-4)
    closed = newton_trajectory(one_mode, BathInitialState.from_phase_points(bath_pt), tau=1.0)
    assert np.max(np.abs(y - closed)) < 1e-8


def test_doubled_bath_term_disagrees_with_rk4(one_mode):
    bath_pt = np.array([[1.5, 0.8]])
    t = float(from_tau(one_mode, 1.0))
    y = newton_oracle_rk4(one_mode, bath_pt, t, 1e-4)
    doubled = newton_trajectory(one_mode, BathInitialState.from_phase_points(bath_pt), tau=1.0, bath_factor=DOUBLED_BATH_FACTOR)
    assert np.max(np.abs(y - doubled)) > 1e-2


def test_rk4_energy_conservation(one_mode):
    bath_pt = np.array([[1.5, 0.8]])
    # reaching tau = pi passes every intermediate drift check at 1e-10
    newton_oracle_rk4(one_mode, bath_pt, float(from_tau(one_mode, math.pi)), 1e-4, energy_tol=1e-10)


def test_rk4_rejects_coarse_step(one_mode):
    with pytest.raises(IntegrationError):
        newton_oracle_rk4(one_mode, np.array([[1.5, 0.8]]), 20.0, 0.2, energy_tol=1e-10)
    with pytest.raises(ValueError):
        newton_oracle_rk4(one_mode, np.array([[1.5, 0.8]]), 1.0, 0.0)
    with pytest.raises(ValueError):
        newton_oracle_rk4(one_mode, np.zeros((2, 2)), 1.0, 0.1)


def test_hamiltonian_value(one_mode):
    y = np.array([1.2, -0.4, 1.5, 0.8])
    i_s, i_b = 0.5 * (1.44 + 0.16), 0.5 * (2.25 + 0.64)
    g = one_mode.spectral.g_k[0]
    expected = 0.7 * i_s + 0.5 * i_s**2 + 1.0 * i_b + g * i_s * i_b
    assert hamiltonian(one_mode, y) == pytest.approx(expected, rel=1e-15)


def test_bath_state_validation():
    with pytest.raises(ValueError):
        BathInitialState(np.array([-1.0]))
    with pytest.raises(ValueError):
        newton_trajectory(ModelParams(capital_omega=0.1, n_modes=2), BathInitialState(np.zeros(3)), 0.1)
