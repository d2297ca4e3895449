import math

import numpy as np
import pytest

from kerrbath.liouville import liouville_centroid, liouville_moments
from kerrbath.model import ModelParams
from kerrbath.oracles import (
    FockOracleConfig,
    MonteCarloConfig,
    attenuation_series,
    bath_tail,
    fock_oracle_density,
    fock_oracle_moments,
    joint_energies,
    montecarlo_liouville_moments,
)
from kerrbath.quantum import quantum_moments, reduced_density_matrix

# -- Fock oracle -----------------------------------------------------------------


def test_closed_kerr_matches_closed_form(closed):
    for tau in (0.1, 0.4, 1.0, 2.5):
        ref = fock_oracle_moments(closed, tau)
        np.testing.assert_allclose(ref.centroid, quantum_moments(closed, tau).centroid, atol=1e-10)


def test_initial_state_is_coherent(small_bath):
    m = fock_oracle_moments(small_bath, 0.0)
    np.testing.assert_allclose(m.centroid, small_bath.r0.as_array(), atol=1e-12)
    np.testing.assert_allclose(m.variances, small_bath.hbar / 2, atol=1e-12)


@pytest.mark.parametrize("tau", [0.1, 0.5, 1.0])
def test_two_mode_oracle_equivalence(tau):
    p = ModelParams(capital_omega=0.1, n_modes=2, beta_hbar_omega=1.0, r0=(2.0, 2.0))
    ref = fock_oracle_moments(p, tau)
    closed = quantum_moments(p, tau)
    np.testing.assert_allclose(closed.centroid, ref.centroid, atol=1e-8)
    np.testing.assert_allclose(closed.variances, ref.variances, atol=1e-8)
    np.testing.assert_allclose(closed.quadratic, ref.quadratic, atol=1e-8)


def test_density_matrix_equivalence(small_bath):
    rho_f = fock_oracle_density(small_bath, 0.8)
    rho = reduced_density_matrix(small_bath, 0.8, rho_f.n_max)
    np.testing.assert_allclose(rho.entries, rho_f.entries, atol=1e-12)


def test_physical_time_api_with_harmonic_system():
    p = ModelParams(g_s=0.0, capital_omega=0.3, n_modes=2, beta_hbar_omega=1.0, r0=(1.0, 0.5))
    ref = fock_oracle_moments(p, t=4.0)
    np.testing.assert_allclose(quantum_moments(p, t=4.0).variances, ref.variances, atol=1e-9)


def test_truncation_checks(open_hot):
    cfg = FockOracleConfig()
    k, n_max = cfg.resolve(open_hot.replace(beta_hbar_omega=1.0))
    x = math.exp(-1.0)
    assert bath_tail(x, k) < 1e-12 <= bath_tail(x, k - 1)
    with pytest.raises(ValueError, match="bath truncation"):
        FockOracleConfig(bath_truncation=3).resolve(open_hot)
    with pytest.raises(ValueError, match="system truncation"):
        FockOracleConfig(system_truncation=5).resolve(open_hot)
    with pytest.raises(ValueError, match="N <= 3"):
        fock_oracle_density(open_hot.replace(n_modes=4), 0.1)


def test_joint_energies_kerr_spacing(closed):
    n = np.arange(5.0)
    e = joint_energies(closed, n, np.zeros((1, 0)))[0]
    # E(n+1) - E(n) = omega_s + 2 hbar g_s (n + 1)
    np.testing.assert_allclose(np.diff(e), closed.omega_s + 2 * closed.g_s * (n[:-1] + 1), rtol=1e-14)


def test_thermal_series_converges_to_product():
    p = ModelParams(capital_omega=0.8, n_modes=3, beta_hbar_omega=0.5)
    from kerrbath.quantum import attenuation_C

    tau = np.linspace(0, 5, 21)
    np.testing.assert_allclose(attenuation_series(p, -2, tau), attenuation_C(p, -2, tau).value, atol=1e-11)


# -- Monte Carlo -----------------------------------------------------------------


def test_config_validation():
    with pytest.raises(ValueError):
        MonteCarloConfig(n_samples=100)
    with pytest.raises(ValueError):
        MonteCarloConfig(n_samples=10_001, antithetic=True)
    with pytest.raises(ValueError):
        MonteCarloConfig(rng_seed=-1)


def test_reproducible(open_hot):
    cfg = MonteCarloConfig(n_samples=20_000, rng_seed=5)
    a = montecarlo_liouville_moments(open_hot, [0.3, 1.0], cfg)
    b = montecarlo_liouville_moments(open_hot, [0.3, 1.0], cfg)
    np.testing.assert_array_equal(a.quadratic, b.quadratic)
    c = montecarlo_liouville_moments(open_hot, [0.3, 1.0], MonteCarloConfig(n_samples=20_000, rng_seed=6))
    assert not np.array_equal(a.quadratic, c.quadratic)


def test_chunking_does_not_change_the_stream(open_hot):
    a = montecarlo_liouville_moments(open_hot, 0.5, MonteCarloConfig(n_samples=40_000, chunk_size=10_000))
    b = montecarlo_liouville_moments(open_hot, 0.5, MonteCarloConfig(n_samples=40_000, chunk_size=10_000))
    np.testing.assert_array_equal(a.centroid, b.centroid)


def test_initial_moments(small_bath):
    mc = montecarlo_liouville_moments(small_bath, 0.0, MonteCarloConfig(n_samples=100_000))
    assert np.all(np.abs(mc.centroid - small_bath.r0.as_array()) < 3 * mc.centroid_stderr)
    assert np.all(np.abs(mc.variances - small_bath.hbar / 2) < 3 * mc.variances_stderr)


def test_stderr_scales_as_root_n(open_hot):
    tau = np.linspace(0.1, 2.0, 5)
    a = montecarlo_liouville_moments(open_hot, tau, MonteCarloConfig(n_samples=100_000, rng_seed=1))
    b = montecarlo_liouville_moments(open_hot, tau, MonteCarloConfig(n_samples=200_000, rng_seed=2))
    ratio = a.quadratic_stderr / b.quadratic_stderr
    np.testing.assert_allclose(ratio, math.sqrt(2), rtol=0.05)


def test_antithetic_cancels_centroid_at_zero(small_bath):
    mc = montecarlo_liouville_moments(small_bath, 0.0, MonteCarloConfig(n_samples=20_000, antithetic=True))
    np.testing.assert_allclose(mc.centroid, small_bath.r0.as_array(), atol=1e-12)


def test_closed_centroid_decay_curve(closed):
    tau = np.linspace(0, math.pi, 50)
    mc = montecarlo_liouville_moments(closed, tau, MonteCarloConfig(n_samples=200_000, antithetic=True))
    diff = np.abs(liouville_centroid(closed, tau) - mc.centroid)
    assert np.all(diff <= 3 * mc.centroid_stderr + 1e-12)


def test_open_centroid_norm_curve(open_hot):
    # thick line of the open-dynamics centroid figure, checked component-wise
    tau = np.linspace(0, 4 * math.pi, 20)
    mc = montecarlo_liouville_moments(open_hot, tau, MonteCarloConfig(n_samples=200_000, antithetic=True))
    lm = liouville_moments(open_hot, tau)
    assert np.all(np.abs(lm.centroid - mc.centroid) <= 3 * mc.centroid_stderr + 1e-12)
