"""Brute-force checks for the closed-form moments.

* :func:`fock_oracle_moments` evolves the joint system+bath state in the
  number basis, where the Hamiltonian is diagonal, and traces out the bath
  by explicit thermal-weighted summation over every truncated configuration.
* :func:`montecarlo_liouville_moments` samples the initial Wigner density
  and pushes each phase point along its exact Newtonian rotation.

Neither route uses the attenuation-factor products of the closed forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import ModelParams, resolve_time
from .newton import rotation_angle
from .quantum import (
    QuantumMoments,
    ReducedDensityMatrix,
    coherent_amplitudes,
    fock_cutoff,
    poisson_tail,
)


@dataclass(frozen=True)
class FockOracleConfig:
    """Truncations for the Fock oracle; ``None`` picks the smallest admissible value."""

    bath_truncation: int | None = None
    system_truncation: int | None = None
    tolerance: float = 1e-12

    def resolve(self, params: ModelParams) -> tuple[int, int]:
        x = params.thermal_occupation_ratio
        k = self.bath_truncation
        if k is None:
            if x == 0:
                k = 0
            else:
                # x^(K+1) / (1 - x) < tol
                k = max(0, math.ceil(math.log(self.tolerance * (1 - x)) / math.log(x) - 1))
        if bath_tail(x, k) >= self.tolerance:
            raise ValueError(f"bath truncation K={k} leaves thermal tail {bath_tail(x, k):.2e} >= {self.tolerance:.1e}")
        n_max = self.system_truncation if self.system_truncation is not None else fock_cutoff(params)
        tail = poisson_tail(params, n_max)
        if tail >= self.tolerance:
            raise ValueError(f"system truncation n_max={n_max} leaves tail {tail:.2e} >= {self.tolerance:.1e}")
        return k, n_max


def bath_tail(x: float, k: int) -> float:
    """Thermal population of one mode above occupation ``k``."""
    return x ** (k + 1) / (1.0 - x) if x < 1 else math.inf


def joint_energies(params: ModelParams, n: np.ndarray, bath_occupations: np.ndarray) -> np.ndarray:
    """Eigenvalues ``E(n, {n_k}) / hbar``, shape ``(configs, len(n))``."""
    h = params.hbar
    g = params.spectral.g_k
    ns = n + 0.5
    nk = bath_occupations + 0.5
    system = params.omega_s * ns + h * params.g_s * ns**2
    bath = params.omega_bath * nk.sum(-1)
    coupling = h * np.outer(nk @ g, ns)
    return system[None, :] + bath[:, None] + coupling


def attenuation_series(params: ModelParams, m: int, tau=None, config: FockOracleConfig | None = None, *, t=None) -> np.ndarray:
    """``C_m`` as the truncated thermal sum ``prod_k sum_n (1 - x) x^n exp(-i m g_k hbar t n)``."""
    config = config or FockOracleConfig()
    _, t = resolve_time(params, tau, t)
    k, _ = config.resolve(params)
    x = params.thermal_occupation_ratio
    n = np.arange(k + 1)
    w = (1.0 - x) * x**n
    theta = np.multiply.outer(m * params.hbar * np.asarray(t, dtype=float), params.spectral.g_k)
    terms = np.exp(-1j * theta[..., None] * n) @ w
    return np.prod(terms, axis=-1)


def fock_oracle_density(params: ModelParams, tau=None, config: FockOracleConfig | None = None, *, t=None) -> ReducedDensityMatrix:
    config = config or FockOracleConfig()
    if params.n_modes > 3:
        raise ValueError("the Fock oracle enumerates (K+1)^N bath states; keep N <= 3")
    tau, t = resolve_time(params, tau, t)
    k, n_max = config.resolve(params)
    x = params.thermal_occupation_ratio
    n = np.arange(n_max + 1, dtype=float)
    c = coherent_amplitudes(params.alpha0, n_max)
    occ = np.arange(k + 1)
    # repeat=0 yields the single empty configuration, shape (1, 0)
    configs = np.array(list(itertools.product(occ, repeat=params.n_modes)), dtype=float).reshape(-1, params.n_modes) if params.n_modes else np.zeros((1, 0))
    weights = np.prod((1.0 - x) * x**configs, axis=1)
    rho_bath = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    chunk = 4096
    for start in range(0, configs.shape[0], chunk):
        cfg = configs[start : start + chunk]
        u = np.exp(-1j * joint_energies(params, n, cfg) * float(t))
        rho_bath += (u.T * weights[start : start + chunk]) @ u.conj()
    rho = np.outer(c, c.conj()) * rho_bath
    return ReducedDensityMatrix(entries=rho, tau=float(tau), hbar=params.hbar)


def fock_oracle_moments(params: ModelParams, tau=None, config: FockOracleConfig | None = None, *, t=None) -> QuantumMoments:
    return fock_oracle_density(params, tau, config, t=t).moments()


# -- Monte Carlo ---------------------------------------------------------------


@dataclass(frozen=True)
class MonteCarloConfig:
    n_samples: int = 1_000_000
    rng_seed: int = 20240917
    antithetic: bool = False
    chunk_size: int = 50_000

    def __post_init__(self):
        if self.n_samples < 10_000:
            raise ValueError("n_samples must be >= 10^4")
        if self.antithetic and self.n_samples % 2:
            raise ValueError("antithetic sampling needs an even n_samples")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class MonteCarloMoments:
    """Sample moments with their standard errors; trailing axis ``(q, p)``."""

    tau: np.ndarray
    centroid: np.ndarray
    quadratic: np.ndarray
    variances: np.ndarray
    centroid_stderr: np.ndarray
    quadratic_stderr: np.ndarray
    variances_stderr: np.ndarray
    n_samples: int

    @property
    def mean_variance(self) -> np.ndarray:
        return self.variances.mean(-1)


def _chunk_streams(config: MonteCarloConfig):
    """One Philox stream per chunk, so results do not depend on chunk order."""
    units = config.n_samples // 2 if config.antithetic else config.n_samples
    n_chunks = -(-units // config.chunk_size)
    children = np.random.SeedSequence(config.rng_seed).spawn(n_chunks)
    for i, ss in enumerate(children):
        size = min(config.chunk_size, units - i * config.chunk_size)
        yield size, np.random.Generator(np.random.Philox(ss))


def _features(params, t_grid, sys_xi, bath_xi):
    """Per-sample ``(q, p, q^2, p^2)`` on the time grid, shape ``(T, S, 4)``."""
    h = params.hbar
    q = params.r0.q + math.sqrt(h / 2.0) * sys_xi[:, 0]
    p = params.r0.p + math.sqrt(h / 2.0) * sys_xi[:, 1]
    if params.n_modes:
        width = math.sqrt(params.z * h / 2.0)
        actions = 0.5 * width**2 * (bath_xi**2).sum(-1)
        coupling = actions @ params.spectral.g_k
    else:
        coupling = np.zeros_like(q)
    phi = rotation_angle(params, 0.5 * (q * q + p * p), coupling, t_grid[:, None])
    c, s = np.cos(phi), np.sin(phi)
    qt = c * q + s * p
    pt = -s * q + c * p
    return np.stack([qt, pt, qt * qt, pt * pt], -1)


def montecarlo_liouville_moments(params: ModelParams, tau_grid=None, config: MonteCarloConfig | None = None, *, t=None) -> MonteCarloMoments:
    """Sampled classical moments on a time grid.

    With ``antithetic=True`` every Gaussian draw is paired with its negative
    and pair averages are the independent units for the error estimate.
    Variance errors use the delta method on the ``(q, q^2)`` covariance.
    """
    config = config or MonteCarloConfig()
    tau, t = resolve_time(params, tau_grid, t)
    t_grid = np.atleast_1d(t)
    n_t = t_grid.size
    shift = None
    s1 = np.zeros((n_t, 4))
    s2 = np.zeros((n_t, 4, 4))
    partial1, partial2 = [], []
    units = 0
    for size, rng in _chunk_streams(config):
        sys_xi = rng.standard_normal((size, 2))
        bath_xi = rng.standard_normal((size, params.n_modes, 2))
        f = _features(params, t_grid, sys_xi, bath_xi)
        if config.antithetic:
            f = 0.5 * (f + _features(params, t_grid, -sys_xi, -bath_xi))
        if shift is None:
            shift = f.mean(1, keepdims=True)
        y = f - shift
        partial1.append(y.sum(1))
        partial2.append(np.einsum("tsi,tsj->tij", y, y))
        units += size
    s1 = np.sum(np.stack(partial1), axis=0)
    s2 = np.sum(np.stack(partial2), axis=0)
    mean_y = s1 / units
    cov = s2 / units - np.einsum("ti,tj->tij", mean_y, mean_y)
    cov *= units / (units - 1)
    mean = mean_y + shift[:, 0, :]
    se = np.sqrt(np.einsum("tii->ti", cov) / units)

    centroid = mean[:, :2]
    quadratic = mean[:, 2:]
    variances = quadratic - centroid**2
    var_se = np.empty_like(variances)
    for j in range(2):
        # grad of <x^2> - <x>^2 wrt (<x>, <x^2>)
        gx = -2.0 * centroid[:, j]
        c_xx = cov[:, j, j]
        c_x2 = cov[:, j, j + 2]
        c_22 = cov[:, j + 2, j + 2]
        var_se[:, j] = np.sqrt(np.maximum(gx * gx * c_xx + 2 * gx * c_x2 + c_22, 0.0) / units)
    squeeze = np.ndim(tau) == 0
    pick = (lambda a: a[0]) if squeeze else (lambda a: a)
    return MonteCarloMoments(
        tau=np.asarray(tau),
        centroid=pick(centroid),
        quadratic=pick(quadratic),
        variances=pick(variances),
        centroid_stderr=pick(se[:, :2]),
        quadratic_stderr=pick(se[:, 2:]),
        variances_stderr=pick(var_se),
        n_samples=config.n_samples,
    )
