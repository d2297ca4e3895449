"""Exact quantum observables of the reduced Kerr oscillator.

Phase damping leaves populations untouched and multiplies the coherence
``rho[n, n']`` by a bath attenuation factor ``C_{n-n'}``. The centroid and
second moments follow in closed form from ladder-operator traces against
the coherent initial state; all functions accept either dimensionless time
``tau`` or, as keyword ``t``, physical time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .model import ModelParams, quadratic_form, reflection, resolve_time, rotation
from .newton import newton_trajectory

# Logarithms below this are reported as exact zeros.
UNDERFLOW_LOG = -700.0


@dataclass(frozen=True)
class AttenuationFactor:
    """Complex bath factor stored as ``log|value|`` and a continuous phase.

    The phase is accumulated mode by mode from two-argument arctangents, so it
    is continuous in time instead of being wrapped to ``(-pi, pi]``.
    """

    log_modulus: np.ndarray
    phase_angle: np.ndarray

    @property
    def modulus(self) -> np.ndarray:
        return np.exp(self.log_modulus)

    @property
    def value(self) -> np.ndarray:
        return np.exp(self.log_modulus + 1j * self.phase_angle)


def _mode_angles(params: ModelParams, m, t):
    # (g_k / g_s) m tau == m g_k hbar t; trailing axis runs over modes.
    g = params.spectral.g_k
    return np.multiply.outer(np.asarray(m, dtype=float) * params.hbar * np.asarray(t, dtype=float), g)


def attenuation_C(params: ModelParams, m: int, tau=None, *, t=None) -> AttenuationFactor:
    """Thermal average ``prod_k <exp(-i m (g_k/g_s) tau n_k)>`` over the bath.

    Each mode contributes ``(1 - x) / (1 - x exp(-i theta_k))`` with
    ``x = exp(-beta hbar omega)``. The modulus is evaluated as
    ``-(1/2) log1p(sin^2(theta_k/2) / sinh^2(beta hbar omega / 2))``, which
    stays accurate when the factor is close to one.
    """
    _, t = resolve_time(params, tau, t)
    theta = _mode_angles(params, m, t)
    x = params.thermal_occupation_ratio
    sh2 = math.sinh(params.beta_hbar_omega / 2.0) ** 2
    log_mod = -0.5 * np.log1p(np.sin(theta / 2.0) ** 2 / sh2).sum(-1)
    phase = -np.arctan2(x * np.sin(theta), 1.0 - x * np.cos(theta)).sum(-1)
    return AttenuationFactor(np.asarray(log_mod, dtype=float), np.asarray(phase, dtype=float))


@dataclass(frozen=True)
class QuantumFactors:
    """Amplitudes and angles in the quantum centroid and second moments."""

    tau: np.ndarray
    gamma1: np.ndarray
    log_lambda1: np.ndarray
    theta1: np.ndarray
    phi1: np.ndarray
    gamma2: np.ndarray
    log_lambda2: np.ndarray
    theta2: np.ndarray
    phi2: np.ndarray

    @property
    def lambda1(self):
        return _safe_exp(self.log_lambda1)

    @property
    def lambda2(self):
        return _safe_exp(self.log_lambda2)

    @property
    def psi1(self):
        return self.phi1 + self.theta1

    @property
    def psi2(self):
        return self.phi2 + self.theta2

    @property
    def coherence1_sq(self):
        """``Gamma_1^2 Lambda_1^2``, the squared centroid amplitude."""
        return self.gamma1**2 * self.lambda1**2

    @property
    def underflow(self) -> np.ndarray:
        return (self.log_lambda1 < UNDERFLOW_LOG) | (self.log_lambda2 < UNDERFLOW_LOG)


def _safe_exp(log_x):
    log_x = np.asarray(log_x)
    return np.where(log_x < UNDERFLOW_LOG, 0.0, np.exp(np.maximum(log_x, UNDERFLOW_LOG)))


def quantum_factors(params: ModelParams, tau=None, *, t=None) -> QuantumFactors:
    tau, t = resolve_time(params, tau, t)
    r2h = params.r0_sq / params.hbar
    g1 = params.spectral.g1_sum
    c1 = attenuation_C(params, -1, t=t)
    c2 = attenuation_C(params, -2, t=t)
    return QuantumFactors(
        tau=tau,
        gamma1=c1.modulus,
        log_lambda1=-r2h * np.sin(tau) ** 2,
        theta1=c1.phase_angle + 0.5 * g1 * params.hbar * t,
        phi1=2.0 * tau + params.omega_s * t + 0.5 * r2h * np.sin(2.0 * tau),
        gamma2=c2.modulus,
        log_lambda2=-r2h * np.sin(2.0 * tau) ** 2,
        theta2=c2.phase_angle + g1 * params.hbar * t,
        phi2=6.0 * tau + 2.0 * params.omega_s * t + 0.5 * r2h * np.sin(4.0 * tau),
    )


@dataclass(frozen=True)
class QuantumMoments:
    """Centroid, second moments and variances; trailing axis is ``(q, p)``."""

    tau: np.ndarray
    centroid: np.ndarray
    quadratic: np.ndarray
    variances: np.ndarray
    underflow: np.ndarray | None = None

    @property
    def mean_variance(self) -> np.ndarray:
        return self.variances.mean(-1)


def quantum_centroid(params: ModelParams, tau=None, *, t=None, factors: QuantumFactors | None = None) -> np.ndarray:
    """``<q>, <p>`` as ``(Gamma_1 M1[theta_1]) (Lambda_1 M1[phi_1]) R0``."""
    f = factors or quantum_factors(params, tau, t=t)
    amp = (f.gamma1 * f.lambda1)[..., None, None]
    return (amp * rotation(f.theta1) @ rotation(f.phi1)) @ params.r0.as_array()


def quantum_quadratic(params: ModelParams, tau=None, *, t=None, factors: QuantumFactors | None = None) -> np.ndarray:
    """``<q^2>, <p^2>``.

    The oscillating part is ``Gamma_2 Lambda_2 (R0^T M2[psi_2] R0) / 2`` with
    opposite signs on the two components.
    """
    f = factors or quantum_factors(params, tau, t=t)
    r0 = params.r0.as_array()
    base = 0.5 * (params.r0_sq + params.hbar)
    osc = f.gamma2 * f.lambda2 * 0.5 * quadratic_form(reflection(f.psi2), r0)
    return np.stack([base + osc, base - osc], -1)


def quantum_variances(params: ModelParams, tau=None, *, t=None, factors: QuantumFactors | None = None) -> np.ndarray:
    """``Delta q^2, Delta p^2`` from the closed form, not by subtraction."""
    f = factors or quantum_factors(params, tau, t=t)
    r0 = params.r0.as_array()
    a1 = f.coherence1_sq
    iso = 0.5 * params.hbar + 0.5 * params.r0_sq * (1.0 - a1)
    osc = 0.5 * (
        f.gamma2 * f.lambda2 * quadratic_form(reflection(f.psi2), r0)
        - a1 * quadratic_form(reflection(2.0 * f.psi1), r0)
    )
    return np.stack([iso + osc, iso - osc], -1)


def quantum_moments(params: ModelParams, tau=None, *, t=None) -> QuantumMoments:
    f = quantum_factors(params, tau, t=t)
    return QuantumMoments(
        tau=f.tau,
        centroid=quantum_centroid(params, factors=f),
        quadratic=quantum_quadratic(params, factors=f),
        variances=quantum_variances(params, factors=f),
        underflow=f.underflow,
    )


# -- Fock basis ---------------------------------------------------------------


def fock_cutoff(params: ModelParams) -> int:
    """Default system truncation ``ceil(|a|^2 + 10 |a| + 10)``."""
    mu = abs(params.alpha0) ** 2
    return int(math.ceil(mu + 10.0 * math.sqrt(mu) + 10.0))


def poisson_tail(params: ModelParams, n_max: int) -> float:
    """Coherent-state population above ``n_max``."""
    return float(stats.poisson.sf(n_max, abs(params.alpha0) ** 2))


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """``<n|alpha>`` for ``n = 0..n_max``."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """System density matrix in the truncated number basis."""

    entries: np.ndarray
    tau: float
    hbar: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_max(self) -> int:
        return self.dim - 1

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def purity(self) -> float:
        return float(np.real(np.einsum("ij,ji->", self.entries, self.entries)))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def expect_a(self) -> complex:
        n = np.arange(self.dim - 1)
        return complex(np.sum(np.sqrt(n + 1.0) * self.entries[n + 1, n]))

    def expect_a2(self) -> complex:
        n = np.arange(self.dim - 2)
        return complex(np.sum(np.sqrt((n + 1.0) * (n + 2.0)) * self.entries[n + 2, n]))

    def expect_n(self) -> float:
        return float(np.dot(np.arange(self.dim), self.populations()))

    def moments(self) -> QuantumMoments:
        """Moments from ladder-operator traces of this matrix."""
        h = self.hbar
        a = self.expect_a()
        a2 = self.expect_a2()
        nbar = self.expect_n()
        centroid = math.sqrt(2.0 * h) * np.array([a.real, a.imag])
        base = h * (nbar + 0.5)
        quadratic = np.array([base + h * a2.real, base - h * a2.real])
        return QuantumMoments(
            tau=np.asarray(self.tau),
            centroid=centroid,
            quadratic=quadratic,
            variances=quadratic - centroid**2,
        )


def reduced_density_matrix(params: ModelParams, tau=None, n_max: int | None = None, *, t=None) -> ReducedDensityMatrix:
    """Closed-form ``rho_S`` at a single time.

    ``rho[n, n'] = c_n c_n'^* exp(-i (n^2 - n'^2) tau)
    exp(-i (n - n') (tau + omega_s t + G_1 hbar t / 2)) C_{n-n'}``.
    Raises ``ValueError`` if the Poisson tail above ``n_max`` exceeds 1e-12.
    """
    tau, t = resolve_time(params, tau, t)
    if tau.ndim:
        raise ValueError("reduced_density_matrix takes a single time point")
    if n_max is None:
        n_max = fock_cutoff(params)
    tail = poisson_tail(params, n_max)
    if tail >= 1e-12:
        raise ValueError(f"n_max={n_max} leaves coherent-state tail {tail:.2e} >= 1e-12")
    n = np.arange(n_max + 1)
    diff = np.subtract.outer(n, n)
    c = coherent_amplitudes(params.alpha0, n_max)
    ms = np.arange(-n_max, n_max + 1)
    att = attenuation_C(params, ms, t=t)
    c_m = att.value[diff + n_max]
    sq = np.subtract.outer(n**2, n**2)
    linear = float(tau) + params.omega_s * float(t) + 0.5 * params.spectral.g1_sum * params.hbar * float(t)
    phase = np.exp(-1j * (sq * float(tau) + diff * linear))
    rho = np.outer(c, c.conj()) * phase * c_m
    return ReducedDensityMatrix(entries=rho, tau=float(tau), hbar=params.hbar)


# -- semiclassical limit ------------------------------------------------------


@dataclass(frozen=True)
class HbarLimitReport:
    hbars: np.ndarray
    t: float
    gaps: np.ndarray
    gap_over_r0: np.ndarray
    c_modulus: np.ndarray
    c_modulus_limit: float
    monotone: bool

    def to_dict(self):
        return {
            "hbars": self.hbars.tolist(),
            "t": self.t,
            "gaps": self.gaps.tolist(),
            "gap_over_r0": self.gap_over_r0.tolist(),
            "c_modulus": self.c_modulus.tolist(),
            "c_modulus_limit": self.c_modulus_limit,
            "monotone": self.monotone,
        }


def hbar_limit_check(params: ModelParams, t: float, hbar_sequence=(1.0, 0.1, 0.01, 0.001)) -> HbarLimitReport:
    """Distance ``|R_Q - R_N|`` at fixed physical time along decreasing hbar.

    ``R0``, ``g_s``, the couplings and the physical temperature are held
    fixed, so ``beta_hbar_omega`` is rescaled in proportion to hbar. The
    reported ``c_modulus_limit`` is the hbar -> 0 value of ``|C_{-1}(t)|``,
    ``prod_k (1 + (g_k t / (beta omega))^2)^(-1/2)``.
    """
    beta_omega = params.beta_hbar_omega / params.hbar
    hbars = np.asarray(hbar_sequence, dtype=float)
    gaps, mods = [], []
    for h in hbars:
        p = params.replace(hbar=float(h), beta_hbar_omega=beta_omega * float(h))
        rq = quantum_centroid(p, t=t)
        rn = newton_trajectory(p, t=t)
        gaps.append(float(np.linalg.norm(rq - rn)))
        mods.append(float(attenuation_C(p, -1, t=t).modulus))
    g = params.spectral.g_k
    limit = float(np.prod((1.0 + (g * t / beta_omega) ** 2) ** -0.5)) if g.size else 1.0
    gaps = np.array(gaps)
    return HbarLimitReport(
        hbars=hbars,
        t=float(t),
        gaps=gaps,
        gap_over_r0=gaps / math.sqrt(params.r0_sq) if params.r0_sq else gaps,
        c_modulus=np.array(mods),
        c_modulus_limit=limit,
        monotone=bool(np.all(np.diff(gaps) <= 0)),
    )
