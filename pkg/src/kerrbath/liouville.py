"""Exact Liouvillian (classical-statistical) moments.

The initial density is the Wigner function of the quantum initial state: a
Gaussian of variance ``hbar/2`` per coordinate around ``R0`` for the system
and of variance ``z hbar / 2`` around the origin for each bath mode. Every
phase point rotates rigidly at its own action-dependent rate, so the moments
reduce to Gaussian averages of ``exp(-i angle)`` that can be done in closed
form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, quadratic_form, reflection, resolve_time, rotation
from .quantum import UNDERFLOW_LOG, AttenuationFactor, _safe_exp


def attenuation_D(params: ModelParams, m: int, tau=None, *, t=None) -> AttenuationFactor:
    """``prod_k [1 - i m (g_k/g_s) z tau / 2]^(-1)``.

    Each factor has phase ``arctan(m (g_k/g_s) z tau / 2)``, which lies in
    ``(-pi/2, pi/2)``; summing them gives a continuous total phase.
    """
    _, t = resolve_time(params, tau, t)
    g = params.spectral.g_k
    u = np.multiply.outer(np.asarray(m, dtype=float) * params.z * params.hbar * np.asarray(t, dtype=float) / 2.0, g)
    log_mod = -0.5 * np.log1p(u * u).sum(-1)
    phase = np.arctan(u).sum(-1)
    return AttenuationFactor(np.asarray(log_mod, dtype=float), np.asarray(phase, dtype=float))


def twist_matrix(tau) -> np.ndarray:
    """Orthogonal matrix ``[[1 - tau^2, 2 tau], [-2 tau, 1 - tau^2]] / (1 + tau^2)``."""
    tau = np.asarray(tau, dtype=float)
    eta = 1.0 + tau**2
    a = (1.0 - tau**2) / eta
    b = 2.0 * tau / eta
    return np.stack([np.stack([a, b], -1), np.stack([-b, a], -1)], -2)


def twist_matrix2(tau) -> np.ndarray:
    """``[[1 - 12 tau^2, 2 tau (3 - 4 tau^2)], [-(...), 1 - 12 tau^2]] / (1 + 4 tau^2)^2``.

    Not orthogonal by itself: its norm is ``(1 + 4 tau^2)^(-1/2)``. Together
    with the ``1/eta_2`` inside ``Lambda_2`` it carries the full
    ``(1 + 2 i tau)^(-3)`` prefactor of the second harmonic.
    """
    tau = np.asarray(tau, dtype=float)
    eta2 = 1.0 + 4.0 * tau**2
    a = (1.0 - 12.0 * tau**2) / eta2**2
    b = 2.0 * tau * (3.0 - 4.0 * tau**2) / eta2**2
    return np.stack([np.stack([a, b], -1), np.stack([-b, a], -1)], -2)


@dataclass(frozen=True)
class LiouvilleFactors:
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
        return self.gamma1**2 * self.lambda1**2

    @property
    def underflow(self) -> np.ndarray:
        return (self.log_lambda1 < UNDERFLOW_LOG) | (self.log_lambda2 < UNDERFLOW_LOG)


def liouville_factors(params: ModelParams, tau=None, *, t=None) -> LiouvilleFactors:
    tau, t = resolve_time(params, tau, t)
    r2h = params.r0_sq / params.hbar
    eta1 = 1.0 + tau**2
    eta2 = 1.0 + 4.0 * tau**2
    d1 = attenuation_D(params, 1, t=t)
    d2 = attenuation_D(params, 2, t=t)
    return LiouvilleFactors(
        tau=tau,
        gamma1=d1.modulus,
        log_lambda1=-np.log(eta1) - r2h * tau**2 / eta1,
        theta1=d1.phase_angle,
        phi1=params.omega_s * t + r2h * tau / eta1,
        gamma2=d2.modulus,
        log_lambda2=-np.log(eta2) - 4.0 * r2h * tau**2 / eta2,
        theta2=d2.phase_angle,
        phi2=2.0 * params.omega_s * t + 2.0 * r2h * tau / eta2,
    )


@dataclass(frozen=True)
class LiouvilleMoments:
    """Classical centroid, second moments and variances, trailing axis ``(q, p)``."""

    tau: np.ndarray
    centroid: np.ndarray
    quadratic: np.ndarray
    variances: np.ndarray
    underflow: np.ndarray | None = None

    @property
    def mean_variance(self) -> np.ndarray:
        return self.variances.mean(-1)


def liouville_centroid(params: ModelParams, tau=None, *, t=None, factors: LiouvilleFactors | None = None) -> np.ndarray:
    """``(Gamma_1 M1[theta_1]) (Lambda_1 M1[phi_1]) N(tau) R0``."""
    f = factors or liouville_factors(params, tau, t=t)
    amp = (f.gamma1 * f.lambda1)[..., None, None]
    return (amp * rotation(f.theta1) @ rotation(f.phi1) @ twist_matrix(f.tau)) @ params.r0.as_array()


def liouville_quadratic(params: ModelParams, tau=None, *, t=None, factors: LiouvilleFactors | None = None) -> np.ndarray:
    f = factors or liouville_factors(params, tau, t=t)
    r0 = params.r0.as_array()
    base = 0.5 * (params.r0_sq + params.hbar)
    m = reflection(f.psi2) @ twist_matrix2(f.tau)
    osc = f.gamma2 * f.lambda2 * 0.5 * quadratic_form(m, r0)
    return np.stack([base + osc, base - osc], -1)


def liouville_variances(params: ModelParams, tau=None, *, t=None, factors: LiouvilleFactors | None = None) -> np.ndarray:
    """Closed-form classical variances; the twist enters squared in the centroid term."""
    f = factors or liouville_factors(params, tau, t=t)
    r0 = params.r0.as_array()
    a1 = f.coherence1_sq
    n1 = twist_matrix(f.tau)
    iso = 0.5 * params.hbar + 0.5 * params.r0_sq * (1.0 - a1)
    osc = 0.5 * (
        f.gamma2 * f.lambda2 * quadratic_form(reflection(f.psi2) @ twist_matrix2(f.tau), r0)
        - a1 * quadratic_form(reflection(2.0 * f.psi1) @ n1 @ n1, r0)
    )
    return np.stack([iso + osc, iso - osc], -1)


def liouville_moments(params: ModelParams, tau=None, *, t=None) -> LiouvilleMoments:
    f = liouville_factors(params, tau, t=t)
    return LiouvilleMoments(
        tau=f.tau,
        centroid=liouville_centroid(params, factors=f),
        quadratic=liouville_quadratic(params, factors=f),
        variances=liouville_variances(params, factors=f),
        underflow=f.underflow,
    )
