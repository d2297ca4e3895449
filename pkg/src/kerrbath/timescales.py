"""Decoherence, revival and determinism time scales plus the
quantum-classical divergence ``D(tau)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import optimize

from .liouville import liouville_centroid, liouville_factors, liouville_variances
from .model import ModelParams
from .quantum import quantum_centroid, quantum_factors, quantum_variances

REVIVAL_TIME = math.pi
# G_2 / Omega for the Gaussian couplings as N -> infinity, quoted to two digits.
THERMODYNAMIC_G2_RATIO = 0.89


def decoherence_times(params: ModelParams) -> tuple[float, float]:
    """``(tau_DQ, tau_DL) = sqrt(8) (g_s/G_2) (sinh, tanh)(beta hbar omega / 2)``.

    Both are ``inf`` for closed dynamics.
    """
    g2 = params.spectral.g2_norm
    if g2 == 0:
        return math.inf, math.inf
    half = params.beta_hbar_omega / 2.0
    pref = math.sqrt(8.0) * params.g_s / g2
    return pref * math.sinh(half), pref * math.tanh(half)


# -- free particle ---------------------------------------------------------------


@dataclass(frozen=True)
class EhrenfestFreeParticle:
    mass: float
    delta_x0: float
    resolution_m: float = 2.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.mass <= 0 or self.delta_x0 <= 0 or self.hbar <= 0:
            raise ValueError("mass, delta_x0 and hbar must be positive")

    @property
    def ehrenfest_time(self) -> float:
        """``t_E = 2 m dx0^2 / hbar``."""
        return 2.0 * self.mass * self.delta_x0**2 / self.hbar

    @property
    def determinism_time(self) -> float:
        """Instant the uncertainty product reaches ``M hbar / 2``."""
        m = self.resolution_m
        if m <= 1:
            raise ValueError(f"resolution M={m} <= 1: the uncertainty product never stays below it")
        return self.ehrenfest_time * m * math.sqrt(1.0 - 1.0 / m**2)


def free_particle_spreading(fp: EhrenfestFreeParticle, t):
    """``dx(t) dp(t) = (hbar/2) sqrt(1 + (t / t_E)^2)`` for a minimum-uncertainty packet."""
    return 0.5 * fp.hbar * np.sqrt(1.0 + (np.asarray(t, dtype=float) / fp.ehrenfest_time) ** 2)


# -- determinism break -----------------------------------------------------------


@dataclass(frozen=True)
class DeterminismBreak:
    exact: float
    expansion: float
    closed: float
    closed_exact: float


def _coherence_log(params: ModelParams, tau, include_bath: bool):
    f = quantum_factors(params, tau)
    log_g = np.log(f.gamma1) if include_bath else 0.0
    return 2.0 * (log_g + f.log_lambda1)


def _first_root(residual, upper, n_scan=4096, xtol=1e-12):
    grid = np.linspace(0.0, upper, n_scan + 1)[1:]
    vals = residual(grid)
    idx = np.flatnonzero(vals > 0)
    if idx.size == 0:
        raise ValueError("mean variance never reaches the resolution before tau = pi/2")
    i = idx[0]
    lo = grid[i - 1] if i > 0 else 0.0
    return optimize.bisect(lambda x: float(residual(x)), lo, grid[i], xtol=xtol, maxiter=200)


def determinism_break_time(params: ModelParams, resolution_m: float = 2.0) -> DeterminismBreak:
    """First instant the quantum mean variance reaches ``M hbar / 2``.

    Solves ``1 - Gamma_1^2 Lambda_1^2 = (hbar / R0^T R0)(M - 1)`` by bisection on
    the first sign change in ``(0, pi/2]``. Also returns the small-time
    expansion, the closed-dynamics value
    ``sqrt((M - 1) hbar^2 / (2 (R0^T R0)^2))`` and the exact closed-dynamics
    root (same equation with the bath switched off).
    """
    r = params.r0_sq
    h = params.hbar
    m = float(resolution_m)
    if r == 0 or not 1.0 < m < 1.0 + r / h:
        raise ValueError(f"resolution M={m} outside (1, 1 + R0^T R0 / hbar) = (1, {1 + r / h})")
    target = h * (m - 1.0) / r

    def residual(include_bath):
        return lambda tau: -np.expm1(_coherence_log(params, tau, include_bath)) - target

    exact = _first_root(residual(True), math.pi / 2)
    closed_exact = _first_root(residual(False), math.pi / 2)
    closed = math.sqrt((m - 1.0) * h * h / (2.0 * r * r))
    tau_dq, _ = decoherence_times(params)
    if math.isinf(tau_dq):
        expansion = closed
    else:
        expansion = closed / math.sqrt(1.0 + (closed / tau_dq) ** 2 * 2.0 * r / ((m - 1.0) * h))
    return DeterminismBreak(exact=exact, expansion=expansion, closed=closed, closed_exact=closed_exact)


# -- divergence ------------------------------------------------------------------


def divergence_d(params: ModelParams, tau) -> np.ndarray:
    """``D = |Gamma_1Q^2 Lambda_1Q^2 - Gamma_1L^2 Lambda_1L^2| R0^T R0 / 2``."""
    fq = quantum_factors(params, tau)
    fl = liouville_factors(params, tau)
    return np.abs(fq.coherence1_sq - fl.coherence1_sq) * 0.5 * params.r0_sq


@dataclass(frozen=True)
class DivergenceComponents:
    from_centroids: np.ndarray
    from_variances: np.ndarray
    reduced: np.ndarray

    def max_disagreement(self) -> float:
        return float(
            max(
                np.max(np.abs(self.from_centroids - self.reduced)),
                np.max(np.abs(self.from_variances - self.reduced)),
            )
        )


def divergence_components(params: ModelParams, tau) -> DivergenceComponents:
    """``D`` from centroid norms, from mean variances, and from the reduced form."""
    rq = quantum_centroid(params, tau)
    rl = liouville_centroid(params, tau)
    vq = quantum_variances(params, tau).mean(-1)
    vl = liouville_variances(params, tau).mean(-1)
    return DivergenceComponents(
        from_centroids=0.5 * np.abs((rq**2).sum(-1) - (rl**2).sum(-1)),
        from_variances=np.abs(vq - vl),
        reduced=divergence_d(params, tau),
    )


# -- temperature bound -----------------------------------------------------------


@dataclass(frozen=True)
class TemperatureBound:
    """``k_B T / (hbar omega)`` against ``g_s / (2 Omega)``.

    ``thermodynamic_bound`` keeps the unrounded constant
    ``sqrt(8) / (2 pi 0.89)`` in front of ``g_s / Omega``; ``exact_criterion``
    is ``tau_DQ < pi`` with the finite-N coupling norm.
    """

    ratio: float
    bound: float
    satisfied: bool
    thermodynamic_bound: float
    thermodynamic_satisfied: bool
    tau_dq: float
    exact_criterion: bool


def temperature_bound(params: ModelParams) -> TemperatureBound:
    if params.capital_omega == 0 or params.is_closed:
        raise ValueError("temperature bound needs a coupled bath (capital_omega > 0)")
    ratio = 1.0 / params.beta_hbar_omega
    bound = params.g_s / (2.0 * params.capital_omega)
    thermo = math.sqrt(8.0) / (2.0 * math.pi * THERMODYNAMIC_G2_RATIO) * params.g_s / params.capital_omega
    tau_dq, _ = decoherence_times(params)
    return TemperatureBound(
        ratio=ratio,
        bound=bound,
        satisfied=ratio > bound,
        thermodynamic_bound=thermo,
        thermodynamic_satisfied=ratio > thermo,
        tau_dq=tau_dq,
        exact_criterion=tau_dq < REVIVAL_TIME,
    )


# -- report ----------------------------------------------------------------------


@dataclass(frozen=True)
class TimescaleReport:
    tau_dq: float
    tau_dl: float
    tau_r: float
    tau_det_exact: float
    tau_det_expansion: float
    tau_det_closed: float
    tau_det_closed_exact: float
    temperature_ratio: float
    bound_satisfied: bool | None
    resolution_m: float

    def to_dict(self):
        return {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in asdict(self).items()}


def timescale_report(params: ModelParams, resolution_m: float = 2.0) -> TimescaleReport:
    tau_dq, tau_dl = decoherence_times(params)
    det = determinism_break_time(params, resolution_m)
    bound = None if params.is_closed else temperature_bound(params).satisfied
    return TimescaleReport(
        tau_dq=tau_dq,
        tau_dl=tau_dl,
        tau_r=REVIVAL_TIME,
        tau_det_exact=det.exact,
        tau_det_expansion=det.expansion,
        tau_det_closed=det.closed,
        tau_det_closed_exact=det.closed_exact,
        temperature_ratio=1.0 / params.beta_hbar_omega,
        bound_satisfied=bound,
        resolution_m=float(resolution_m),
    )
