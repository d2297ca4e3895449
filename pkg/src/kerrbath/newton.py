"""Newtonian trajectory of the system oscillator.

Hamilton's equations keep every action ``I = (q**2 + p**2) / 2`` constant,
so the system point rotates clockwise at the fixed rate
``omega_s + 2 g_s I_s + sum_k g_k I_k``. :func:`newton_trajectory` is that
closed form; :func:`newton_oracle_rk4` integrates the full ``2(N+1)``
equations numerically and is used to check it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, resolve_time, rotation

# Bath-action multiplier in the rotation rate. Hamilton's equations give 1;
# 2 reproduces the doubled bath term ``(p_k**2 + q_k**2) / hbar`` in the
# dimensionless-time form of the trajectory, kept for comparison.
HAMILTON_BATH_FACTOR = 1.0
DOUBLED_BATH_FACTOR = 2.0


class IntegrationError(RuntimeError):
    """The RK4 oracle drifted in energy beyond the requested tolerance."""


@dataclass(frozen=True)
class BathInitialState:
    """Initial bath actions ``I_k = (p_k**2 + q_k**2) / 2``."""

    actions: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.actions, dtype=float).reshape(-1)
        if np.any(a < 0) or not np.all(np.isfinite(a)):
            raise ValueError("bath actions must be finite and non-negative")
        a.setflags(write=False)
        object.__setattr__(self, "actions", a)

    @classmethod
    def zeros(cls, n_modes: int) -> "BathInitialState":
        return cls(np.zeros(n_modes))

    @classmethod
    def from_phase_points(cls, points) -> "BathInitialState":
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return cls(0.5 * (pts[:, 0] ** 2 + pts[:, 1] ** 2))


def _bath_actions(params, bath):
    if bath is None:
        return np.zeros(params.n_modes)
    actions = bath.actions if isinstance(bath, BathInitialState) else np.asarray(bath, dtype=float)
    if actions.shape[-1] != params.n_modes:
        raise ValueError(f"bath has {actions.shape[-1]} modes, params expect {params.n_modes}")
    return actions


def rotation_angle(params: ModelParams, system_action, bath_coupling_sum, t, bath_factor=HAMILTON_BATH_FACTOR):
    """Accumulated rotation angle at physical time ``t``.

    ``bath_coupling_sum`` is ``sum_k g_k I_k``. All arguments broadcast,
    which lets the Monte Carlo sampler rotate many phase points at once.
    """
    rate = params.omega_s + 2.0 * params.g_s * np.asarray(system_action) + bath_factor * np.asarray(bath_coupling_sum)
    return rate * np.asarray(t)


def newton_trajectory(
    params: ModelParams,
    bath: BathInitialState | None = None,
    tau=None,
    *,
    t=None,
    bath_factor: float = HAMILTON_BATH_FACTOR,
) -> np.ndarray:
    """System phase point ``M1[phi_N] R0``; returns shape ``tau.shape + (2,)``.

    ``bath=None`` starts every bath oscillator at rest.
    """
    _, t = resolve_time(params, tau, t)
    actions = _bath_actions(params, bath)
    coupling = float(np.dot(params.spectral.g_k, actions))
    phi = rotation_angle(params, 0.5 * params.r0_sq, coupling, t, bath_factor)
    return rotation(phi) @ params.r0.as_array()


def hamiltonian(params: ModelParams, state: np.ndarray) -> float:
    """Classical energy of ``state = [q_s, p_s, q_1, p_1, ..., q_N, p_N]``."""
    y = np.asarray(state, dtype=float).reshape(-1, 2)
    actions = 0.5 * (y[:, 0] ** 2 + y[:, 1] ** 2)
    i_s, i_b = actions[0], actions[1:]
    g = params.spectral.g_k
    return float(
        params.omega_s * i_s
        + params.g_s * i_s**2
        + params.omega_bath * i_b.sum()
        + i_s * np.dot(g, i_b)
    )


def hamilton_rhs(params: ModelParams, state: np.ndarray) -> np.ndarray:
    """``(dq/dt, dp/dt) = (dH/dp, -dH/dq)`` for every oscillator."""
    y = state.reshape(-1, 2)
    actions = 0.5 * (y[:, 0] ** 2 + y[:, 1] ** 2)
    g = params.spectral.g_k
    rates = np.empty(y.shape[0])
    rates[0] = params.omega_s + 2.0 * params.g_s * actions[0] + np.dot(g, actions[1:])
    rates[1:] = params.omega_bath + g * actions[0]
    out = np.empty_like(y)
    out[:, 0] = rates * y[:, 1]
    out[:, 1] = -rates * y[:, 0]
    return out.reshape(-1)


def newton_oracle_rk4(
    params: ModelParams,
    bath_phase_points,
    t: float,
    step: float,
    energy_tol: float = 1e-10,
) -> np.ndarray:
    """Integrate all ``2(N+1)`` Hamilton equations with classical RK4.

    ``bath_phase_points`` has shape ``(N, 2)``. The last step is shortened to
    land exactly on ``t``. Raises :class:`IntegrationError` when the relative
    energy drift exceeds ``energy_tol`` at any step.
    """
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    bath = np.asarray(bath_phase_points, dtype=float).reshape(-1, 2)
    if bath.shape[0] != params.n_modes:
        raise ValueError(f"got {bath.shape[0]} bath phase points for {params.n_modes} modes")
    y = np.concatenate([params.r0.as_array(), bath.reshape(-1)])
    e0 = hamiltonian(params, y)
    scale = abs(e0) if e0 != 0 else 1.0
    n_steps = int(np.ceil(abs(t) / step - 1e-12))
    h = t / n_steps if n_steps else 0.0
    f = lambda s: hamilton_rhs(params, s)  # noqa: E731
    for _ in range(n_steps):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = abs(hamiltonian(params, y) - e0) / scale
        if drift > energy_tol:
            raise IntegrationError(f"relative energy drift {drift:.3e} exceeds {energy_tol:.1e}; reduce the step")
    return y[:2].copy()
