"""Model parameters, bath spectral density and time conventions.

The system is a quartic (Kerr) oscillator with harmonic frequency ``omega_s``
and nonlinearity ``g_s``, coupled through its number operator to ``n_modes``
bath oscillators of common frequency ``omega_bath`` held at inverse
temperature ``beta`` (stored through the dimensionless ``beta_hbar_omega``).

Phase-space coordinates are scaled so that ``(q**2 + p**2) / 2`` is the
oscillator action; both carry units of sqrt(action).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Any

import numpy as np

PARAM_KEYS = (
    "hbar",
    "omega_s",
    "g_s",
    "omega_bath",
    "capital_omega",
    "n_modes",
    "beta_hbar_omega",
    "q0",
    "p0",
)


@dataclass(frozen=True)
class PhaseVector:
    """A point ``(q, p)`` of the oscillator phase space."""

    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise ValueError(f"phase vector components must be finite, got {self}")

    @property
    def norm_sq(self) -> float:
        """``q**2 + p**2``."""
        return self.q * self.q + self.p * self.p

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p], dtype=float)

    @classmethod
    def from_array(cls, arr) -> "PhaseVector":
        q, p = np.asarray(arr, dtype=float)
        return cls(float(q), float(p))


@dataclass(frozen=True)
class SpectralDensity:
    """Bath couplings ``g_k`` with their sum and Euclidean norm."""

    g_k: np.ndarray
    g1_sum: float
    g2_norm: float

    @property
    def n_modes(self) -> int:
        return int(self.g_k.size)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the oscillator, bath and initial state.

    ``hbar`` is kept explicit so the semiclassical limit can be studied at
    fixed physical time. ``capital_omega == 0`` or ``n_modes == 0`` describe
    closed dynamics.
    """

    hbar: float = 1.0
    omega_s: float = 1.0
    g_s: float = 0.5
    omega_bath: float = 1.0
    capital_omega: float = 0.0
    n_modes: int = 0
    beta_hbar_omega: float = 0.1
    r0: PhaseVector = PhaseVector(2.0, 2.0)

    def __post_init__(self):
        if isinstance(self.r0, (tuple, list, np.ndarray)):
            object.__setattr__(self, "r0", PhaseVector.from_array(self.r0))
        if isinstance(self.n_modes, float) and self.n_modes.is_integer():
            object.__setattr__(self, "n_modes", int(self.n_modes))
        for name in ("hbar", "omega_s", "g_s", "omega_bath", "capital_omega", "beta_hbar_omega"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        if self.omega_bath <= 0:
            raise ValueError(f"omega_bath must be > 0, got {self.omega_bath}")
        if self.beta_hbar_omega <= 0:
            raise ValueError(f"beta_hbar_omega must be > 0, got {self.beta_hbar_omega}")
        for name in ("omega_s", "g_s", "capital_omega"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not isinstance(self.n_modes, (int, np.integer)) or self.n_modes < 0:
            raise ValueError(f"n_modes must be a non-negative integer, got {self.n_modes!r}")
        if self.capital_omega > 0 and self.n_modes < 1:
            raise ValueError("n_modes must be >= 1 when capital_omega > 0")

    # -- derived constants -------------------------------------------------

    @property
    def r0_sq(self) -> float:
        """``R0^T R0 = q0**2 + p0**2``."""
        return self.r0.norm_sq

    @property
    def alpha0(self) -> complex:
        """Coherent-state amplitude, ``(q0 + i p0) / sqrt(2 hbar)``."""
        return complex(self.r0.q, self.r0.p) / math.sqrt(2.0 * self.hbar)

    @property
    def is_closed(self) -> bool:
        return self.capital_omega == 0 or self.n_modes == 0

    @cached_property
    def spectral(self) -> SpectralDensity:
        return build_spectral_density(self)

    @property
    def z(self) -> float:
        return thermal_z(self)

    @property
    def thermal_occupation_ratio(self) -> float:
        """Boltzmann ratio ``exp(-beta hbar omega)`` of adjacent bath levels."""
        return math.exp(-self.beta_hbar_omega)

    def replace(self, **changes) -> "ModelParams":
        if "q0" in changes or "p0" in changes:
            q0 = changes.pop("q0", self.r0.q)
            p0 = changes.pop("p0", self.r0.p)
            changes["r0"] = PhaseVector(float(q0), float(p0))
        return dataclasses.replace(self, **changes)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "hbar": self.hbar,
            "omega_s": self.omega_s,
            "g_s": self.g_s,
            "omega_bath": self.omega_bath,
            "capital_omega": self.capital_omega,
            "n_modes": int(self.n_modes),
            "beta_hbar_omega": self.beta_hbar_omega,
            "q0": self.r0.q,
            "p0": self.r0.p,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelParams":
        missing = [k for k in PARAM_KEYS if k not in data]
        extra = [k for k in data if k not in PARAM_KEYS]
        if missing or extra:
            raise ValueError(f"parameter document keys mismatch: missing={missing}, unexpected={extra}")
        n_modes = data["n_modes"]
        if isinstance(n_modes, float):
            if not n_modes.is_integer():
                raise ValueError(f"n_modes must be integral, got {n_modes}")
            n_modes = int(n_modes)
        return cls(
            hbar=float(data["hbar"]),
            omega_s=float(data["omega_s"]),
            g_s=float(data["g_s"]),
            omega_bath=float(data["omega_bath"]),
            capital_omega=float(data["capital_omega"]),
            n_modes=n_modes,
            beta_hbar_omega=float(data["beta_hbar_omega"]),
            r0=PhaseVector(float(data["q0"]), float(data["p0"])),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "ModelParams":
        return cls.from_json(Path(path).read_text())


def build_spectral_density(params: ModelParams) -> SpectralDensity:
    """Gaussian couplings ``g_k = (Omega/sqrt(N)) exp[-pi (k - N/2)**2 / (2 N**2)]``.

    ``k`` runs over ``1..N`` and the centre ``N/2`` is used literally, so for
    odd ``N`` it sits at a half-integer. With ``capital_omega == 0`` every
    coupling is zero.
    """
    n = int(params.n_modes)
    if n == 0 or params.capital_omega == 0:
        g = np.zeros(n)
    else:
        k = np.arange(1, n + 1, dtype=float)
        k0 = n / 2.0
        g = params.capital_omega / math.sqrt(n) * np.exp(-math.pi * (k - k0) ** 2 / (2.0 * n * n))
    g.setflags(write=False)
    g1 = math.fsum(g)
    g2 = math.sqrt(math.fsum(g * g))
    return SpectralDensity(g_k=g, g1_sum=g1, g2_norm=g2)


def thermal_z(params_or_beta_hbar_omega) -> float:
    """Bath Wigner-width factor ``z = 1 / tanh(beta hbar omega / 2)``.

    Accepts either a :class:`ModelParams` or the bare value of
    ``beta hbar omega``; ``math.inf`` gives the zero-temperature value 1.
    """
    if isinstance(params_or_beta_hbar_omega, ModelParams):
        x = params_or_beta_hbar_omega.beta_hbar_omega
    else:
        x = float(params_or_beta_hbar_omega)
    if not x > 0:
        raise ValueError(f"beta_hbar_omega must be > 0, got {x}")
    return 1.0 / math.tanh(x / 2.0)


def to_tau(params: ModelParams, t):
    """Dimensionless time ``tau = hbar g_s t``."""
    if params.g_s == 0:
        raise ValueError("g_s == 0: dimensionless time is degenerate, use the physical-time API (t=...)")
    return params.hbar * params.g_s * np.asarray(t, dtype=float)


def from_tau(params: ModelParams, tau):
    """Physical time ``t = tau / (hbar g_s)``."""
    if params.g_s == 0:
        raise ValueError("g_s == 0: dimensionless time is degenerate, use the physical-time API (t=...)")
    return np.asarray(tau, dtype=float) / (params.hbar * params.g_s)


def resolve_time(params: ModelParams, tau=None, t=None) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(tau, t)`` as float arrays given exactly one of them.

    Internally every phase is written in physical time, which stays
    well-defined when ``g_s == 0``.
    """
    if (tau is None) == (t is None):
        raise TypeError("pass exactly one of tau or t")
    if tau is not None:
        tau = np.asarray(tau, dtype=float)
        return tau, from_tau(params, tau)
    t = np.asarray(t, dtype=float)
    return params.hbar * params.g_s * t, t


def rotation(chi) -> np.ndarray:
    """Clockwise rotation ``[[cos, sin], [-sin, cos]]``, shape ``chi.shape + (2, 2)``."""
    chi = np.asarray(chi, dtype=float)
    c, s = np.cos(chi), np.sin(chi)
    return np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)


def reflection(chi) -> np.ndarray:
    """Symmetric reflection ``[[cos, sin], [sin, -cos]]``."""
    chi = np.asarray(chi, dtype=float)
    c, s = np.cos(chi), np.sin(chi)
    return np.stack([np.stack([c, s], -1), np.stack([s, -c], -1)], -2)


def quadratic_form(matrix: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """``vec^T matrix vec`` broadcast over leading axes of ``matrix``."""
    return np.einsum("i,...ij,j->...", vec, matrix, vec)
