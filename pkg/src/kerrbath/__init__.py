"""Closed-form quantum, Liouvillian and Newtonian dynamics of a Kerr
oscillator coupled to a phase-damping thermal bath, with brute-force
oracles and time-scale diagnostics."""

from .liouville import (
    LiouvilleMoments,
    attenuation_D,
    liouville_centroid,
    liouville_moments,
    liouville_quadratic,
    liouville_variances,
)
from .model import (
    ModelParams,
    PhaseVector,
    SpectralDensity,
    build_spectral_density,
    from_tau,
    thermal_z,
    to_tau,
)
from .newton import BathInitialState, newton_oracle_rk4, newton_trajectory
from .oracles import (
    FockOracleConfig,
    MonteCarloConfig,
    fock_oracle_moments,
    montecarlo_liouville_moments,
)
from .quantum import (
    AttenuationFactor,
    QuantumMoments,
    ReducedDensityMatrix,
    attenuation_C,
    hbar_limit_check,
    quantum_centroid,
    quantum_moments,
    quantum_quadratic,
    quantum_variances,
    reduced_density_matrix,
)
from .timescales import (
    EhrenfestFreeParticle,
    TimescaleReport,
    decoherence_times,
    determinism_break_time,
    divergence_d,
    free_particle_spreading,
    temperature_bound,
    timescale_report,
)

__version__ = "0.1.0"
