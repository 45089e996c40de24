"""Partition-free charge transport through a sample coupled to two leads.

The package simulates a finite tight-binding sample bridging two truncated
one-dimensional leads: the transient current after a bias switch-on, the
stationary transmittance from scattering theory, and the Landauer-type
steady-state current, together with the consistency checks tying them to one
another.
"""

from .model import (
    CouplingSpec,
    FiniteRankOperator,
    LeadSpec,
    SampleSpec,
    SystemSpec,
    ThermalSpec,
    TruncatedSystem,
    bias_operator,
    build_system,
    current_operator,
    measurement_bond,
    projector_lead1,
    projector_lead2_tail,
    resized,
)
from .equilibrium import (
    DensityMatrix,
    SpectralDecomposition,
    equilibrium_density,
    fermi_weight,
    spectral_decomposition,
)
from .dynamics import (
    BiasProtocol,
    CurrentTrace,
    PropagationState,
    current_profile,
    ergodic_average,
    initial_state,
    light_cone_norm,
    propagate_to,
    safe_horizon,
    simulate_current,
    switching_value,
    transient_current,
)
from .scattering import (
    BoundStatePoleError,
    BoundStateReport,
    LeadMode,
    TMatrix,
    TransmissionSpectrum,
    bound_states,
    effective_resolvent,
    energy_grid,
    lead_amplitude,
    lead_mode,
    optical_residual,
    surface_green,
    t_matrix,
    transmittance_spectrum,
)
from .landauer import (
    BandIntersection,
    QuadratureSpec,
    ReconcileReport,
    SteadyCurrentResult,
    band_support,
    reconcile,
    steady_current,
)
from .config import ConfigError, RunConfig, parse_config

__version__ = "0.1.0"

__all__ = [
    "BandIntersection",
    "BiasProtocol",
    "BoundStatePoleError",
    "BoundStateReport",
    "ConfigError",
    "CouplingSpec",
    "CurrentTrace",
    "DensityMatrix",
    "FiniteRankOperator",
    "LeadMode",
    "LeadSpec",
    "PropagationState",
    "QuadratureSpec",
    "ReconcileReport",
    "RunConfig",
    "SampleSpec",
    "SpectralDecomposition",
    "SteadyCurrentResult",
    "SystemSpec",
    "ThermalSpec",
    "TMatrix",
    "TransmissionSpectrum",
    "TruncatedSystem",
    "band_support",
    "bias_operator",
    "bound_states",
    "build_system",
    "current_operator",
    "current_profile",
    "effective_resolvent",
    "energy_grid",
    "equilibrium_density",
    "ergodic_average",
    "fermi_weight",
    "initial_state",
    "lead_amplitude",
    "lead_mode",
    "light_cone_norm",
    "measurement_bond",
    "optical_residual",
    "parse_config",
    "projector_lead1",
    "projector_lead2_tail",
    "propagate_to",
    "reconcile",
    "resized",
    "safe_horizon",
    "simulate_current",
    "spectral_decomposition",
    "steady_current",
    "surface_green",
    "switching_value",
    "t_matrix",
    "transient_current",
    "transmittance_spectrum",
]
