"""Sonic black hole horizons as a two-mode squeezing source for teleportation.

The package chains a transonic background flow to its acoustic horizon,
the horizon's surface gravity to a two-mode squeeze parameter, and the
resulting squeezed vacuum to number-difference teleportation fidelities,
checking closed forms against brute-force truncated number-basis sums.
"""

from .errors import (
    SonicError,
    DomainError,
    ConfigError,
    ParseError,
    ValidationError,
)
from .units import UnitSystem, NATURAL, SI
from .acoustic import (
    FlowProfile,
    MetricComponents,
    HorizonData,
    FlowResidual,
    madelung_decompose,
    validate_stationary_flow,
    acoustic_metric_at,
    near_horizon_metric,
    find_horizon,
    find_horizons,
    hawking_temperature,
    alpha_for_temperature,
    load_profile,
)
from .squeeze import SqueezeSpec, squeeze_parameter, bogoliubov_pair, mean_occupation
from .fock import (
    FockVector,
    TwoModeState,
    DensityOperator,
    CoherentSpec,
    coherent_state,
    two_mode_squeezed_vacuum,
    squeezed_vacuum_exponential,
    reduced_state,
    entanglement_entropy,
    fidelity_pure,
    squeezed_cutoff,
    coherent_cutoff,
)
from .teleport import (
    MeasurementSpec,
    TeleportOutcome,
    SweepRow,
    teleport_general,
    mb_conditional,
    analytic_fidelity_zero,
    fidelity_temperature_sweep,
)

__version__ = "0.1.0"
