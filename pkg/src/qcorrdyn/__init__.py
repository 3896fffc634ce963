"""Quantum discord, MID, classical correlations and concurrence for two qubits,
together with their dynamics under a shared electromagnetic reservoir."""

from .core import (
    DensityMatrix,
    EigenSystem,
    ReducedState,
    apply_local_projectors,
    hermitian_eigensystem,
    mutual_information,
    partial_trace,
    validate_density_matrix,
    von_neumann_entropy,
)
from .correlations import (
    CorrelationReport,
    GeneralXState,
    GridSpec,
    MeasurementDirection,
    SymmetricXState,
    classical_correlation,
    classical_correlation_x_symmetric,
    concurrence,
    concurrence_x_symmetric,
    discord_min,
    discord_x_symmetric,
    full_report,
    mid,
    mid_x_symmetric,
)
from .dynamics import (
    CouplingGeometry,
    DynamicsParams,
    PopulationPair,
    analytic_state,
    coupling_from_geometry,
    dicke_state,
    integrate,
    lindblad_rhs,
    populations_sym_antisym,
)
from .analysis import (
    EventSet,
    Interval,
    TimeSeries,
    decay_rate_fit,
    degeneracy_time,
    mid_discord_interval,
    onset_time,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "EigenSystem",
    "ReducedState",
    "apply_local_projectors",
    "hermitian_eigensystem",
    "mutual_information",
    "partial_trace",
    "validate_density_matrix",
    "von_neumann_entropy",
    "CorrelationReport",
    "GeneralXState",
    "GridSpec",
    "MeasurementDirection",
    "SymmetricXState",
    "classical_correlation",
    "classical_correlation_x_symmetric",
    "concurrence",
    "concurrence_x_symmetric",
    "discord_min",
    "discord_x_symmetric",
    "full_report",
    "mid",
    "mid_x_symmetric",
    "CouplingGeometry",
    "DynamicsParams",
    "PopulationPair",
    "analytic_state",
    "coupling_from_geometry",
    "dicke_state",
    "integrate",
    "lindblad_rhs",
    "populations_sym_antisym",
    "EventSet",
    "Interval",
    "TimeSeries",
    "decay_rate_fit",
    "degeneracy_time",
    "mid_discord_interval",
    "onset_time",
    "sweep",
]
