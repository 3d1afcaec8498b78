"""Phase sensitivity and fidelity of a two-port Mach-Zehnder interferometer."""

from ._core import (
    CircularSummary,
    FidelityReport,
    ImpossibleOutcome,
    InterferometerGeometry,
    LikelihoodTable,
    MeasurementRecord,
    OptimizationResult,
    OptimizerConfig,
    Outcome,
    Peak,
    PhasePosterior,
    ResourceLimit,
    RestartSummary,
    SensitivityEstimate,
    SimulationResult,
    StateCoefficients,
    __version__,
    build_scattering_matrix,
    circular_summary,
    count_peaks,
    error_propagation_sensitivity,
    fidelity_sweep,
    fock_outcome_prob,
    heisenberg_limit,
    likelihood_table,
    mutual_information,
    noon_outcome_prob,
    optimize_input_state,
    posterior_density,
    project_normalize,
    repeated_mutual_information,
    simulate_sequence,
    standard_limit,
    state_outcome_prob,
    state_output_probs,
    transition_amplitude,
)

__all__ = [name for name in dir() if not name.startswith("_")]
