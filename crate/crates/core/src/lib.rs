//! Estimating the error probabilities of a single-qubit Pauli channel.
//!
//! Two probing schemes are modelled. The separable scheme sends unentangled
//! qubits prepared along the three Pauli axes and measures each along its
//! own axis. The entangled scheme sends one half of a singlet through the
//! channel and Bell-measures the pair. For both, the crate computes outcome
//! statistics, estimators, exact expected quadratic errors (by enumeration
//! and in closed form), and Monte Carlo checks of those expectations.

pub mod channel;
pub mod error;
pub mod error_analysis;
pub mod estimation;
pub mod harness;
pub mod lattice;
mod pmf;
pub mod sampling;

pub use channel::{
    apply_channel_bloch, bell_output_distribution, measurement_down_probability, BellDistribution, BellState,
    BlochVector, ChannelParams, PauliAxis,
};
pub use error::{Error, Result};
pub use error_analysis::{
    delta_channel_uses, delta_qubit_budget, exact_error_entangled_closed, exact_error_entangled_enum,
    exact_error_separable_closed, exact_error_separable_enum, find_delta_maximum, scaled_delta, BudgetMode,
    DeltaMaximum, ErrorReport, Method, ResourceBudget, Scheme, ENUMERATION_CAP,
};
pub use estimation::{
    estimate_entangled, estimate_separable, invert_probabilities, quadratic_deviation, sample_bell_counts,
    sample_separable_counts, BellCounts, EstimateResult, MeasuredProbabilities, SeparableCounts,
};
pub use harness::{
    run_experiment, run_sweep, ExperimentConfig, ExperimentSummary, Quantity, SchemeSelection, SchemeSummary,
    SweepResource, SweepRow, SweepSpec,
};
pub use lattice::{Lattice, Slice};
pub use sampling::GENERATOR_ID;
