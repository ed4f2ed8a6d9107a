//! Two-qubit open-system simulator for room-temperature NMR conditions.
//!
//! The crate evolves high-temperature deviation matrices under generalized
//! amplitude-damping and phase-damping Kraus channels, computes the symmetric
//! quantum discord and its classical counterpart from the second-order
//! expansion of the mutual information, and analyses the resulting
//! trajectories for sudden changes in the decay behavior.
//!
//! Everything is pure and deterministic: values are immutable after
//! construction and identical inputs produce bit-identical trajectories.

pub mod changepoint;
pub mod channels;
pub mod correlations;
pub mod dynamics;
pub mod matrix;
pub mod nmr;
pub mod optim;
pub mod state;

pub use changepoint::{DetectionMethod, SuddenChangeDetection, SuddenChangeReport};
pub use channels::{
    apply, compose, gad_channel, lift_local, lifted_noise_channel, pd_channel, ChannelSelection,
    QuantumChannel, RelaxationParams,
};
pub use correlations::{
    bell_diagonal_closed_form, classical_correlation, measure_map, measured_mutual_info,
    mutual_info_exact, mutual_info_expansion, quantum_discord, CorrelationValues, DiscordResult,
    OptimizerSettings, ProductProjectiveBasis,
};
pub use dynamics::{
    analytic_sudden_change, detect_sudden_change, evolve_trajectory, evolve_trajectory_nmr,
    subtract_amplitude_damping, CorrelationRecord, CrossingTime, CurveKind, TimeGrid, Trajectory,
};
pub use nmr::{
    diagonal_deviation, inject_residual_coherence, j_evolution, pseudo_epr, sampling_grid,
    solve_populations, DiagonalPopulations, NmrSystemParams,
};
pub use state::{
    bell_diagonal_deviation, bloch_decompose, compose_density, extract_deviation, partial_trace,
    BellDiagonalCoeffs, BlochDecomposition, DensityMatrix, DeviationMatrix, MatrixJson, Subsystem,
};
