//! The quantum Betti-number pipeline.
//!
//! A k-simplex state is prepared (directly or by amplitude amplification),
//! turned into the uniform mixture by copying onto an ancilla register and
//! tracing it out, and fed to phase estimation of the exponentiated
//! Hermitian boundary. The all-zeros register probability η gives
//! `dim Ker ∂_k = round(η·|S_k|)`, and two kernels give a Betti number.

mod analysis;
mod config;
mod demo;
mod pipeline;

pub use analysis::{
    epsilon_grid, error_threshold, error_threshold_exact, exact_binomial, proportion_monte_carlo,
    simplex_counts, trial_distances, trial_proportions, ProportionGrid, MAX_MONTE_CARLO_WORK,
};
pub use config::{GroverMode, QtdaConfig, Readout, MAX_AUTO_QPE_BITS, MAX_QPE_BITS};
pub use demo::{
    counterexample_demo, counterexample_distances, three_point_demo, three_point_distances,
    CounterexampleReport, ThreePointReport, ThreePointScale, COUNTEREXAMPLE_EDGES,
    COUNTEREXAMPLE_SCALE, COUNTEREXAMPLE_SIGNS,
};
pub use pipeline::{
    auto_qpe_bits, betti_via_quantum, column_state, copy_and_trace, estimate_kernel,
    grover_prepare_simplices, hermitian_boundary, kernel_probability_exact, kernel_probability_qpe,
    prepare_simplicial_state, readout_operator, readout_phase_map, uniform_mixture,
    uniform_mixture_direct, GroverPreparation, KernelEstimate, QpeReadout, QuantumBetti,
    MAX_COPY_QUBITS, MAX_SHOTS, MAX_STATE_QUBITS,
};
