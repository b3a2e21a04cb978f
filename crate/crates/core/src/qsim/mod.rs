//! A small dense quantum simulator.
//!
//! States are plain values: every public operation returns a new state, with
//! `_mut` variants for hot loops. Global phase is unobservable and is never
//! compared directly; see [`StateVector::approx_eq_up_to_phase`].

mod density;
mod grover;
mod hermitian;
mod phase;
mod state;

pub use density::DensityMatrix;
pub use grover::{
    grover_amplify, grover_success_probability, marked_probability, optimal_grover_iterations,
    MAX_GROVER_QUBITS,
};
pub use hermitian::HermitianOperator;
pub use phase::{
    phase_estimate, phase_estimate_pure, register_zero_probability, zero_outcome_operator,
    zero_outcome_probability, MAX_SIMULATED_QUBITS,
};
pub use state::{Gate, StateVector};

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Tolerance for validating gate and Hermitian inputs.
pub const GATE_TOLERANCE: f64 = 1e-12;
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Tolerance for checking results of numerical routines.
pub const POST_TOLERANCE: f64 = 1e-9;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn unitary_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    if m.ncols() != n {
        return f64::INFINITY;
    }
    (m.adjoint() * m - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    unitary_deviation(m) <= tol
}
