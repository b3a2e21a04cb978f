//! Quantum topological data analysis, simulated exactly.
//!
//! * [`complex`]: distance matrices and Vietoris-Rips simplices.
//! * [`homology`]: boundary matrices, exact ranks, Betti numbers and barcodes.
//! * [`qsim`]: a dense state-vector and density-matrix simulator.
//! * [`qtda`]: the quantum Betti-number pipeline and its analyses.

pub mod complex;
pub mod error;
pub mod homology;
pub mod qsim;
pub mod qtda;

pub use error::{Error, Result};
