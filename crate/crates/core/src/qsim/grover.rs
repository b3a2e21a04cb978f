//! Multi-target amplitude amplification.

use std::f64::consts::PI;

use super::{c, StateVector};
use crate::error::{Error, Result};

/// Largest register simulated by [`grover_amplify`].
pub const MAX_GROVER_QUBITS: usize = 22;

/// Runs `iterations` Grover steps from the uniform superposition over
/// `qubits` qubits. `oracle` marks basis indices.
pub fn grover_amplify(
    qubits: usize,
    oracle: impl Fn(u64) -> bool,
    iterations: usize,
) -> Result<StateVector> {
    if qubits > MAX_GROVER_QUBITS {
        return Err(Error::TooLarge(format!("{qubits}-qubit Grover search")));
    }
    let n = 1usize << qubits;
    let marked: Vec<bool> = (0..n as u64).map(&oracle).collect();
    if !marked.iter().any(|&m| m) {
        return Err(Error::NoMarkedStates);
    }
    let amp = 1.0 / (n as f64).sqrt();
    let mut amps = vec![c(amp, 0.0); n];
    for _ in 0..iterations {
        for (a, &m) in amps.iter_mut().zip(&marked) {
            if m {
                *a = -*a;
            }
        }
        // inversion about the mean: H^n (2|0⟩⟨0| - I) H^n
        let mean = amps.iter().sum::<num_complex::Complex64>() / n as f64;
        for a in &mut amps {
            *a = 2.0 * mean - *a;
        }
    }
    StateVector::from_amplitudes(amps)
}

/// Total probability on the marked indices.
pub fn marked_probability(state: &StateVector, oracle: impl Fn(u64) -> bool) -> f64 {
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| oracle(*i as u64))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// `sin²((2r+1)θ)` with `θ = asin(√(M/N))`.
pub fn grover_success_probability(space: u64, marked: u64, iterations: u64) -> f64 {
    let theta = (marked as f64 / space as f64).sqrt().asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// `round(π/(4θ) - ½)`, floored at zero.
pub fn optimal_grover_iterations(space: u64, marked: u64) -> Result<u64> {
    if marked == 0 {
        return Err(Error::NoMarkedStates);
    }
    if marked > space {
        return Err(Error::InvalidConfig(format!(
            "{marked} marked items in a space of {space}"
        )));
    }
    let theta = (marked as f64 / space as f64).sqrt().asin();
    Ok((PI / (4.0 * theta) - 0.5).round().max(0.0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_of_eight_in_one_step() {
        let oracle = |x: u64| x == 0b011 || x == 0b101;
        let s = grover_amplify(3, oracle, 1).unwrap();
        assert_abs_diff_eq!(marked_probability(&s, oracle), 1.0, epsilon = 1e-12);
        assert_eq!(optimal_grover_iterations(8, 2).unwrap(), 1);
    }

    #[test]
    fn zero_iterations_is_uniform() {
        let oracle = |x: u64| x < 3;
        let s = grover_amplify(4, oracle, 0).unwrap();
        assert_abs_diff_eq!(marked_probability(&s, oracle), 3.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn everything_marked() {
        for r in 0..5 {
            let s = grover_amplify(3, |_| true, r).unwrap();
            assert_abs_diff_eq!(marked_probability(&s, |_| true), 1.0, epsilon = 1e-12);
        }
        assert_eq!(optimal_grover_iterations(8, 8).unwrap(), 0);
    }

    #[test]
    fn no_targets_fails() {
        assert_eq!(grover_amplify(3, |_| false, 1), Err(Error::NoMarkedStates));
        assert_eq!(optimal_grover_iterations(8, 0), Err(Error::NoMarkedStates));
        assert!(optimal_grover_iterations(8, 9).is_err());
    }

    #[test]
    fn optimal_count_for_a_million_items() {
        let space = 1u64 << 20;
        let r = optimal_grover_iterations(space, 1).unwrap();
        assert_eq!(r, 804);
        // brute-force maximization of the closed form
        let best = (0..2000u64)
            .max_by(|&a, &b| {
                grover_success_probability(space, 1, a)
                    .total_cmp(&grover_success_probability(space, 1, b))
            })
            .unwrap();
        assert_eq!(best, r);
    }
}
