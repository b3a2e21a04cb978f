//! Textbook quantum phase estimation.
//!
//! Qubit layout of the simulated circuit: the system occupies qubits
//! `0..q` (padded to a power of two with `U` acting as the identity on the
//! padding) and the phase register occupies `q..q+t`. Register qubit `j`
//! controls `U^{2^j}`, so register qubit `t-1` carries the most significant
//! phase bit and outcome `y` estimates the phase `y / 2^t`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{c, is_unitary, DensityMatrix, Gate, HermitianOperator, StateVector, POST_TOLERANCE};
use crate::error::{Error, Result};

/// Largest joint state simulated, in qubits.
pub const MAX_SIMULATED_QUBITS: usize = 24;

/// Weight below which an ensemble component is skipped.
const MIN_WEIGHT: f64 = 1e-15;

/// Register outcome distribution of phase estimation on `input`.
///
/// Mixed inputs are simulated as an ensemble of pure states: the spectral
/// components of `input` (or its basis states when it is diagonal), each run
/// through the circuit and weighted.
pub fn phase_estimate(u: &DMatrix<Complex64>, input: &DensityMatrix, t: usize) -> Result<Vec<f64>> {
    let d = u.nrows();
    if t == 0 {
        return Err(Error::InvalidConfig("phase register needs at least one qubit".into()));
    }
    if u.ncols() != d || input.dim() != d {
        return Err(Error::SizeMismatch {
            expected: d,
            got: input.dim(),
        });
    }
    if !is_unitary(u, POST_TOLERANCE) {
        return Err(Error::NotUnitary(super::unitary_deviation(u)));
    }
    let q = d.next_power_of_two().trailing_zeros() as usize;
    if q + t > MAX_SIMULATED_QUBITS {
        return Err(Error::TooLarge(format!("{} qubits of phase estimation", q + t)));
    }
    let padded = 1usize << q;
    let powers = padded_powers(u, padded, t);

    let mut out = vec![0.0; 1 << t];
    for (weight, amps) in ensemble(input)? {
        if weight <= MIN_WEIGHT {
            continue;
        }
        let mut sys = vec![c(0.0, 0.0); padded];
        sys[..d].copy_from_slice(&amps);
        let dist = run_circuit(&sys, q, t, &powers)?;
        for (o, p) in out.iter_mut().zip(dist) {
            *o += weight * p;
        }
    }
    Ok(out)
}

/// Phase estimation of a pure system state.
pub fn phase_estimate_pure(u: &DMatrix<Complex64>, input: &StateVector, t: usize) -> Result<Vec<f64>> {
    phase_estimate(u, &DensityMatrix::from_pure(input), t)
}

/// Kraus operator of the all-zeros register outcome:
/// `2^{-t} Σ_{y<2^t} U^y = Π_j (I + U^{2^j}) / 2`.
pub fn zero_outcome_operator(u: &DMatrix<Complex64>, t: usize) -> Result<DMatrix<Complex64>> {
    let d = u.nrows();
    if u.ncols() != d {
        return Err(Error::SizeMismatch {
            expected: d,
            got: u.ncols(),
        });
    }
    if !is_unitary(u, POST_TOLERANCE) {
        return Err(Error::NotUnitary(super::unitary_deviation(u)));
    }
    let id = DMatrix::<Complex64>::identity(d, d);
    let mut power = u.clone();
    let mut out = id.clone();
    for _ in 0..t {
        out = (&id + &power) * &out * c(0.5, 0.0);
        power = &power * &power;
    }
    Ok(out)
}

/// Probability of the all-zeros register outcome, `Tr(M ρ M†)` with `M`
/// from [`zero_outcome_operator`]. Agrees with `phase_estimate(..)[0]`.
pub fn register_zero_probability(u: &DMatrix<Complex64>, input: &DensityMatrix, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidConfig("phase register needs at least one qubit".into()));
    }
    if input.dim() != u.nrows() {
        return Err(Error::SizeMismatch {
            expected: u.nrows(),
            got: input.dim(),
        });
    }
    let m = zero_outcome_operator(u, t)?;
    Ok((&m * input.matrix() * m.adjoint()).trace().re)
}

fn padded_powers(u: &DMatrix<Complex64>, padded: usize, t: usize) -> Vec<DMatrix<Complex64>> {
    let d = u.nrows();
    let mut p = DMatrix::<Complex64>::identity(padded, padded);
    p.view_mut((0, 0), (d, d)).copy_from(u);
    let mut out = Vec::with_capacity(t);
    for _ in 0..t {
        let next = &p * &p;
        out.push(std::mem::replace(&mut p, next));
    }
    out
}

fn ensemble(input: &DensityMatrix) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let d = input.dim();
    if input.is_diagonal(0.0) {
        return Ok((0..d)
            .map(|i| {
                let mut v = vec![c(0.0, 0.0); d];
                v[i] = c(1.0, 0.0);
                (input.get(i, i).re, v)
            })
            .collect());
    }
    let op = HermitianOperator::new(input.matrix().clone())?;
    Ok(op
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, op.eigenvectors().column(i).iter().copied().collect()))
        .collect())
}

fn run_circuit(
    system: &[Complex64],
    q: usize,
    t: usize,
    powers: &[DMatrix<Complex64>],
) -> Result<Vec<f64>> {
    let sys = StateVector::from_amplitudes(system.to_vec())?;
    let mut state = sys.tensor(&StateVector::zero(t));
    let register: Vec<usize> = (q..q + t).collect();
    let targets: Vec<usize> = (0..q).collect();
    for &r in &register {
        state.apply_gate_mut(Gate::H, r)?;
    }
    for (j, &r) in register.iter().enumerate() {
        state.apply_controlled_mut(&powers[j], Some(r), &targets)?;
    }
    state.qft_mut(&register, true)?;
    state.measure_distribution(&register)
}

/// Probability that phase estimation with `t` register qubits reports
/// outcome 0 for an eigenstate of phase `phase`:
/// `|2^{-t} Σ_x e^{2πi·phase·x}|²`.
pub fn zero_outcome_probability(phase: f64, t: usize) -> f64 {
    let n = (1u64 << t) as f64;
    let s: Complex64 = (0..1u64 << t)
        .map(|x| Complex64::cis(2.0 * std::f64::consts::PI * phase * x as f64))
        .sum();
    (s / n).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn diag_unitary(phases: &[f64]) -> DMatrix<Complex64> {
        let n = phases.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::cis(2.0 * PI * phases[i])
            } else {
                c(0.0, 0.0)
            }
        })
    }

    #[test]
    fn identity_gives_all_zeros() {
        let u = DMatrix::<Complex64>::identity(3, 3);
        let rho = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        for t in 1..5 {
            let p = phase_estimate(&u, &rho, t).unwrap();
            assert_abs_diff_eq!(p[0], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn exact_quarter_phase() {
        let u = diag_unitary(&[0.0, 0.25]);
        let p = phase_estimate_pure(&u, &StateVector::basis(1, 1), 2).unwrap();
        // outcome 0b01: register qubit 0 set
        assert_abs_diff_eq!(p[0b01], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn most_significant_bit_is_last_register_qubit() {
        let u = diag_unitary(&[0.5, 0.75]);
        let p = phase_estimate_pure(&u, &StateVector::basis(1, 1), 3).unwrap();
        assert_abs_diff_eq!(p[6], 1.0, epsilon = 1e-12);
        let p = phase_estimate_pure(&u, &StateVector::basis(1, 0), 3).unwrap();
        assert_abs_diff_eq!(p[4], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inexact_phase_matches_fejer_kernel() {
        let phase = 0.3;
        let u = diag_unitary(&[phase]);
        for t in 1..6 {
            let rho = DensityMatrix::diagonal(&[1.0]).unwrap();
            let p = phase_estimate(&u, &rho, t).unwrap();
            assert_abs_diff_eq!(p[0], zero_outcome_probability(phase, t), epsilon = 1e-12);
            assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn coherent_input_is_decomposed() {
        // |+> against diag(1, -1): half the weight on each phase
        let u = diag_unitary(&[0.0, 0.5]);
        let plus = StateVector::zero(1).apply_gate(Gate::H, 0).unwrap();
        let p = phase_estimate_pure(&u, &plus, 1).unwrap();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_outcome_operator_matches_circuit() {
        let a = HermitianOperator::new(DMatrix::from_fn(3, 3, |i, j| {
            let v = [[0.3, 0.1, -0.2], [0.1, 0.0, 0.4], [-0.2, 0.4, 0.7]][i][j];
            c(v, if i < j { 0.05 } else if i > j { -0.05 } else { 0.0 })
        }))
        .unwrap();
        let u = a.unitary_exponential(1.0);
        let rho = DensityMatrix::diagonal(&[0.5, 0.2, 0.3]).unwrap();
        for t in 1..6 {
            let full = phase_estimate(&u, &rho, t).unwrap();
            let fast = register_zero_probability(&u, &rho, t).unwrap();
            assert_abs_diff_eq!(full[0], fast, epsilon = 1e-12);
        }
    }

    #[test]
    fn errors() {
        let u = diag_unitary(&[0.0, 0.5]);
        let rho = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(phase_estimate(&u, &rho, 1), Err(Error::SizeMismatch { .. })));
        let rho = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(phase_estimate(&u, &rho, 0).is_err());
        let not_unitary = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(
            phase_estimate(&not_unitary, &rho, 1),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn zero_outcome_closed_form() {
        assert_abs_diff_eq!(zero_outcome_probability(0.0, 4), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero_outcome_probability(0.5, 1), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zero_outcome_probability(0.25, 2), 0.0, epsilon = 1e-15);
    }
}
