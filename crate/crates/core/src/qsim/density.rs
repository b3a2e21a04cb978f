use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{deposit, extract};
use super::{c, hermitian_deviation, StateVector};
use crate::error::{Error, Result};

const DENSITY_TOLERANCE: f64 = 1e-10;

/// A mixed state. Dimensions need not be powers of two; qubit-level
/// operations require that they are.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::SizeMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let dev = hermitian_deviation(&m);
        if dev > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian(dev));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOLERANCE || tr.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidConfig(format!("density trace is {tr}")));
        }
        Ok(Self { m })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let m = DMatrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj());
        Self { m }
    }

    /// `Σ_i w_i |i⟩⟨i|`; weights must sum to one.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(weights[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Qubit count when the dimension is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        self.dim()
            .is_power_of_two()
            .then(|| self.dim().trailing_zeros() as usize)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    /// Smallest eigenvalue; non-negative up to rounding for a valid state.
    pub fn min_eigenvalue(&self) -> f64 {
        self.m
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Places this state on the basis vectors `positions` of a `dim`-dimensional space.
    pub fn embed(&self, positions: &[usize], dim: usize) -> Result<Self> {
        if positions.len() != self.dim() {
            return Err(Error::SizeMismatch {
                expected: self.dim(),
                got: positions.len(),
            });
        }
        if let Some(&p) = positions.iter().find(|&&p| p >= dim) {
            return Err(Error::SizeMismatch { expected: dim, got: p + 1 });
        }
        let mut m = DMatrix::from_element(dim, dim, c(0.0, 0.0));
        for (a, &i) in positions.iter().enumerate() {
            for (b, &j) in positions.iter().enumerate() {
                m[(i, j)] = self.m[(a, b)];
            }
        }
        Ok(Self { m })
    }

    /// Restriction to the basis vectors `positions`, returned together with
    /// the trace weight that lay outside them.
    pub fn restrict(&self, positions: &[usize]) -> (DMatrix<Complex64>, f64) {
        let m = DMatrix::from_fn(positions.len(), positions.len(), |a, b| {
            self.m[(positions[a], positions[b])]
        });
        let outside = self.trace() - m.trace().re;
        (m, outside)
    }

    fn require_qubits(&self) -> Result<usize> {
        self.qubits().ok_or(Error::SizeMismatch {
            expected: self.dim().next_power_of_two(),
            got: self.dim(),
        })
    }

    /// Reduced state on `keep`; reduced index bit `i` is `keep[i]`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let qubits = self.require_qubits()?;
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut seen = 0usize;
        for &q in keep {
            if q >= qubits {
                return Err(Error::QubitOutOfRange { qubit: q, qubits });
            }
            if seen >> q & 1 == 1 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }
        let traced: Vec<usize> = (0..qubits).filter(|q| seen >> q & 1 == 0).collect();
        let dk = 1 << keep.len();
        let mut out = DMatrix::from_element(dk, dk, c(0.0, 0.0));
        for env in 0..(1usize << traced.len()) {
            let e = deposit(env, &traced);
            for i in 0..dk {
                let ri = e | deposit(i, keep);
                for j in 0..dk {
                    out[(i, j)] += self.m[(ri, e | deposit(j, keep))];
                }
            }
        }
        Self::new(out)
    }

    /// Outcome probabilities on `qubits`; outcome bit `i` is `qubits[i]`.
    pub fn measure_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        let total = self.require_qubits()?;
        if let Some(&q) = qubits.iter().find(|&&q| q >= total) {
            return Err(Error::QubitOutOfRange { qubit: q, qubits: total });
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for i in 0..self.dim() {
            probs[extract(i, qubits)] += self.m[(i, i)].re;
        }
        Ok(probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Gate;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_two_edge_mixture_reads_half_half() {
        let mut w = vec![0.0; 8];
        w[0b011] = 0.5;
        w[0b101] = 0.5;
        let rho = DensityMatrix::diagonal(&w).unwrap();
        let p = rho.measure_distribution(&[0, 1, 2]).unwrap();
        assert_abs_diff_eq!(p[0b011], 0.5);
        assert_abs_diff_eq!(p[0b101], 0.5);
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        assert!(rho.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn pure_density_trace_matches_state_trace() {
        let s = StateVector::zero(3)
            .apply_gate(Gate::H, 2)
            .unwrap()
            .cnot(2, 0)
            .unwrap();
        let direct = s.partial_trace(&[0, 2]).unwrap();
        let via_rho = DensityMatrix::from_pure(&s).partial_trace(&[0, 2]).unwrap();
        assert!(direct.max_abs_diff(&via_rho) < 1e-14);
        assert_abs_diff_eq!(via_rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn register_marginal_of_flipped_register() {
        // register B on qubit 3 set, system in |110>
        let s = StateVector::basis(4, 0b1011);
        let p = DensityMatrix::from_pure(&s).measure_distribution(&[3]).unwrap();
        assert_eq!(p, vec![0.0, 1.0]);
    }

    #[test]
    fn validation() {
        let bad = DMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 0.0));
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotHermitian(_))));
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        let three = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(three.qubits(), None);
        assert!(three.partial_trace(&[0]).is_err());
    }

    #[test]
    fn embed_and_restrict() {
        let rho = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let big = rho.embed(&[3, 1], 5).unwrap();
        assert_abs_diff_eq!(big.get(3, 3).re, 0.25);
        assert_abs_diff_eq!(big.get(1, 1).re, 0.75);
        let (back, outside) = big.restrict(&[3, 1]);
        assert_abs_diff_eq!(outside, 0.0);
        assert_abs_diff_eq!(back[(1, 1)].re, 0.75);
        assert!(rho.embed(&[7, 0], 5).is_err());
    }
}
