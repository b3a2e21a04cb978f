use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{c, is_unitary, DensityMatrix, GATE_TOLERANCE, POST_TOLERANCE};
use crate::error::{Error, Result};

/// Single-qubit gates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H,
    X,
    Z,
    /// Row-major 2×2 unitary.
    Unitary([[Complex64; 2]; 2]),
}

impl Gate {
    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Self {
        Gate::Unitary([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::cis(theta)]])
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        let h = c(FRAC_1_SQRT_2, 0.0);
        match self {
            Gate::H => [[h, h], [h, -h]],
            Gate::X => [[z, o], [o, z]],
            Gate::Z => [[o, z], [z, -o]],
            Gate::Unitary(m) => *m,
        }
    }

    fn to_dmatrix(self) -> DMatrix<Complex64> {
        let m = self.matrix();
        DMatrix::from_fn(2, 2, |i, j| m[i][j])
    }
}

/// Pure state of `qubits` qubits; basis index bit `j` is qubit `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1 << qubits];
        amps[index] = c(1.0, 0.0);
        Self { qubits, amps }
    }

    /// Wraps amplitudes, checking length and normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::SizeMismatch {
                expected: len.next_power_of_two(),
                got: len,
            });
        }
        let s = Self {
            qubits: len.trailing_zeros() as usize,
            amps,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidConfig(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product with `self` on the low qubits and `high` above them.
    pub fn tensor(&self, high: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * high.amps.len());
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        Self {
            qubits: self.qubits + high.qubits,
            amps,
        }
    }

    /// Equality up to a global phase: `|⟨a|b⟩| ≥ 1 - tol` for normalized states.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        self.qubits == other.qubits && (1.0 - self.inner(other).norm()).abs() <= tol
    }

    /// Copy with the first nonzero amplitude rotated to be real and positive.
    pub fn canonical_phase(&self) -> Self {
        let mut out = self.clone();
        if let Some(a) = self.amps.iter().find(|a| a.norm() > 1e-12) {
            let rot = a.conj() / a.norm();
            out.amps.iter_mut().for_each(|x| *x *= rot);
        }
        out
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.qubits {
            Err(Error::QubitOutOfRange {
                qubit: q,
                qubits: self.qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Returns the state after a single-qubit gate on `target`.
    pub fn apply_gate(&self, gate: Gate, target: usize) -> Result<Self> {
        let mut out = self.clone();
        out.apply_gate_mut(gate, target)?;
        Ok(out)
    }

    pub fn apply_gate_mut(&mut self, gate: Gate, target: usize) -> Result<()> {
        self.check_qubit(target)?;
        let m = gate.matrix();
        let dev = super::unitary_deviation(&gate.to_dmatrix());
        if dev > GATE_TOLERANCE {
            return Err(Error::NotUnitary(dev));
        }
        let bit = 1 << target;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    /// Applies `u` to `targets` on the subspace where `control` is 1.
    ///
    /// `targets[i]` is bit `i` of the row/column index of `u`.
    pub fn apply_controlled(
        &self,
        u: &DMatrix<Complex64>,
        control: usize,
        targets: &[usize],
    ) -> Result<Self> {
        let mut out = self.clone();
        out.apply_controlled_mut(u, Some(control), targets)?;
        Ok(out)
    }

    /// Applies `u` to `targets`, optionally conditioned on `control`.
    pub fn apply_controlled_mut(
        &mut self,
        u: &DMatrix<Complex64>,
        control: Option<usize>,
        targets: &[usize],
    ) -> Result<()> {
        let dim = 1usize << targets.len();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::SizeMismatch {
                expected: dim,
                got: u.nrows(),
            });
        }
        let mut seen = 0usize;
        for &q in targets.iter().chain(control.iter()) {
            self.check_qubit(q)?;
            if seen >> q & 1 == 1 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }
        if !is_unitary(u, POST_TOLERANCE) {
            return Err(Error::NotUnitary(super::unitary_deviation(u)));
        }
        let offsets: Vec<usize> = (0..dim)
            .map(|sub| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub >> i & 1 == 1)
                    .map(|(_, &q)| 1usize << q)
                    .sum()
            })
            .collect();
        let target_mask: usize = targets.iter().map(|&q| 1usize << q).sum();
        let control_mask = control.map_or(0, |q| 1usize << q);
        let mut gathered = vec![c(0.0, 0.0); dim];
        for base in 0..self.amps.len() {
            if base & target_mask != 0 || base & control_mask != control_mask {
                continue;
            }
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                let mut acc = c(0.0, 0.0);
                for (col, g) in gathered.iter().enumerate() {
                    acc += u[(row, col)] * g;
                }
                self.amps[base | off] = acc;
            }
        }
        Ok(())
    }

    /// Controlled-X.
    pub fn cnot(&self, control: usize, target: usize) -> Result<Self> {
        self.apply_controlled(&Gate::X.to_dmatrix(), control, &[target])
    }

    pub fn swap_mut(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Ok(());
        }
        let (ma, mb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ma != 0 && i & mb == 0 {
                self.amps.swap(i, i ^ ma ^ mb);
            }
        }
        Ok(())
    }

    /// Quantum Fourier transform on `qubits` (`qubits[0]` least significant):
    /// `|x⟩ ↦ 2^{-t/2} Σ_y e^{±2πi xy/2^t} |y⟩`, with `-` when `inverse`.
    pub fn qft_mut(&mut self, qubits: &[usize], inverse: bool) -> Result<()> {
        let t = qubits.len();
        let sign = if inverse { -1.0 } else { 1.0 };
        let mut ops: Vec<(usize, Option<(usize, f64)>)> = Vec::new();
        for j in (0..t).rev() {
            ops.push((j, None));
            for m in (0..j).rev() {
                let angle = 2.0 * PI / (1u64 << (j - m + 1)) as f64;
                ops.push((j, Some((m, angle))));
            }
        }
        let swaps = |s: &mut Self| -> Result<()> {
            for i in 0..t / 2 {
                s.swap_mut(qubits[i], qubits[t - 1 - i])?;
            }
            Ok(())
        };
        let run = |s: &mut Self, (j, cp): (usize, Option<(usize, f64)>)| -> Result<()> {
            match cp {
                None => s.apply_gate_mut(Gate::H, qubits[j]),
                Some((m, angle)) => s.apply_controlled_mut(
                    &Gate::phase(sign * angle).to_dmatrix(),
                    Some(qubits[m]),
                    &[qubits[j]],
                ),
            }
        };
        if inverse {
            swaps(self)?;
            for op in ops.into_iter().rev() {
                run(self, op)?;
            }
        } else {
            for op in ops {
                run(self, op)?;
            }
            swaps(self)?;
        }
        Ok(())
    }

    /// Probabilities of each outcome on `qubits`; outcome bit `i` is `qubits[i]`.
    pub fn measure_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            self.check_qubit(q)?;
        }
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[extract(i, qubits)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Reduced density matrix on `keep`; reduced index bit `i` is `keep[i]`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut seen = 0usize;
        for &q in keep {
            self.check_qubit(q)?;
            if seen >> q & 1 == 1 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }
        let traced: Vec<usize> = (0..self.qubits).filter(|q| seen >> q & 1 == 0).collect();
        let dk = 1 << keep.len();
        let mut rho = DMatrix::from_element(dk, dk, c(0.0, 0.0));
        // group amplitudes by the traced-out configuration
        let mut block = vec![c(0.0, 0.0); dk];
        for env in 0..(1usize << traced.len()) {
            let env_bits = deposit(env, &traced);
            let mut any = false;
            for (k, b) in block.iter_mut().enumerate() {
                *b = self.amps[env_bits | deposit(k, keep)];
                any |= b.norm_sqr() > 0.0;
            }
            if !any {
                continue;
            }
            for i in 0..dk {
                if block[i].norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dk {
                    rho[(i, j)] += block[i] * block[j].conj();
                }
            }
        }
        DensityMatrix::new(rho)
    }
}

/// Gathers the bits of `index` at positions `qubits` into a compact integer.
pub(crate) fn extract(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| (index >> q & 1) << i)
        .sum()
}

/// Inverse of [`extract`]: scatters the low bits of `value` onto `qubits`.
pub(crate) fn deposit(value: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .map(|(i, &q)| (value >> i & 1) << q)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn random_state(qubits: usize, seed: &[f64]) -> StateVector {
        let amps: Vec<Complex64> = (0..1 << qubits)
            .map(|i| c(seed[2 * i] - 0.5, seed[2 * i + 1] - 0.5))
            .collect();
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let s = StateVector::zero(1).apply_gate(Gate::H, 0).unwrap();
        assert_abs_diff_eq!(s.amplitude(0).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1).re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn x_on_point_three_qubit() {
        // |110> is points 1 and 2, i.e. bits 0 and 1; point 3 is qubit 2
        let s = StateVector::basis(3, 0b011).apply_gate(Gate::X, 2).unwrap();
        assert_eq!(s, StateVector::basis(3, 0b111));
    }

    #[test]
    fn rejects_bad_gates() {
        let s = StateVector::zero(2);
        let bad = Gate::Unitary([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]);
        assert!(matches!(s.apply_gate(bad, 0), Err(Error::NotUnitary(_))));
        assert!(matches!(
            s.apply_gate(Gate::H, 2),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(s.cnot(1, 1), Err(Error::OverlappingQubits(1))));
    }

    #[test]
    fn cnot_examples() {
        // |10> with qubit 1 set is index 0b10
        let s = StateVector::basis(2, 0b10).cnot(1, 0).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11));

        let plus = StateVector::zero(2).apply_gate(Gate::H, 1).unwrap();
        let bell = plus.cnot(1, 0).unwrap();
        assert_abs_diff_eq!(bell.amplitude(0b00).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(bell.amplitude(0b11).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(bell.amplitude(0b01).norm(), 0.0);
    }

    #[test]
    fn controlled_with_control_off_is_identity() {
        let u = DMatrix::from_fn(2, 2, |i, j| if i != j { c(0.0, 1.0) } else { c(0.0, 0.0) });
        let s = StateVector::basis(3, 0b011);
        assert_eq!(s.apply_controlled(&u, 2, &[0]).unwrap(), s);
    }

    #[test]
    fn qft_matches_dft() {
        let t = 3;
        let n = 1 << t;
        for x in 0..n {
            let mut s = StateVector::basis(t, x);
            s.qft_mut(&[0, 1, 2], false).unwrap();
            for y in 0..n {
                let expected =
                    Complex64::cis(2.0 * PI * (x * y) as f64 / n as f64) / (n as f64).sqrt();
                assert_abs_diff_eq!((s.amplitude(y) - expected).norm(), 0.0, epsilon = 1e-12);
            }
            s.qft_mut(&[0, 1, 2], true).unwrap();
            assert!(s.approx_eq_up_to_phase(&StateVector::basis(t, x), 1e-12));
            assert_abs_diff_eq!((s.amplitude(x) - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_pair_reduces_to_maximally_mixed() {
        let bell = StateVector::zero(2)
            .apply_gate(Gate::H, 1)
            .unwrap()
            .cnot(1, 0)
            .unwrap();
        let rho = bell.partial_trace(&[0]).unwrap();
        assert_abs_diff_eq!(rho.get(0, 0).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(1, 1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.get(0, 1).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(bell.partial_trace(&[]), Err(Error::EmptyKeep)));
    }

    #[test]
    fn tracing_the_copy_ancilla() {
        // (|110>|1> + |101>|0>)/√2 with the ancilla on qubit 3
        let mut amps = vec![c(0.0, 0.0); 16];
        amps[0b1011] = c(FRAC_1_SQRT_2, 0.0);
        amps[0b0101] = c(FRAC_1_SQRT_2, 0.0);
        let s = StateVector::from_amplitudes(amps).unwrap();
        let rho = s.partial_trace(&[0, 1, 2]).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j && (i == 0b011 || i == 0b101) { 0.5 } else { 0.0 };
                assert_abs_diff_eq!((rho.get(i, j) - c(expected, 0.0)).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn product_state_reduces_to_pure_state() {
        let a = StateVector::zero(1).apply_gate(Gate::H, 0).unwrap();
        let b = StateVector::basis(2, 2).apply_gate(Gate::H, 0).unwrap();
        let rho = a.tensor(&b).partial_trace(&[1, 2]).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn measurement_tables() {
        let plus = StateVector::zero(1).apply_gate(Gate::H, 0).unwrap();
        let p = plus.measure_distribution(&[0]).unwrap();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
        let one = StateVector::basis(4, 0b1000).measure_distribution(&[3]).unwrap();
        assert_eq!(one, vec![0.0, 1.0]);
    }

    #[test]
    fn phase_canonicalization() {
        let s = StateVector::basis(1, 1);
        let rotated = StateVector::from_amplitudes(vec![c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(s.approx_eq_up_to_phase(&rotated, 1e-12));
        assert_eq!(rotated.canonical_phase(), s);
    }

    proptest! {
        #[test]
        fn gates_preserve_norm(seed in proptest::collection::vec(0.0f64..1.0, 32), q in 0usize..4) {
            let s = random_state(4, &seed);
            for g in [Gate::H, Gate::X, Gate::Z, Gate::phase(0.3)] {
                let out = s.apply_gate(g, q).unwrap();
                prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
            }
            let twice = s.apply_gate(Gate::H, q).unwrap().apply_gate(Gate::H, q).unwrap();
            for (a, b) in twice.amplitudes().iter().zip(s.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn partial_trace_preserves_trace(seed in proptest::collection::vec(0.0f64..1.0, 32)) {
            let s = random_state(4, &seed);
            for keep in [vec![0], vec![1, 3], vec![2, 0, 1]] {
                let rho = s.partial_trace(&keep).unwrap();
                prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
            }
        }
    }
}
