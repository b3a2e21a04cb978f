use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{GroverMode, QtdaConfig, Readout, MAX_AUTO_QPE_BITS};
use crate::complex::{DistanceMatrix, Simplex, SimplexSet};
use crate::error::{Error, Result};
use crate::homology::BoundaryMatrix;
use crate::qsim::{
    grover_amplify, grover_success_probability, marked_probability, optimal_grover_iterations,
    register_zero_probability, DensityMatrix, HermitianOperator, StateVector, MAX_GROVER_QUBITS,
};

/// Largest point count for a simplex state vector.
pub const MAX_STATE_QUBITS: usize = 22;

/// Largest point count for which mixtures are built by the copy circuit
/// (which doubles the qubit count) and returned as full density matrices.
pub const MAX_COPY_QUBITS: usize = 10;

/// Largest shot count accepted for a sampled readout.
pub const MAX_SHOTS: u64 = 100_000_000;

const MIXTURE_TOLERANCE: f64 = 1e-10;
const GROVER_STATE_TOLERANCE: f64 = 1e-9;
const TIE_TOLERANCE: f64 = 1e-12;
const PHASE_SLACK: f64 = 1e-12;

/// Kernel dimension recovered from a kernel probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub eta: f64,
    pub simplex_count: usize,
    /// `eta · simplex_count` before rounding.
    pub kernel_dim_raw: f64,
    pub kernel_dim: usize,
    /// False when the raw value sits on a rounding tie.
    pub reliable: bool,
    /// Phase register used, for phase-estimation readouts.
    pub qpe_bits: Option<usize>,
}

impl KernelEstimate {
    /// Rounds `eta · simplex_count` to the nearest integer.
    pub fn from_eta(eta: f64, simplex_count: usize) -> Self {
        let raw = eta * simplex_count as f64;
        let rounded = raw.round().clamp(0.0, simplex_count as f64);
        let tie = ((raw - raw.floor()) - 0.5).abs() <= TIE_TOLERANCE;
        Self {
            eta,
            simplex_count,
            kernel_dim_raw: raw,
            kernel_dim: rounded as usize,
            reliable: !tie && (raw - rounded).abs() < 0.5,
            qpe_bits: None,
        }
    }

    /// An estimate known without measurement, such as `dim Ker ∂₀ = n`.
    pub fn known(kernel_dim: usize, simplex_count: usize) -> Self {
        let eta = if simplex_count == 0 {
            0.0
        } else {
            kernel_dim as f64 / simplex_count as f64
        };
        Self {
            eta,
            simplex_count,
            kernel_dim_raw: kernel_dim as f64,
            kernel_dim,
            reliable: true,
            qpe_bits: None,
        }
    }
}

/// `β_k` from two kernel estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumBetti {
    pub k: usize,
    pub scale: f64,
    pub betti: usize,
    /// Estimate for `∂_k`.
    pub lower: KernelEstimate,
    /// Estimate for `∂_{k+1}`; its simplex count is `|S_{k+1}|`.
    pub upper: KernelEstimate,
    pub reliable: bool,
}

/// `|S|^{-1/2} Σ_{s∈S} |s⟩` over `n` qubits.
pub fn prepare_simplicial_state(set: &SimplexSet, n: usize) -> Result<StateVector> {
    if set.is_empty() {
        return Err(Error::EmptySimplexSet);
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::TooLarge(format!("{n}-qubit simplex state")));
    }
    let amp = 1.0 / (set.len() as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for s in set.members() {
        let idx = s.bits() as usize;
        if idx >= amps.len() {
            return Err(Error::SizeMismatch {
                expected: n,
                got: 64 - s.bits().leading_zeros() as usize,
            });
        }
        amps[idx] = Complex64::new(amp, 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// Copies each qubit in `copied` onto a fresh ancilla with a CNOT and traces
/// the ancillas out.
pub fn copy_and_trace(state: &StateVector, copied: &[usize]) -> Result<DensityMatrix> {
    let n = state.qubits();
    if n + copied.len() > 2 * MAX_COPY_QUBITS {
        return Err(Error::TooLarge(format!(
            "{}-qubit copy circuit",
            n + copied.len()
        )));
    }
    let mut joint = state.tensor(&StateVector::zero(copied.len()));
    for (a, &q) in copied.iter().enumerate() {
        joint = joint.cnot(q, n + a)?;
    }
    let keep: Vec<usize> = (0..n).collect();
    joint.partial_trace(&keep)
}

/// `Σ_{s∈S} |s⟩⟨s| / |S|`, built directly.
pub fn uniform_mixture_direct(set: &SimplexSet, n: usize) -> Result<DensityMatrix> {
    if set.is_empty() {
        return Err(Error::EmptySimplexSet);
    }
    if n > MAX_COPY_QUBITS {
        return Err(Error::TooLarge(format!("{n}-qubit density matrix")));
    }
    let mut w = vec![0.0; 1 << n];
    for s in set.members() {
        w[s.bits() as usize] = 1.0 / set.len() as f64;
    }
    DensityMatrix::diagonal(&w)
}

/// The uniform mixture over `set`, prepared by copying the simplex state
/// onto an ancilla register and tracing it out. Checked against
/// [`uniform_mixture_direct`].
pub fn uniform_mixture(set: &SimplexSet, n: usize) -> Result<DensityMatrix> {
    if n > MAX_COPY_QUBITS {
        return Err(Error::TooLarge(format!("{n}-qubit copy circuit")));
    }
    let psi = prepare_simplicial_state(set, n)?;
    let all: Vec<usize> = (0..n).collect();
    let rho = copy_and_trace(&psi, &all)?;
    let direct = uniform_mixture_direct(set, n)?;
    let diff = rho.max_abs_diff(&direct);
    if diff > MIXTURE_TOLERANCE {
        return Err(Error::Disagreement(format!(
            "copy-and-trace mixture differs from the direct mixture by {diff:.3e}"
        )));
    }
    Ok(rho)
}

/// `[[0, ∂], [∂ᵀ, 0]]` over the rows followed by the columns of `∂`.
pub fn hermitian_boundary(b: &BoundaryMatrix) -> Result<HermitianOperator> {
    let (r, c) = (b.nrows(), b.ncols());
    let dim = r + c;
    if r == 0 || c == 0 {
        return Ok(HermitianOperator::zeros(dim));
    }
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..r {
        for j in 0..c {
            let v = f64::from(b.get(i, j));
            m[(i, r + j)] = v;
            m[(r + j, i)] = v;
        }
    }
    HermitianOperator::from_real(&m)
}

/// Moves an `n`-qubit state supported on the columns of `b` into the space
/// of [`hermitian_boundary`], on its column block.
pub fn column_state(rho: &DensityMatrix, b: &BoundaryMatrix) -> Result<DensityMatrix> {
    let positions = column_positions(b, rho.dim())?;
    let (m, outside) = rho.restrict(&positions);
    if outside.abs() > MIXTURE_TOLERANCE {
        return Err(Error::InvalidConfig(format!(
            "state has weight {outside:.3e} outside the simplex set"
        )));
    }
    embed_columns(DensityMatrix::new(m)?, b)
}

fn column_positions(b: &BoundaryMatrix, dim: usize) -> Result<Vec<usize>> {
    b.cols()
        .iter()
        .map(|s| {
            let i = s.bits() as usize;
            if i < dim {
                Ok(i)
            } else {
                Err(Error::SizeMismatch { expected: dim, got: i + 1 })
            }
        })
        .collect()
}

fn embed_columns(on_cols: DensityMatrix, b: &BoundaryMatrix) -> Result<DensityMatrix> {
    let r = b.nrows();
    let positions: Vec<usize> = (r..r + b.ncols()).collect();
    on_cols.embed(&positions, r + b.ncols())
}

/// `Tr(P₀ ρ)`, with `P₀` the projector onto eigenvalues of magnitude at
/// most `zero_tolerance`.
pub fn kernel_probability_exact(
    rho: &DensityMatrix,
    op: &HermitianOperator,
    zero_tolerance: f64,
) -> Result<f64> {
    check_dims(rho, op)?;
    if let Some(&v) = op
        .eigenvalues()
        .iter()
        .find(|v| v.abs() > zero_tolerance && v.abs() <= 10.0 * zero_tolerance)
    {
        return Err(Error::IllSeparatedSpectrum(v));
    }
    let p0 = op.projector(|v| v.abs() <= zero_tolerance);
    Ok((p0 * rho.matrix()).trace().re.clamp(0.0, 1.0))
}

fn check_dims(rho: &DensityMatrix, op: &HermitianOperator) -> Result<()> {
    if rho.dim() != op.dim() {
        return Err(Error::SizeMismatch {
            expected: op.dim(),
            got: rho.dim(),
        });
    }
    Ok(())
}

/// Phase assigned to an eigenvalue `v` of `B`: `s·v²` or `s·v`, where `s`
/// is `operator_scale` or the factor bringing every phase into `[0, ½]`.
/// `None` when `B = 0`.
pub fn readout_phase_map(op: &HermitianOperator, config: &QtdaConfig) -> Option<impl Fn(f64) -> f64> {
    let lmax = op.spectral_radius();
    if lmax <= config.zero_tolerance {
        return None;
    }
    let squared = config.use_squared_operator;
    let s = config.operator_scale.unwrap_or(if squared {
        1.0 / (2.0 * lmax * lmax)
    } else {
        1.0 / (2.0 * lmax)
    });
    Some(move |v: f64| if squared { s * v * v } else { s * v })
}

/// The operator `B̃` whose exponential `exp(2πi·B̃)` is fed to phase
/// estimation, or `None` when `B = 0`.
pub fn readout_operator(op: &HermitianOperator, config: &QtdaConfig) -> Option<HermitianOperator> {
    readout_phase_map(op, config).map(|f| op.map_spectrum(f))
}

/// Smallest register with `2^{-t} ≤ φ_min / 2`, where `φ_min` is the
/// distance from zero (mod 1) of the phase closest to it among eigenvalues
/// of `B` that are not zero. Capped at [`MAX_AUTO_QPE_BITS`].
pub fn auto_qpe_bits(op: &HermitianOperator, config: &QtdaConfig) -> usize {
    let Some(f) = readout_phase_map(op, config) else {
        return 1;
    };
    let phi_min = op
        .eigenvalues()
        .iter()
        .filter(|v| v.abs() > config.zero_tolerance)
        .map(|&v| {
            let p = f(v);
            (p - p.round()).abs()
        })
        .fold(f64::INFINITY, f64::min);
    (1..=MAX_AUTO_QPE_BITS)
        .find(|&t| 0.5f64.powi(t as i32) <= phi_min / 2.0 + PHASE_SLACK)
        .unwrap_or(MAX_AUTO_QPE_BITS)
}

/// Result of a phase-estimation readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QpeReadout {
    pub eta: f64,
    pub qpe_bits: usize,
}

/// Probability of the all-zeros register when phase estimation of
/// `exp(2πi·B̃)` runs on `rho`. With `config.shots` set, η̂ is the observed
/// frequency over that many sampled runs, drawn from stream `stream` of the
/// configured seed.
pub fn kernel_probability_qpe(
    rho: &DensityMatrix,
    op: &HermitianOperator,
    config: &QtdaConfig,
    stream: u64,
) -> Result<QpeReadout> {
    config.validate()?;
    check_dims(rho, op)?;
    let Some(readout) = readout_operator(op, config) else {
        return Ok(QpeReadout {
            eta: 1.0,
            qpe_bits: config.qpe_bits.unwrap_or(1),
        });
    };
    let t = config
        .qpe_bits
        .unwrap_or_else(|| auto_qpe_bits(op, config));
    let u = readout.unitary_exponential(1.0);
    let p0 = register_zero_probability(&u, rho, t)?.clamp(0.0, 1.0);
    let eta = match config.shots {
        None => p0,
        Some(shots) => sample_frequency(p0, shots, config.rng_seed, stream)?,
    };
    Ok(QpeReadout { eta, qpe_bits: t })
}

fn sample_frequency(p: f64, shots: u64, seed: u64, stream: u64) -> Result<f64> {
    if shots > MAX_SHOTS {
        return Err(Error::TooLarge(format!("{shots} shots")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let hits = (0..shots).filter(|_| rng.random_bool(p)).count();
    Ok(hits as f64 / shots as f64)
}

/// Simplex state and mixture for `set`, prepared as configured.
fn column_mixture(
    d: &DistanceMatrix,
    scale: f64,
    set: &SimplexSet,
    b: &BoundaryMatrix,
    config: &QtdaConfig,
) -> Result<DensityMatrix> {
    let n = d.len();
    let psi = match config.grover {
        GroverMode::Off => prepare_simplicial_state(set, n)?,
        GroverMode::ExactIterations => grover_prepare_simplices(d, scale, set.dimension())?.conditional,
    };
    if n <= MAX_COPY_QUBITS {
        let all: Vec<usize> = (0..n).collect();
        return column_state(&copy_and_trace(&psi, &all)?, b);
    }
    // the copy circuit dephases in the computational basis
    let weights: Vec<f64> = b
        .cols()
        .iter()
        .map(|s| psi.amplitude(s.bits() as usize).norm_sqr())
        .collect();
    embed_columns(DensityMatrix::diagonal(&weights)?, b)
}

/// `dim Ker ∂_k` at `scale`, read out from the simulated pipeline.
pub fn estimate_kernel(
    d: &DistanceMatrix,
    scale: f64,
    k: usize,
    config: &QtdaConfig,
) -> Result<KernelEstimate> {
    config.validate()?;
    let n = d.len();
    if k == 0 {
        d.simplices(scale, 0)?;
        return Ok(KernelEstimate::known(n, n));
    }
    if k >= n {
        d.simplices(scale, 0)?;
        return Ok(KernelEstimate::known(0, 0));
    }
    let set = d.simplices(scale, k)?;
    if set.is_empty() {
        return Ok(KernelEstimate::known(0, 0));
    }
    let b = BoundaryMatrix::new(&set, &d.simplices(scale, k - 1)?)?;
    let op = hermitian_boundary(&b)?;
    let rho = column_mixture(d, scale, &set, &b, config)?;
    Ok(match config.readout {
        Readout::ExactProjection => {
            KernelEstimate::from_eta(kernel_probability_exact(&rho, &op, config.zero_tolerance)?, set.len())
        }
        Readout::PhaseEstimation => {
            let r = kernel_probability_qpe(&rho, &op, config, k as u64)?;
            KernelEstimate {
                qpe_bits: Some(r.qpe_bits),
                ..KernelEstimate::from_eta(r.eta, set.len())
            }
        }
    })
}

/// `β_k = dim Ker ∂_k + dim Ker ∂_{k+1} - |S_{k+1}|` from simulated readouts.
pub fn betti_via_quantum(
    d: &DistanceMatrix,
    scale: f64,
    k: usize,
    config: &QtdaConfig,
) -> Result<QuantumBetti> {
    d.simplices(scale, k)?;
    let lower = estimate_kernel(d, scale, k, config)?;
    let upper = estimate_kernel(d, scale, k + 1, config)?;
    let total = lower.kernel_dim + upper.kernel_dim;
    let consistent = total >= upper.simplex_count;
    Ok(QuantumBetti {
        k,
        scale,
        betti: total.saturating_sub(upper.simplex_count),
        reliable: lower.reliable && upper.reliable && consistent,
        lower,
        upper,
    })
}

/// Amplitude amplification of the k-simplices at `scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverPreparation {
    pub space: u64,
    pub marked: u64,
    pub iterations: u64,
    /// Simulated probability of drawing a marked string.
    pub success_probability: f64,
    /// `sin²((2r+1)θ)` for the same search.
    pub predicted_probability: f64,
    pub state: StateVector,
    /// `state` post-selected on the marked strings and renormalized.
    pub conditional: StateVector,
}

/// Grover search over all `2^n` strings for the k-simplices at `scale`.
///
/// The oracle evaluates the membership test directly on each string; the
/// post-selected state is checked against [`prepare_simplicial_state`].
pub fn grover_prepare_simplices(d: &DistanceMatrix, scale: f64, k: usize) -> Result<GroverPreparation> {
    let n = d.len();
    let set = d.simplices(scale, k)?;
    if set.is_empty() {
        return Err(Error::EmptySimplexSet);
    }
    if n > MAX_GROVER_QUBITS {
        return Err(Error::TooLarge(format!("{n}-qubit Grover search")));
    }
    let oracle = |x: u64| {
        x.count_ones() as usize == k + 1
            && Simplex::from_bits(x).is_some_and(|s| d.diameter(s) <= scale)
    };
    let space = 1u64 << n;
    let marked = set.len() as u64;
    let iterations = optimal_grover_iterations(space, marked)?;
    let state = grover_amplify(n, oracle, iterations as usize)?;
    let success_probability = marked_probability(&state, oracle);

    let norm = success_probability.sqrt();
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if oracle(i as u64) { a / norm } else { Complex64::new(0.0, 0.0) })
        .collect();
    let conditional = StateVector::from_amplitudes(amps)?;
    let target = prepare_simplicial_state(&set, n)?;
    if !conditional.approx_eq_up_to_phase(&target, GROVER_STATE_TOLERANCE) {
        return Err(Error::Disagreement(
            "post-selected Grover state differs from the simplex state".into(),
        ));
    }
    Ok(GroverPreparation {
        space,
        marked,
        iterations,
        success_probability,
        predicted_probability: grover_success_probability(space, marked, iterations),
        state,
        conditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtda::demo::{counterexample_distances, three_point_distances, COUNTEREXAMPLE_SCALE};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn set_of(kets: &[&str], k: usize) -> SimplexSet {
        let members = kets.iter().map(|s| Simplex::from_ket(s).unwrap()).collect();
        SimplexSet::from_simplices(k, 0.0, members).unwrap()
    }

    fn ket_index(s: &str) -> usize {
        Simplex::from_ket(s).unwrap().bits() as usize
    }

    fn boundary(d: &DistanceMatrix, eps: f64, k: usize) -> BoundaryMatrix {
        crate::homology::boundary_at(d, eps, k).unwrap()
    }

    #[test]
    fn simplicial_states() {
        let one = prepare_simplicial_state(&set_of(&["110"], 1), 3).unwrap();
        assert_eq!(one.amplitude(ket_index("110")).re, 1.0);

        let two = prepare_simplicial_state(&set_of(&["110", "101"], 1), 3).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(two.amplitude(ket_index("110")).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(two.amplitude(ket_index("101")).re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(two.norm_sqr(), 1.0, epsilon = 1e-15);

        let all = prepare_simplicial_state(&set_of(&["110", "101", "011"], 1), 3).unwrap();
        let p = all.measure_distribution(&[0, 1, 2]).unwrap();
        for s in ["110", "101", "011"] {
            assert_abs_diff_eq!(p[ket_index(s)], 1.0 / 3.0, epsilon = 1e-15);
        }
        assert!(matches!(
            prepare_simplicial_state(&set_of(&[], 1), 3),
            Err(Error::EmptySimplexSet)
        ));
    }

    #[test]
    fn mixtures() {
        let rho = uniform_mixture(&set_of(&["110"], 1), 3).unwrap();
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.get(3, 3).re, 1.0, epsilon = 1e-12);

        let rho = uniform_mixture(&set_of(&["110", "101"], 1), 3).unwrap();
        assert!(rho.is_diagonal(1e-12));
        assert_abs_diff_eq!(rho.get(ket_index("110"), ket_index("110")).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.get(ket_index("101"), ket_index("101")).re, 0.5, epsilon = 1e-12);

        // one CNOT copy of a single qubit
        let one = StateVector::basis(1, 1);
        let rho = copy_and_trace(&one, &[0]).unwrap();
        assert_abs_diff_eq!(rho.get(1, 1).re, 1.0, epsilon = 1e-12);
        assert!(uniform_mixture(&set_of(&[], 1), 3).is_err());
    }

    #[test]
    fn hermitian_boundaries() {
        let d = three_point_distances();
        let b1 = hermitian_boundary(&boundary(&d, 3.5, 1)).unwrap();
        let expected1 = [
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 0.0, 0.0],
            [-1.0, 1.0, 0.0, 0.0],
        ];
        for (i, row) in expected1.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(b1.matrix()[(i, j)].re, v);
            }
        }
        let b2 = hermitian_boundary(&boundary(&d, 4.5, 1)).unwrap();
        let expected2 = [
            [0.0, 0.0, 0.0, -1.0, -1.0],
            [0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0],
            [-1.0, 1.0, 0.0, 0.0, 0.0],
            [-1.0, 0.0, 1.0, 0.0, 0.0],
        ];
        for (i, row) in expected2.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(b2.matrix()[(i, j)].re, v);
            }
        }
        let empty = hermitian_boundary(&boundary(&d, 3.5, 2)).unwrap();
        assert_eq!(empty.dim(), 1);
        assert_eq!(empty.spectral_radius(), 0.0);
    }

    fn column_mixture_at(d: &DistanceMatrix, eps: f64, k: usize) -> (DensityMatrix, HermitianOperator) {
        let b = boundary(d, eps, k);
        let set = d.simplices(eps, k).unwrap();
        let rho = column_state(&uniform_mixture(&set, d.len()).unwrap(), &b).unwrap();
        (rho, hermitian_boundary(&b).unwrap())
    }

    #[test]
    fn exact_kernel_probabilities() {
        let d = three_point_distances();
        for eps in [3.5, 4.5] {
            let (rho, op) = column_mixture_at(&d, eps, 1);
            assert_abs_diff_eq!(kernel_probability_exact(&rho, &op, 1e-9).unwrap(), 0.0, epsilon = 1e-12);
        }
        let (rho, op) = column_mixture_at(&counterexample_distances(), COUNTEREXAMPLE_SCALE, 1);
        assert_abs_diff_eq!(kernel_probability_exact(&rho, &op, 1e-9).unwrap(), 2.0 / 7.0, epsilon = 1e-9);
    }

    #[test]
    fn ill_separated_spectrum_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[5e-9, 0.0, 0.0, 1.0]);
        let op = HermitianOperator::from_real(&m).unwrap();
        let rho = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        assert!(matches!(
            kernel_probability_exact(&rho, &op, 1e-9),
            Err(Error::IllSeparatedSpectrum(_))
        ));
        assert!(kernel_probability_exact(&rho, &op, 1e-10).is_ok());
    }

    #[test]
    fn phase_estimation_readouts() {
        let d = three_point_distances();
        let (rho, op) = column_mixture_at(&d, 3.5, 1);
        let one_bit = QtdaConfig { qpe_bits: Some(1), ..Default::default() };
        let r = kernel_probability_qpe(&rho, &op, &one_bit, 0).unwrap();
        assert_abs_diff_eq!(r.eta, 0.0, epsilon = 1e-12);
        assert_eq!(r.qpe_bits, 1);

        let zero = HermitianOperator::zeros(2);
        let rho0 = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let r = kernel_probability_qpe(&rho0, &zero, &QtdaConfig::default(), 0).unwrap();
        assert_eq!(r.eta, 1.0);

        let (rho, op) = column_mixture_at(&counterexample_distances(), COUNTEREXAMPLE_SCALE, 1);
        let fine = QtdaConfig { qpe_bits: Some(14), ..Default::default() };
        let r = kernel_probability_qpe(&rho, &op, &fine, 0).unwrap();
        assert_abs_diff_eq!(r.eta, 2.0 / 7.0, epsilon = 1e-6);
    }

    #[test]
    fn auto_register_resolves_smallest_phase() {
        let d = three_point_distances();
        let (_, op) = column_mixture_at(&d, 3.5, 1);
        // phases 0 and ½
        assert_eq!(auto_qpe_bits(&op, &QtdaConfig::default()), 2);
        let (_, op) = column_mixture_at(&d, 4.5, 1);
        // smallest nonzero phase 1/6 needs 2^-t ≤ 1/12
        assert_eq!(auto_qpe_bits(&op, &QtdaConfig::default()), 4);
        assert_eq!(auto_qpe_bits(&HermitianOperator::zeros(3), &QtdaConfig::default()), 1);
    }

    #[test]
    fn sampled_readout_is_seeded() {
        let (rho, op) = column_mixture_at(&counterexample_distances(), COUNTEREXAMPLE_SCALE, 1);
        let cfg = QtdaConfig { shots: Some(20_000), rng_seed: 5, qpe_bits: Some(12), ..Default::default() };
        let a = kernel_probability_qpe(&rho, &op, &cfg, 1).unwrap();
        let b = kernel_probability_qpe(&rho, &op, &cfg, 1).unwrap();
        assert_eq!(a, b);
        assert!((a.eta - 2.0 / 7.0).abs() < 0.02);
        assert_eq!(KernelEstimate::from_eta(a.eta, 7).kernel_dim, 2);
    }

    #[test]
    fn rounding_and_ties() {
        let e = KernelEstimate::from_eta(2.0 / 7.0, 7);
        assert_eq!(e.kernel_dim, 2);
        assert!(e.reliable);
        let tie = KernelEstimate::from_eta(0.25, 2);
        assert!(!tie.reliable);
        let e = KernelEstimate::from_eta(0.0, 0);
        assert_eq!(e.kernel_dim, 0);
        assert!(e.reliable);
    }

    #[test]
    fn three_point_betti_numbers() {
        let d = three_point_distances();
        for config in [QtdaConfig::default(), QtdaConfig::exact()] {
            let cases = [(3.5, 0, 2), (4.5, 0, 1), (3.5, 1, 0), (4.5, 1, 0)];
            for (eps, k, beta) in cases {
                let r = betti_via_quantum(&d, eps, k, &config).unwrap();
                assert_eq!(r.betti, beta, "ε={eps} k={k}");
                assert!(r.reliable);
            }
        }
        let r = betti_via_quantum(&d, 3.5, 0, &QtdaConfig::default()).unwrap();
        assert_eq!(r.lower.kernel_dim, 3);
        assert_eq!(r.upper.simplex_count, 1);
    }

    #[test]
    fn betti_with_grover_preparation() {
        let d = three_point_distances();
        let config = QtdaConfig { grover: GroverMode::ExactIterations, ..Default::default() };
        assert_eq!(betti_via_quantum(&d, 4.5, 0, &config).unwrap().betti, 1);
        assert_eq!(betti_via_quantum(&d, 6.0, 0, &config).unwrap().betti, 1);
    }

    #[test]
    fn grover_preparations() {
        let d = three_point_distances();
        let g = grover_prepare_simplices(&d, 4.5, 1).unwrap();
        assert_eq!((g.space, g.marked, g.iterations), (8, 2, 1));
        assert_abs_diff_eq!(g.success_probability, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.predicted_probability, 1.0, epsilon = 1e-12);
        let h = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(g.conditional.amplitude(ket_index("110")).norm(), h, epsilon = 1e-12);
        assert_abs_diff_eq!(g.conditional.amplitude(ket_index("101")).norm(), h, epsilon = 1e-12);

        let top = grover_prepare_simplices(&d, 5.0, 2).unwrap();
        assert_eq!(top.marked, 1);
        assert_abs_diff_eq!(top.conditional.amplitude(7).norm(), 1.0, epsilon = 1e-12);

        assert!(matches!(grover_prepare_simplices(&d, 2.0, 1), Err(Error::EmptySimplexSet)));
    }

    #[test]
    fn pure_readout_disagrees_with_mixture() {
        let d = counterexample_distances();
        let b = boundary(&d, COUNTEREXAMPLE_SCALE, 1);
        let set = d.simplices(COUNTEREXAMPLE_SCALE, 1).unwrap();
        let pure = DensityMatrix::from_pure(&prepare_simplicial_state(&set, 6).unwrap());
        let op = hermitian_boundary(&b).unwrap();
        let eta = kernel_probability_exact(&column_state(&pure, &b).unwrap(), &op, 1e-9).unwrap();
        assert!((eta - 2.0 / 7.0).abs() > 0.1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn copy_circuit_matches_direct_mixture(mask in proptest::collection::vec(any::<bool>(), 35)) {
            let members: Vec<Simplex> = crate::complex::subsets(7, 3)
                .zip(&mask)
                .filter(|(_, &keep)| keep)
                .map(|(s, _)| s)
                .take(32)
                .collect();
            prop_assume!(!members.is_empty());
            let set = SimplexSet::from_simplices(2, 0.0, members).unwrap();
            let all: Vec<usize> = (0..7).collect();
            let circuit = copy_and_trace(&prepare_simplicial_state(&set, 7).unwrap(), &all).unwrap();
            let direct = uniform_mixture_direct(&set, 7).unwrap();
            prop_assert!(circuit.max_abs_diff(&direct) <= 1e-10);
        }

        #[test]
        fn nonzero_spectrum_is_symmetric(seed in 0u64..500) {
            let d = crate::qtda::trial_distances(6, seed, 0).unwrap();
            let scale = 0.6;
            for k in 1..3 {
                let b = boundary(&d, scale, k);
                let op = hermitian_boundary(&b).unwrap();
                let v = op.eigenvalues();
                for (a, b) in v.iter().zip(v.iter().rev()) {
                    prop_assert!((a + b).abs() <= 1e-9);
                }
            }
        }
    }
}
