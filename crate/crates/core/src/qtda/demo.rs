//! End-to-end reproductions of the three-point experiment and the
//! six-point counterexample to pure-state input.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::pipeline::{
    column_state, hermitian_boundary, kernel_probability_exact,
    prepare_simplicial_state, uniform_mixture, KernelEstimate,
};
use crate::complex::{DistanceMatrix, Simplex, SimplexSet};
use crate::error::{Error, Result};
use crate::homology::{barcode, betti_curve, betti_numbers, Barcode, BettiCurve, BoundaryMatrix};
use crate::qsim::{phase_estimate, DensityMatrix, Gate, HermitianOperator, StateVector};

const AGREEMENT_TOLERANCE: f64 = 1e-9;
const ZERO_TOLERANCE: f64 = 1e-9;

/// Distances of the three-point experiment: point 1 is 3 from point 2 and
/// 4 from point 3, which are 5 apart.
pub fn three_point_distances() -> DistanceMatrix {
    DistanceMatrix::new(&[
        vec![0.0, 3.0, 4.0],
        vec![3.0, 0.0, 5.0],
        vec![4.0, 5.0, 0.0],
    ])
    .expect("valid distances")
}

/// One scale of the three-point run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreePointScale {
    pub scale: f64,
    /// Whether the preparation circuit includes the optional Hadamard.
    pub hadamard: bool,
    pub edges: Vec<String>,
    /// Prepared simplex state as (ket, amplitude) pairs.
    pub state: Vec<(String, f64)>,
    /// Diagonal of the mixture after the one-qubit copy.
    pub mixture: Vec<(String, f64)>,
    /// Eigenvalues of the Hermitian boundary `B`.
    pub spectrum: Vec<f64>,
    /// Eigenvalues of the compiled operator `c·B²`, run as `exp(iπ·c·B²)`.
    pub compiled_spectrum: Vec<f64>,
    pub compiled_factor: f64,
    /// Register distribution of the single-CNOT circuit.
    pub compiled_register: Vec<f64>,
    /// Register distribution of one-qubit phase estimation.
    pub general_register: Vec<f64>,
    /// Exact kernel projection probability.
    pub eta_exact: f64,
    /// Zero-outcome probability of the register.
    pub eta: f64,
    pub kernel: KernelEstimate,
    /// `[β₀, β₁]` from the readout.
    pub betti: Vec<usize>,
    /// `[β₀, β₁]` from exact ranks.
    pub betti_exact: Vec<usize>,
}

/// The complete three-point reproduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreePointReport {
    pub distances: Vec<Vec<f64>>,
    pub scales: Vec<ThreePointScale>,
    pub betti_curve: BettiCurve,
    pub barcode: Barcode,
}

/// Runs the three-point experiment at ε₁ = 3.5 and ε₂ = 4.5.
///
/// Each scale is run through the five-qubit circuit (three point qubits, a
/// copy ancilla and a one-qubit register) and through general phase
/// estimation of `exp(iπ·c·B²)`; the two register distributions must agree.
pub fn three_point_demo() -> Result<ThreePointReport> {
    let d = three_point_distances();
    let scales = [(3.5, false, 0.5), (4.5, true, 1.0)]
        .into_iter()
        .map(|(eps, hadamard, factor)| three_point_scale(&d, eps, hadamard, factor))
        .collect::<Result<_>>()?;
    Ok(ThreePointReport {
        distances: d.rows(),
        scales,
        betti_curve: betti_curve(&d, 0)?,
        barcode: barcode(&d, 1)?,
    })
}

fn three_point_scale(d: &DistanceMatrix, eps: f64, hadamard: bool, factor: f64) -> Result<ThreePointScale> {
    let n = d.len();
    let edges = d.simplices(eps, 1)?;
    let vertices = d.simplices(eps, 0)?;
    let boundary = BoundaryMatrix::new(&edges, &vertices)?;

    // qubits 0..3 are the points, 3 the copy ancilla, 4 the register
    let mut psi = StateVector::zero(5);
    psi.apply_gate_mut(Gate::X, 0)?;
    psi.apply_gate_mut(Gate::X, 1)?;
    if hadamard {
        psi.apply_gate_mut(Gate::H, 2)?;
    }
    psi = psi.cnot(2, 1)?;
    let prepared = psi.partial_trace(&[0, 1, 2])?;
    let target = DensityMatrix::from_pure(&prepare_simplicial_state(&edges, n)?);
    agree("prepared state", prepared.max_abs_diff(&target))?;

    psi = psi.cnot(1, 3)?;
    let rho = psi.partial_trace(&[0, 1, 2])?;
    agree("partial copy", rho.max_abs_diff(&uniform_mixture(&edges, n)?))?;

    psi = psi.cnot(0, 4)?;
    let compiled_register = psi.measure_distribution(&[4])?;

    let b = hermitian_boundary(&boundary)?;
    let compiled = b.map_spectrum(|v| factor * v * v);
    let u = on_point_qubits(&boundary, &compiled)?.unitary_exponential(0.5);
    let general_register = phase_estimate(&u, &rho, 1)?;
    for (a, g) in compiled_register.iter().zip(&general_register) {
        agree("compiled and general phase estimation", (a - g).abs())?;
    }

    let eta_exact = kernel_probability_exact(&column_state(&rho, &boundary)?, &b, ZERO_TOLERANCE)?;
    let eta = general_register[0];
    let kernel = KernelEstimate::from_eta(eta, edges.len());
    let beta0 = n + kernel.kernel_dim - edges.len();
    // no triangles at either scale, so ∂₂ has no columns
    let beta1 = kernel.kernel_dim;

    let ket = |s: &Simplex| s.ket(n);
    let state = prepare_simplicial_state(&edges, n)?;
    Ok(ThreePointScale {
        scale: eps,
        hadamard,
        edges: edges.members().iter().map(ket).collect(),
        state: edges
            .members()
            .iter()
            .map(|s| (ket(s), state.amplitude(s.bits() as usize).re))
            .collect(),
        mixture: edges
            .members()
            .iter()
            .map(|s| (ket(s), rho.get(s.bits() as usize, s.bits() as usize).re))
            .collect(),
        spectrum: b.eigenvalues().to_vec(),
        compiled_spectrum: compiled.eigenvalues().to_vec(),
        compiled_factor: factor,
        compiled_register,
        general_register,
        eta_exact,
        eta,
        kernel,
        betti: vec![beta0, beta1],
        betti_exact: betti_numbers(d, eps, 1)?,
    })
}

/// `op`, indexed by the simplices of `boundary`, placed on the basis states
/// of the point qubits, zero elsewhere.
fn on_point_qubits(boundary: &BoundaryMatrix, op: &HermitianOperator) -> Result<HermitianOperator> {
    let kets: Vec<usize> = boundary
        .rows()
        .iter()
        .chain(boundary.cols())
        .map(|s| s.bits() as usize)
        .collect();
    let dim = kets.iter().max().map_or(1, |&m| (m + 1).next_power_of_two());
    let mut m = DMatrix::zeros(dim, dim);
    for (a, &i) in kets.iter().enumerate() {
        for (b, &j) in kets.iter().enumerate() {
            m[(i, j)] = op.matrix()[(a, b)];
        }
    }
    HermitianOperator::new(m)
}

fn agree(what: &str, diff: f64) -> Result<()> {
    if diff > AGREEMENT_TOLERANCE {
        return Err(Error::Disagreement(format!("{what}: difference {diff:.3e}")));
    }
    Ok(())
}

/// Edges of the six-point counterexample as zero-based point pairs, with
/// their labels a..g.
pub const COUNTEREXAMPLE_EDGES: [(char, usize, usize); 7] = [
    ('a', 0, 1),
    ('b', 1, 2),
    ('c', 2, 3),
    ('d', 0, 3),
    ('e', 0, 4),
    ('f', 4, 5),
    ('g', 1, 5),
];

/// Column signs, in labelling order a..g, relative to the canonical
/// orientation (faces with sign `(-1)^l`).
pub const COUNTEREXAMPLE_SIGNS: [i8; 7] = [-1, -1, -1, 1, -1, -1, 1];

/// Scale at which exactly the seven edges are present.
pub const COUNTEREXAMPLE_SCALE: f64 = 1.5;

/// Six points whose listed edges have length 1 and all other pairs 2.
pub fn counterexample_distances() -> DistanceMatrix {
    let mut raw = vec![vec![2.0; 6]; 6];
    for (i, row) in raw.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(_, i, j) in &COUNTEREXAMPLE_EDGES {
        raw[i][j] = 1.0;
        raw[j][i] = 1.0;
    }
    DistanceMatrix::new(&raw).expect("valid distances")
}

/// Kernel probabilities of the counterexample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub scale: f64,
    /// Edge labels in column order.
    pub labels: Vec<char>,
    /// `∂₁` with columns in label order and rows ordered by point.
    pub boundary: Vec<Vec<i64>>,
    /// Kernel probability of the uniform mixture over the edges.
    pub mixed: f64,
    /// Kernel probability of the uniform superposition of the edges.
    pub pure: f64,
    /// `dim Ker ∂₁` from exact rank.
    pub kernel_dim: usize,
    pub edge_count: usize,
}

/// Projects the uniform mixture and the uniform superposition of the seven
/// edges onto the kernel of `B₁`. The mixture gives `dim Ker ∂₁ / |S₁|`;
/// the superposition does not.
pub fn counterexample_demo() -> Result<CounterexampleReport> {
    let d = counterexample_distances();
    let n = d.len();
    let edges = d.simplices(COUNTEREXAMPLE_SCALE, 1)?;
    if edges.len() != COUNTEREXAMPLE_EDGES.len() || !d.simplices(COUNTEREXAMPLE_SCALE, 2)?.is_empty() {
        return Err(Error::Disagreement("counterexample complex has the wrong shape".into()));
    }
    let canonical = BoundaryMatrix::new(&edges, &d.simplices(COUNTEREXAMPLE_SCALE, 0)?)?;
    let order = label_order(&edges)?;
    let mut signs = vec![1i8; edges.len()];
    for (label, &col) in order.iter().enumerate() {
        signs[col] = COUNTEREXAMPLE_SIGNS[label];
    }
    let oriented = canonical.reoriented(&signs)?;
    let b = hermitian_boundary(&oriented)?;

    let mixture = column_state(&uniform_mixture(&edges, n)?, &oriented)?;
    let mixed = kernel_probability_exact(&mixture, &b, ZERO_TOLERANCE)?;
    let canonical_mixed = kernel_probability_exact(
        &column_state(&uniform_mixture(&edges, n)?, &canonical)?,
        &hermitian_boundary(&canonical)?,
        ZERO_TOLERANCE,
    )?;
    agree("mixture under both orientations", (mixed - canonical_mixed).abs())?;

    let superposition = column_state(
        &DensityMatrix::from_pure(&prepare_simplicial_state(&edges, n)?),
        &oriented,
    )?;
    let pure = kernel_probability_exact(&superposition, &b, ZERO_TOLERANCE)?;

    let dense = oriented.to_dense();
    let boundary = dense
        .iter()
        .map(|row| order.iter().map(|&c| row[c]).collect())
        .collect();
    Ok(CounterexampleReport {
        scale: COUNTEREXAMPLE_SCALE,
        labels: COUNTEREXAMPLE_EDGES.iter().map(|e| e.0).collect(),
        boundary,
        mixed,
        pure,
        kernel_dim: canonical.kernel_dim(),
        edge_count: edges.len(),
    })
}

/// Canonical column index of each labelled edge.
fn label_order(edges: &SimplexSet) -> Result<Vec<usize>> {
    COUNTEREXAMPLE_EDGES
        .iter()
        .map(|&(label, i, j)| {
            Simplex::from_vertices(&[i, j])
                .and_then(|s| edges.index_of(s))
                .ok_or_else(|| Error::Disagreement(format!("edge {label} missing")))
        })
        .collect()
}
