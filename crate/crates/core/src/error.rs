use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("distance matrix is empty")]
    EmptyMatrix,
    #[error("distance matrix is asymmetric at ({i}, {j}): {a} vs {b}")]
    Asymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("negative or non-finite distance {value} at ({i}, {j})")]
    BadDistance { i: usize, j: usize, value: f64 },
    #[error("nonzero diagonal entry {value} at ({i}, {i})")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("point {index} has {len} coordinates, expected {expected}")]
    RaggedPoints {
        index: usize,
        len: usize,
        expected: usize,
    },
    #[error("simplex dimension {k} out of range for {n} points")]
    DimensionOutOfRange { k: usize, n: usize },
    #[error("invalid scale {0}")]
    InvalidScale(f64),
    #[error("boundary dimension mismatch: columns have dimension {cols}, rows have dimension {rows}")]
    DimensionMismatch { cols: usize, rows: usize },
    #[error("face {face} of simplex {simplex} is missing from the row set")]
    MissingFace { simplex: String, face: String },
    #[error("simplex set is empty")]
    EmptySimplexSet,
    #[error("oracle marks no basis states")]
    NoMarkedStates,
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("qubit {qubit} out of range for {qubits} qubits")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("qubit {0} appears more than once")]
    OverlappingQubits(usize),
    #[error("kept qubit set is empty")]
    EmptyKeep,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("eigensolver failed to converge")]
    Convergence,
    #[error("spectrum is ill-separated: eigenvalue {0:.3e} lies between the zero tolerance and 10x the tolerance")]
    IllSeparatedSpectrum(f64),
    #[error("integer overflow during exact elimination")]
    Overflow,
    #[error("barcode disagrees with the Betti curve in dimension {k} at scale {scale}: {bars} bars vs beta = {betti}")]
    InconsistentBarcode {
        k: usize,
        scale: f64,
        bars: usize,
        betti: usize,
    },
    #[error("independent computations disagree: {0}")]
    Disagreement(String),
    #[error("problem too large for dense simulation: {0}")]
    TooLarge(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence
                | Error::IllSeparatedSpectrum(_)
                | Error::Overflow
                | Error::InconsistentBarcode { .. }
                | Error::Disagreement(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
