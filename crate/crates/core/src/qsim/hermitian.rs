use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{c, hermitian_deviation, HERMITIAN_TOLERANCE, POST_TOLERANCE};
use crate::error::{Error, Result};

/// A Hermitian matrix together with its eigen-decomposition.
///
/// Eigenvalues are ascending and column `i` of [`Self::eigenvectors`] belongs
/// to eigenvalue `i`.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    m: DMatrix<Complex64>,
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::SizeMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let dev = hermitian_deviation(&m);
        if dev > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(dev));
        }
        let (values, vectors) = eigendecompose(&m)?;
        let op = Self { m, values, vectors };
        op.check_decomposition()?;
        Ok(op)
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|x| c(x, 0.0)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::from_element(dim, dim, c(0.0, 0.0)),
            values: vec![0.0; dim],
            vectors: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// `f(A)` sharing this operator's eigenvectors.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let mut order: Vec<usize> = (0..mapped.len()).collect();
        order.sort_by(|&a, &b| mapped[a].total_cmp(&mapped[b]));
        let values: Vec<f64> = order.iter().map(|&i| mapped[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, col| {
            self.vectors[(r, order[col])]
        });
        let m = reconstruct(&vectors, values.iter().map(|&v| c(v, 0.0)));
        Self { m, values, vectors }
    }

    /// `exp(2πi·scale·A)`.
    pub fn unitary_exponential(&self, scale: f64) -> DMatrix<Complex64> {
        reconstruct(
            &self.vectors,
            self.values
                .iter()
                .map(|&v| Complex64::cis(2.0 * PI * scale * v)),
        )
    }

    /// Orthogonal projector onto the eigenvectors whose eigenvalue satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> DMatrix<Complex64> {
        reconstruct(
            &self.vectors,
            self.values
                .iter()
                .map(|&v| if keep(v) { c(1.0, 0.0) } else { c(0.0, 0.0) }),
        )
    }

    /// `V Λ V†`, for checking the decomposition.
    pub fn reconstructed(&self) -> DMatrix<Complex64> {
        reconstruct(&self.vectors, self.values.iter().map(|&v| c(v, 0.0)))
    }

    fn check_decomposition(&self) -> Result<()> {
        let n = self.dim();
        let gram = self.vectors.adjoint() * &self.vectors;
        let ortho = (&gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let residual = (&self.m * &self.vectors
            - DMatrix::from_fn(n, n, |r, col| self.vectors[(r, col)] * self.values[col]))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
        if ortho > POST_TOLERANCE || residual > POST_TOLERANCE {
            return Err(Error::Convergence);
        }
        Ok(())
    }
}

fn reconstruct(
    vectors: &DMatrix<Complex64>,
    diag: impl Iterator<Item = Complex64>,
) -> DMatrix<Complex64> {
    let d: Vec<Complex64> = diag.collect();
    let scaled = DMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, col| {
        vectors[(r, col)] * d[col]
    });
    scaled * vectors.adjoint()
}

const MAX_SWEEPS: usize = 100_000;

fn eigendecompose(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let n = m.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = if m.iter().all(|z| z.im == 0.0) {
        let real = m.map(|z| z.re);
        let eig =
            SymmetricEigen::try_new(real, f64::EPSILON, MAX_SWEEPS).ok_or(Error::Convergence)?;
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(|x| c(x, 0.0)),
        )
    } else {
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS)
            .ok_or(Error::Convergence)?;
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted_values = order.iter().map(|&i| values[i]).collect();
    let sorted_vectors = DMatrix::from_fn(n, n, |r, col| vectors[(r, order[col])]);
    Ok((sorted_values, sorted_vectors))
}
