use crate::complex::{Simplex, SimplexSet};
use crate::error::{Error, Result};

/// Matrix of the boundary map from k-chains to (k-1)-chains.
///
/// Rows follow the canonical order of the (k-1)-simplices and columns that of
/// the k-simplices. Omitting the l-th smallest vertex contributes `(-1)^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    k: usize,
    rows: Vec<Simplex>,
    cols: Vec<Simplex>,
    entries: Vec<i8>,
}

impl BoundaryMatrix {
    /// Boundary of `cols` (dimension k) into `rows` (dimension k-1).
    pub fn new(cols: &SimplexSet, rows: &SimplexSet) -> Result<Self> {
        let k = cols.dimension();
        if k == 0 || rows.dimension() + 1 != k {
            return Err(Error::DimensionMismatch {
                cols: k,
                rows: rows.dimension(),
            });
        }
        let (nr, nc) = (rows.len(), cols.len());
        let mut entries = vec![0i8; nr * nc];
        for (j, &s) in cols.members().iter().enumerate() {
            for (l, face) in s.faces() {
                let i = rows.index_of(face).ok_or_else(|| Error::MissingFace {
                    simplex: s.to_string(),
                    face: face.to_string(),
                })?;
                entries[i * nc + j] = if l % 2 == 0 { 1 } else { -1 };
            }
        }
        Ok(Self {
            k,
            rows: rows.members().to_vec(),
            cols: cols.members().to_vec(),
            entries,
        })
    }

    /// The boundary of 0-simplices: the zero map onto an empty row space.
    pub fn zero_map(cols: &SimplexSet) -> Self {
        Self {
            k: 0,
            rows: Vec::new(),
            cols: cols.members().to_vec(),
            entries: Vec::new(),
        }
    }

    /// Flips the orientation of every column whose sign is negative.
    ///
    /// Orientation choices change the matrix but not its rank or kernel
    /// dimension.
    pub fn reoriented(&self, signs: &[i8]) -> Result<Self> {
        if signs.len() != self.cols.len() {
            return Err(Error::SizeMismatch {
                expected: self.cols.len(),
                got: signs.len(),
            });
        }
        let mut out = self.clone();
        let nc = self.cols.len();
        for (idx, e) in out.entries.iter_mut().enumerate() {
            if signs[idx % nc] < 0 {
                *e = -*e;
            }
        }
        Ok(out)
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[Simplex] {
        &self.rows
    }

    pub fn cols(&self) -> &[Simplex] {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.cols.len() + j]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self.get(i, j) as i64).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        super::rank::rank(&self.to_dense())
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols() - self.rank()
    }
}
