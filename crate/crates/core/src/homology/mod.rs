//! Exact rational homology of Vietoris-Rips complexes.

mod barcode;
mod boundary;
pub mod rank;

pub use barcode::{barcode, Barcode, Interval};
pub use boundary::BoundaryMatrix;

use serde::{Deserialize, Serialize};

use crate::complex::{DistanceMatrix, SimplexSet};
use crate::error::{Error, Result};

/// The boundary map of dimension `k` at `scale`; the zero map for `k = 0`.
pub fn boundary_at(d: &DistanceMatrix, scale: f64, k: usize) -> Result<BoundaryMatrix> {
    let cols = d.simplices(scale, k)?;
    if k == 0 {
        return Ok(BoundaryMatrix::zero_map(&cols));
    }
    BoundaryMatrix::new(&cols, &d.simplices(scale, k - 1)?)
}

/// Chain-group sizes and boundary ranks of one complex, up to a dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSummary {
    /// `|S_k|` for k = 0..=top.
    pub sizes: Vec<usize>,
    /// `rank ∂_k` for k = 0..=top+1, with `rank ∂_0 = 0`.
    pub ranks: Vec<usize>,
}

impl ChainSummary {
    /// Summary of dimensions 0..=top (ranks include `∂_{top+1}`).
    pub fn at_scale(d: &DistanceMatrix, scale: f64, top: usize) -> Result<Self> {
        let n = d.len();
        if top >= n {
            return Err(Error::DimensionOutOfRange { k: top, n });
        }
        let sets: Vec<SimplexSet> = (0..=(top + 1).min(n - 1))
            .map(|k| d.simplices(scale, k))
            .collect::<Result<_>>()?;
        let mut ranks = vec![0];
        for k in 1..=top + 1 {
            let r = match sets.get(k) {
                Some(cols) if !cols.is_empty() => BoundaryMatrix::new(cols, &sets[k - 1])?.rank(),
                _ => 0,
            };
            ranks.push(r);
        }
        let sizes = sets.iter().take(top + 1).map(SimplexSet::len).collect();
        Ok(Self { sizes, ranks })
    }

    /// `β_k = (|S_k| - rank ∂_k) - rank ∂_{k+1}`.
    pub fn betti(&self, k: usize) -> usize {
        self.sizes[k] - self.ranks[k] - self.ranks[k + 1]
    }

    pub fn kernel_dim(&self, k: usize) -> usize {
        self.sizes[k] - self.ranks[k]
    }
}

/// Betti number `β_k` of the complex at `scale`.
pub fn betti_at_scale(d: &DistanceMatrix, scale: f64, k: usize) -> Result<usize> {
    Ok(ChainSummary::at_scale(d, scale, k)?.betti(k))
}

/// `β_0..=β_max_k` at one scale.
pub fn betti_numbers(d: &DistanceMatrix, scale: f64, max_k: usize) -> Result<Vec<usize>> {
    let summary = ChainSummary::at_scale(d, scale, max_k)?;
    Ok((0..=max_k).map(|k| summary.betti(k)).collect())
}

/// Connected components of the ε-neighbourhood graph, by union-find.
pub fn connected_components(d: &DistanceMatrix, scale: f64) -> usize {
    let n = d.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut count = n;
    for i in 0..n {
        for j in (i + 1)..n {
            if d.get(i, j) <= scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                    count -= 1;
                }
            }
        }
    }
    count
}

/// One representative scale inside each interval on which the complex is
/// constant: midpoints between critical scales, plus one point past the last.
pub fn sample_scales(d: &DistanceMatrix) -> Vec<f64> {
    let crit = d.critical_scales();
    let mut out = Vec::with_capacity(crit.len() + 1);
    let mut prev = 0.0;
    for &c in &crit {
        out.push(0.5 * (prev + c));
        prev = c;
    }
    out.push(crit.last().map_or(1.0, |&c| c + 1.0));
    out
}

/// β_k as a step function of the scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BettiCurve {
    pub k: usize,
    /// Critical scales; interval `i` is `(breakpoints[i-1], breakpoints[i])`
    /// with an implicit leading 0 and trailing +∞.
    pub breakpoints: Vec<f64>,
    pub values: Vec<usize>,
}

impl BettiCurve {
    /// Value of the curve at a scale that is not itself critical.
    pub fn value_at(&self, scale: f64) -> usize {
        let idx = self.breakpoints.partition_point(|&b| b < scale);
        self.values[idx]
    }
}

/// Evaluates `β_k` on every interval between critical scales.
pub fn betti_curve(d: &DistanceMatrix, k: usize) -> Result<BettiCurve> {
    let values = sample_scales(d)
        .into_iter()
        .map(|s| betti_at_scale(d, s, k))
        .collect::<Result<_>>()?;
    Ok(BettiCurve {
        k,
        breakpoints: d.critical_scales(),
        values,
    })
}
