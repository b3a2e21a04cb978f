//! Persistence barcodes of the Vietoris-Rips filtration.
//!
//! Simplices enter in order of (diameter, dimension, bit-set) and the
//! filtered boundary matrix is column-reduced over the rationals.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{betti_curve, sample_scales};
use crate::complex::{subsets, DistanceMatrix, Simplex};
use crate::error::{Error, Result};

/// A half-open persistence interval `[birth, death)`; `death = None` is +∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub birth: f64,
    pub death: Option<f64>,
}

impl Interval {
    pub fn contains(&self, scale: f64) -> bool {
        self.birth <= scale && self.death.is_none_or(|d| scale < d)
    }
}

/// Intervals per homological dimension; `bars[k]` holds dimension k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    pub bars: Vec<Vec<Interval>>,
}

impl Barcode {
    pub fn dimension(&self, k: usize) -> &[Interval] {
        self.bars.get(k).map_or(&[], Vec::as_slice)
    }

    /// Number of bars of dimension `k` alive at `scale`.
    pub fn count_at(&self, k: usize, scale: f64) -> usize {
        self.dimension(k).iter().filter(|i| i.contains(scale)).count()
    }
}

type Column = Vec<(usize, BigRational)>;

fn low(col: &Column) -> Option<usize> {
    col.last().map(|(i, _)| *i)
}

/// `a -= factor * b` on sorted sparse columns.
fn subtract_scaled(a: &Column, b: &Column, factor: &BigRational) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map(|e| e.0);
        let rb = b.get(j).map(|e| e.0);
        match (ra, rb) {
            (Some(x), Some(y)) if x == y => {
                let v = &a[i].1 - factor * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(factor * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Persistence intervals for dimensions `0..=max_k`.
///
/// The result is checked against [`betti_curve`] at every sample scale.
pub fn barcode(d: &DistanceMatrix, max_k: usize) -> Result<Barcode> {
    let n = d.len();
    if max_k >= n {
        return Err(Error::DimensionOutOfRange { k: max_k, n });
    }
    let top = (max_k + 1).min(n - 1);
    let mut filtration: Vec<(f64, usize, Simplex)> = (0..=top)
        .flat_map(|k| subsets(n, k + 1).map(move |s| (k, s)))
        .map(|(k, s)| (d.diameter(s), k, s))
        .collect();
    filtration.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let position: HashMap<Simplex, usize> = filtration
        .iter()
        .enumerate()
        .map(|(i, &(_, _, s))| (s, i))
        .collect();

    let mut pivots: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<Column> = Vec::with_capacity(filtration.len());
    let mut bars = vec![Vec::new(); max_k + 1];
    let mut killed = vec![false; filtration.len()];

    for (j, &(value, k, s)) in filtration.iter().enumerate() {
        let mut col: Column = if k == 0 {
            Vec::new()
        } else {
            let mut c: Column = s
                .faces()
                .map(|(l, f)| {
                    let sign = if l % 2 == 0 { 1 } else { -1 };
                    (position[&f], BigRational::from_integer(sign.into()))
                })
                .collect();
            c.sort_by_key(|e| e.0);
            c
        };
        while let Some(p) = low(&col) {
            let Some(&other) = pivots.get(&p) else { break };
            let factor = &col.last().unwrap().1 / &reduced[other].last().unwrap().1;
            col = subtract_scaled(&col, &reduced[other], &factor);
        }
        if let Some(p) = low(&col) {
            pivots.insert(p, j);
            killed[p] = true;
            let (birth, dim, _) = filtration[p];
            if dim <= max_k && birth < value {
                bars[dim].push(Interval {
                    birth,
                    death: Some(value),
                });
            }
        }
        reduced.push(col);
    }

    for (j, &(birth, k, _)) in filtration.iter().enumerate() {
        // a positive simplex that is never killed is an essential class; the
        // top dimension is only included to supply deaths
        if k <= max_k && !killed[j] && reduced[j].is_empty() {
            bars[k].push(Interval { birth, death: None });
        }
    }
    for b in &mut bars {
        b.sort_by(|x, y| {
            x.birth
                .total_cmp(&y.birth)
                .then(x.death.unwrap_or(f64::INFINITY).total_cmp(&y.death.unwrap_or(f64::INFINITY)))
        });
    }
    let code = Barcode { bars };
    check_against_curves(d, &code, max_k)?;
    Ok(code)
}

fn check_against_curves(d: &DistanceMatrix, code: &Barcode, max_k: usize) -> Result<()> {
    let scales = sample_scales(d);
    for k in 0..=max_k {
        let curve = betti_curve(d, k)?;
        for (&scale, &betti) in scales.iter().zip(&curve.values) {
            let bars = code.count_at(k, scale);
            if bars != betti {
                return Err(Error::InconsistentBarcode {
                    k,
                    scale,
                    bars,
                    betti,
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bars(code: &Barcode, k: usize) -> Vec<(f64, Option<f64>)> {
        code.dimension(k).iter().map(|i| (i.birth, i.death)).collect()
    }

    #[test]
    fn three_point_barcode() {
        let d = DistanceMatrix::new(&[
            vec![0.0, 3.0, 5.0],
            vec![3.0, 0.0, 4.0],
            vec![5.0, 4.0, 0.0],
        ])
        .unwrap();
        let code = barcode(&d, 1).unwrap();
        assert_eq!(
            bars(&code, 0),
            vec![(0.0, Some(3.0)), (0.0, Some(4.0)), (0.0, None)]
        );
        assert!(code.dimension(1).is_empty());
    }

    #[test]
    fn two_points() {
        let d = DistanceMatrix::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let code = barcode(&d, 1).unwrap();
        assert_eq!(bars(&code, 0), vec![(0.0, Some(1.0)), (0.0, None)]);
        assert!(code.dimension(1).is_empty());
        assert!(code.dimension(5).is_empty());
    }

    #[test]
    fn square_loop_persists_between_side_and_diagonal() {
        let g = 2f64.sqrt();
        let d = DistanceMatrix::new(&[
            vec![0.0, 1.0, g, 1.0],
            vec![1.0, 0.0, 1.0, g],
            vec![g, 1.0, 0.0, 1.0],
            vec![1.0, g, 1.0, 0.0],
        ])
        .unwrap();
        let code = barcode(&d, 2).unwrap();
        assert_eq!(bars(&code, 1), vec![(1.0, Some(g))]);
        assert_eq!(code.dimension(0).len(), 4);
        assert!(code.dimension(2).is_empty());
    }

    #[test]
    fn rejects_dimension_beyond_points() {
        let d = DistanceMatrix::new(&[vec![0.0]]).unwrap();
        assert!(barcode(&d, 1).is_err());
        assert_eq!(bars(&barcode(&d, 0).unwrap(), 0), vec![(0.0, None)]);
    }
}
