//! Vietoris-Rips complexes over a finite metric space.
//!
//! Simplices are vertex bit-sets: bit `j` is point `j + 1`. Sets of simplices
//! are kept sorted by the integer value of that bit-set, which fixes the row
//! and column order of every boundary matrix built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest asymmetry accepted on ingestion.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Largest point count a bit-set can hold.
pub const MAX_POINTS: usize = 63;

/// A validated, symmetric table of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a raw square table and stores it symmetrized.
    pub fn new(raw: &[Vec<f64>]) -> Result<Self> {
        let n = raw.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_POINTS {
            return Err(Error::TooLarge(format!("{n} points (limit {MAX_POINTS})")));
        }
        for (row, r) in raw.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            let diag = raw[i][i];
            if !diag.is_finite() || diag.abs() > SYMMETRY_TOLERANCE {
                return Err(Error::NonzeroDiagonal { i, value: diag });
            }
            for j in 0..n {
                let v = raw[i][j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::BadDistance { i, j, value: v });
                }
            }
            for j in (i + 1)..n {
                let (a, b) = (raw[i][j], raw[j][i]);
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::Asymmetric { i, j, a, b });
                }
                let s = 0.5 * (a + b);
                d[i * n + j] = s;
                d[j * n + i] = s;
            }
        }
        Ok(Self { n, d })
    }

    /// Distances between coordinate vectors under `metric`.
    pub fn from_points(points: &[Vec<f64>], metric: Metric) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let dim = points[0].len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::RaggedPoints {
                    index,
                    len: p.len(),
                    expected: dim,
                });
            }
            if let Some(&value) = p.iter().find(|x| !x.is_finite()) {
                return Err(Error::BadDistance {
                    i: index,
                    j: index,
                    value,
                });
            }
        }
        let raw: Vec<Vec<f64>> = points
            .iter()
            .map(|a| points.iter().map(|b| metric.distance(a, b)).collect())
            .collect();
        Self::new(&raw)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Row-major copy of the table.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// Sorted, deduplicated off-diagonal distances. The complex is constant on
    /// each open interval between consecutive values.
    pub fn critical_scales(&self) -> Vec<f64> {
        let mut out: Vec<f64> = (0..self.n)
            .flat_map(|i| ((i + 1)..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Largest pairwise distance among the vertices of `s`; zero for a vertex.
    pub fn diameter(&self, s: Simplex) -> f64 {
        let verts: Vec<usize> = s.vertices().collect();
        let mut best = 0.0f64;
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                best = best.max(self.get(i, j));
            }
        }
        best
    }

    /// The k-simplices of the Vietoris-Rips complex at `scale`.
    pub fn simplices(&self, scale: f64, k: usize) -> Result<SimplexSet> {
        check_scale(scale)?;
        if k >= self.n {
            return Err(Error::DimensionOutOfRange { k, n: self.n });
        }
        let members = subsets(self.n, k + 1)
            .filter(|&s| self.diameter(s) <= scale)
            .collect();
        Ok(SimplexSet { k, scale, members })
    }

    /// Fraction of all (k+1)-subsets that are simplices at `scale`.
    pub fn simplex_proportion(&self, scale: f64, k: usize) -> Result<f64> {
        let set = self.simplices(scale, k)?;
        Ok(set.len() as f64 / binomial(self.n, k + 1))
    }
}

fn check_scale(scale: f64) -> Result<()> {
    if scale.is_nan() || scale < 0.0 {
        Err(Error::InvalidScale(scale))
    } else {
        Ok(())
    }
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Distance functions for point input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::Euclidean => diffs.map(|t| t * t).sum::<f64>().sqrt(),
            Metric::Manhattan => diffs.sum(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Metric::Euclidean),
            "manhattan" => Ok(Metric::Manhattan),
            "chebyshev" => Ok(Metric::Chebyshev),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

/// A simplex as a set of point indices; bit `j` is point `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(u64);

impl Simplex {
    pub fn from_bits(bits: u64) -> Option<Self> {
        (bits != 0).then_some(Self(bits))
    }

    /// Builds a simplex from zero-based point indices.
    pub fn from_vertices(vertices: &[usize]) -> Option<Self> {
        let mut bits = 0u64;
        for &v in vertices {
            if v >= MAX_POINTS {
                return None;
            }
            bits |= 1 << v;
        }
        Self::from_bits(bits)
    }

    /// Parses a ket label such as `110`, where the leftmost character is point 1.
    pub fn from_ket(label: &str) -> Option<Self> {
        let mut bits = 0u64;
        for (j, c) in label.chars().enumerate() {
            match c {
                '1' if j < MAX_POINTS => bits |= 1 << j,
                '0' => {}
                _ => return None,
            }
        }
        Self::from_bits(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn dimension(self) -> usize {
        self.0.count_ones() as usize - 1
    }

    /// Zero-based point indices in ascending order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |j| bits >> j & 1 == 1)
    }

    /// Faces obtained by omitting each vertex in turn, paired with the
    /// position of the omitted vertex among the sorted vertices.
    pub fn faces(self) -> impl Iterator<Item = (usize, Simplex)> {
        let bits = self.0;
        self.vertices()
            .enumerate()
            .filter_map(move |(l, v)| Simplex::from_bits(bits & !(1 << v)).map(|f| (l, f)))
    }

    /// Ket rendering over `n` points, point 1 leftmost.
    pub fn ket(self, n: usize) -> String {
        (0..n)
            .map(|j| if self.0 >> j & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = 64 - self.0.leading_zeros() as usize;
        write!(f, "|{}⟩", self.ket(width))
    }
}

/// All simplices of one dimension in a complex, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSet {
    k: usize,
    scale: f64,
    members: Vec<Simplex>,
}

impl SimplexSet {
    /// Builds a set from arbitrary simplices, sorting and deduplicating them.
    pub fn from_simplices(k: usize, scale: f64, mut members: Vec<Simplex>) -> Result<Self> {
        if let Some(s) = members.iter().find(|s| s.dimension() != k) {
            return Err(Error::DimensionMismatch {
                cols: s.dimension(),
                rows: k,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { k, scale, members })
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn members(&self) -> &[Simplex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Simplex) -> bool {
        self.index_of(s).is_some()
    }

    pub fn index_of(&self, s: Simplex) -> Option<usize> {
        self.members.binary_search(&s).ok()
    }
}

/// All `size`-element subsets of `n` points in ascending bit-set order.
pub fn subsets(n: usize, size: usize) -> impl Iterator<Item = Simplex> {
    let limit = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let start = if size == 0 || size > n {
        None
    } else {
        Some((1u64 << size) - 1)
    };
    std::iter::successors(start, move |&x| {
        // next integer with the same popcount
        let c = x & x.wrapping_neg();
        let r = x.checked_add(c)?;
        let next = (((r ^ x) >> 2) / c) | r;
        (next <= limit && r != 0).then_some(next)
    })
    .filter_map(Simplex::from_bits)
}
