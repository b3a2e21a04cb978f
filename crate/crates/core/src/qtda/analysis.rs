//! Simplex-proportion Monte Carlo and the rounding error threshold.

use num_rational::Ratio;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{subsets, DistanceMatrix};
use crate::error::{Error, Result};

/// Upper bound on subsets examined by one Monte Carlo run.
pub const MAX_MONTE_CARLO_WORK: u128 = 2_000_000_000;

/// `m` evenly spaced scales from 0 to 1 inclusive.
pub fn epsilon_grid(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InvalidConfig(format!("grid needs at least 2 points, got {m}")));
    }
    Ok((0..m).map(|i| i as f64 / (m - 1) as f64).collect())
}

/// Random symmetric distances, uniform on `[0, 1)`, for one trial.
///
/// Every `(seed, n, trial)` triple has its own ChaCha stream, so results do
/// not depend on the order in which trials run.
pub fn trial_distances(n: usize, seed: u64, trial: u64) -> Result<DistanceMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 40) ^ trial);
    let mut raw = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.random();
            raw[i][j] = v;
            raw[j][i] = v;
        }
    }
    DistanceMatrix::new(&raw)
}

/// `|S_k^ε|` at each scale of `grid` for one distance matrix.
pub fn simplex_counts(d: &DistanceMatrix, k: usize, grid: &[f64]) -> Result<Vec<u64>> {
    if k >= d.len() {
        return Err(Error::DimensionOutOfRange { k, n: d.len() });
    }
    let mut diam: Vec<f64> = subsets(d.len(), k + 1).map(|s| d.diameter(s)).collect();
    diam.sort_by(f64::total_cmp);
    Ok(grid
        .iter()
        .map(|&e| diam.partition_point(|&x| x <= e) as u64)
        .collect())
}

/// Per-scale `ζ` of a single trial.
pub fn trial_proportions(n: usize, k: usize, grid: &[f64], seed: u64, trial: u64) -> Result<Vec<f64>> {
    let d = trial_distances(n, seed, trial)?;
    let total = exact_binomial(n, k + 1) as f64;
    Ok(simplex_counts(&d, k, grid)?
        .into_iter()
        .map(|c| c as f64 / total)
        .collect())
}

/// Mean simplex proportion over random distance matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionGrid {
    pub k: usize,
    pub n_values: Vec<usize>,
    pub scales: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// `C(n, k+1)` for each `n`.
    pub subsets: Vec<u64>,
    /// Simplex counts summed over trials, indexed `[n][scale]`.
    pub totals: Vec<Vec<u64>>,
    /// Mean `ζ`, indexed `[n][scale]`.
    pub mean: Vec<Vec<f64>>,
    /// Whether the mean `ζ` is at least `n^-6`.
    pub efficient: Vec<Vec<bool>>,
}

impl ProportionGrid {
    /// Mean `ζ` of cell `(i, j)` as an exact fraction.
    pub fn mean_exact(&self, i: usize, j: usize) -> Ratio<u128> {
        Ratio::new(
            u128::from(self.totals[i][j]),
            u128::from(self.trials) * u128::from(self.subsets[i]),
        )
    }
}

/// Mean `ζ_k^ε = |S_k^ε| / C(n, k+1)` for each `n` in `n_min..=n_max` and
/// each scale, over `trials` random matrices per `n`.
pub fn proportion_monte_carlo(
    n_min: usize,
    n_max: usize,
    k: usize,
    grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<ProportionGrid> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if n_min > n_max {
        return Err(Error::InvalidConfig(format!("empty range {n_min}..={n_max}")));
    }
    if k + 1 > n_min {
        return Err(Error::DimensionOutOfRange { k, n: n_min });
    }
    if let Some(&e) = grid.iter().find(|e| e.is_nan() || **e < 0.0) {
        return Err(Error::InvalidScale(e));
    }
    let n_values: Vec<usize> = (n_min..=n_max).collect();
    let subsets: Vec<u64> = n_values.iter().map(|&n| exact_binomial(n, k + 1)).collect();
    let work: u128 = subsets.iter().map(|&s| u128::from(s)).sum::<u128>() * u128::from(trials);
    if n_max > 40 || work > MAX_MONTE_CARLO_WORK {
        return Err(Error::TooLarge(format!(
            "{work} subset evaluations for n up to {n_max}"
        )));
    }

    let jobs: Vec<(usize, u64)> = n_values
        .iter()
        .flat_map(|&n| (0..trials).map(move |t| (n, t)))
        .collect();
    let per_trial: Vec<Vec<u64>> = jobs
        .par_iter()
        .map(|&(n, t)| simplex_counts(&trial_distances(n, seed, t)?, k, grid))
        .collect::<Result<_>>()?;

    let mut totals = vec![vec![0u64; grid.len()]; n_values.len()];
    for (&(n, _), counts) in jobs.iter().zip(&per_trial) {
        for (acc, c) in totals[n - n_min].iter_mut().zip(counts) {
            *acc += c;
        }
    }
    let mut grid_out = ProportionGrid {
        k,
        n_values,
        scales: grid.to_vec(),
        trials,
        seed,
        subsets,
        totals,
        mean: Vec::new(),
        efficient: Vec::new(),
    };
    for i in 0..grid_out.n_values.len() {
        let n = grid_out.n_values[i] as u128;
        let denom = u128::from(trials) * u128::from(grid_out.subsets[i]);
        grid_out.mean.push(
            grid_out.totals[i]
                .iter()
                .map(|&t| t as f64 / denom as f64)
                .collect(),
        );
        // ζ ≥ n⁻⁶  ⇔  total · n⁶ ≥ trials · C(n, k+1)
        grid_out.efficient.push(
            grid_out.totals[i]
                .iter()
                .map(|&t| u128::from(t) * n.pow(6) >= denom)
                .collect(),
        );
    }
    Ok(grid_out)
}

/// `C(n, k)` as an integer.
pub fn exact_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let c = (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1));
    u64::try_from(c).unwrap_or(u64::MAX)
}

/// Largest `|η_e − η_i|` that still rounds to the right kernel dimension:
/// `0.5 / simplex_count`.
pub fn error_threshold(simplex_count: usize) -> Result<f64> {
    if simplex_count == 0 {
        return Err(Error::EmptySimplexSet);
    }
    Ok(0.5 / simplex_count as f64)
}

/// [`error_threshold`] as an exact fraction.
pub fn error_threshold_exact(simplex_count: usize) -> Result<Ratio<u64>> {
    if simplex_count == 0 {
        return Err(Error::EmptySimplexSet);
    }
    Ok(Ratio::new(1, 2 * simplex_count as u64))
}
