//! Subcommand implementations.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use qtda_core::complex::DistanceMatrix;
use qtda_core::homology::{barcode, betti_curve, betti_numbers};
use qtda_core::qtda::{
    betti_via_quantum, counterexample_demo, counterexample_distances, epsilon_grid, error_threshold,
    error_threshold_exact, proportion_monte_carlo, three_point_demo, three_point_distances, GroverMode,
    QtdaConfig,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::input::{parse_input, InputFormat};
use crate::output::Document;
use crate::svg::barcode_svg;

/// Largest `--max-simplices` accepted by `threshold`.
pub const MAX_THRESHOLD_ROWS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qtda_core::Error),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

/// A finished report and whether every estimate in it is reliable.
pub struct Outcome {
    pub document: Document,
    pub reliable: bool,
}

impl From<Document> for Outcome {
    fn from(document: Document) -> Self {
        Self {
            document,
            reliable: true,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Distance matrix (CSV) or JSON input file.
    pub input: PathBuf,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<InputFormat>,
}

impl InputArgs {
    fn load(&self) -> Result<(DistanceMatrix, InputFormat, Option<Vec<String>>), CliError> {
        let format = self.format.unwrap_or_else(|| InputFormat::from_path(&self.input));
        let doc = parse_input(&self.input, format)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", self.input.display())))?;
        Ok((doc.distances, format, doc.labels))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    /// Three points at distances 3, 4 and 5.
    ThreePoint,
    /// Seven edges on six points where the pure state misreads the kernel.
    Counterexample,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers from exact boundary ranks.
    Betti {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        scale: f64,
        #[arg(long, default_value_t = 1)]
        max_dim: usize,
    },
    /// Persistence barcode and Betti curves.
    Barcode {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1)]
        max_dim: usize,
        /// Write a plot of the barcode to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// A Betti number from the simulated quantum pipeline.
    Qbetti {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        scale: f64,
        #[arg(long)]
        dim: usize,
        /// Phase-register size; chosen from the spectrum when omitted.
        #[arg(long)]
        qpe_bits: Option<usize>,
        /// Prepare simplex states by amplitude amplification.
        #[arg(long)]
        grover: bool,
    },
    /// Built-in worked examples.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
    /// Mean simplex proportions over random distance matrices.
    Proportions {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        dim: usize,
        /// Number of evenly spaced scales in [0, 1].
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Rounding error thresholds for 1..=m simplices.
    Threshold {
        #[arg(long)]
        max_simplices: usize,
    },
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Betti { input, scale, max_dim } => {
            let (d, format, labels) = input.load()?;
            let betti = betti_numbers(&d, *scale, *max_dim)?;
            let counts = (0..betti.len())
                .map(|k| d.simplices(*scale, k).map(|s| s.len()))
                .collect::<Result<Vec<_>, _>>()?;
            let params = json!({"format": format.name(), "scale": scale, "max_dim": max_dim, "labels": labels});
            Ok(Document::new("betti", Some(&d), params, json!({"betti": betti, "simplex_counts": counts})).into())
        }
        Command::Barcode { input, max_dim, svg } => {
            let (d, format, labels) = input.load()?;
            let bc = barcode(&d, *max_dim)?;
            let critical = d.critical_scales();
            let dims = bc
                .bars
                .iter()
                .enumerate()
                .map(|(k, bars)| {
                    Ok(json!({"dimension": k, "intervals": to_value(bars), "betti_curve": to_value(&betti_curve(&d, k)?)}))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            if let Some(path) = svg {
                std::fs::write(path, barcode_svg(&bc, &critical)).map_err(|source| CliError::Write {
                    path: path.clone(),
                    source,
                })?;
            }
            let params = json!({
                "format": format.name(),
                "max_dim": max_dim,
                "labels": labels,
                "svg": svg.as_ref().map(|p| p.display().to_string()),
            });
            let results = json!({"critical_scales": critical, "dimensions": dims});
            Ok(Document::new("barcode", Some(&d), params, results).into())
        }
        Command::Qbetti { input, scale, dim, qpe_bits, grover } => {
            let (d, format, labels) = input.load()?;
            let config = QtdaConfig {
                qpe_bits: *qpe_bits,
                grover: if *grover { GroverMode::ExactIterations } else { GroverMode::Off },
                ..QtdaConfig::default()
            };
            let q = betti_via_quantum(&d, *scale, *dim, &config)?;
            let classical = betti_numbers(&d, *scale, *dim)?[*dim];
            let params = json!({
                "format": format.name(),
                "scale": scale,
                "dim": dim,
                "qpe_bits": qpe_bits,
                "grover": grover,
                "labels": labels,
            });
            let mut results = to_value(&q);
            results["classical_betti"] = json!(classical);
            Ok(Outcome {
                reliable: q.reliable,
                document: Document::new("qbetti", Some(&d), params, results),
            })
        }
        Command::Demo { name } => {
            let (d, label, results) = match name {
                DemoName::ThreePoint => (three_point_distances(), "three-point", to_value(&three_point_demo()?)),
                DemoName::Counterexample => {
                    (counterexample_distances(), "counterexample", to_value(&counterexample_demo()?))
                }
            };
            Ok(Document::new("demo", Some(&d), json!({"name": label}), results).into())
        }
        Command::Proportions { n_min, n_max, dim, grid, trials, seed } => {
            let scales = epsilon_grid(*grid)?;
            let g = proportion_monte_carlo(*n_min, *n_max, *dim, &scales, *trials, *seed)?;
            let params = json!({
                "n_min": n_min,
                "n_max": n_max,
                "dim": dim,
                "grid": grid,
                "trials": trials,
                "seed": seed,
            });
            let results = json!({
                "n_values": g.n_values,
                "scales": g.scales,
                "subsets": g.subsets,
                "totals": g.totals,
                "mean": g.mean,
                "efficient": g.efficient,
            });
            Ok(Document::new("proportions", None, params, results).into())
        }
        Command::Threshold { max_simplices } => {
            let m = *max_simplices;
            if m == 0 || m > MAX_THRESHOLD_ROWS {
                return Err(CliError::Invalid(format!(
                    "--max-simplices must be in 1..={MAX_THRESHOLD_ROWS}, got {m}"
                )));
            }
            let rows = (1..=m)
                .map(|s| {
                    Ok(json!({
                        "simplex_count": s,
                        "threshold": error_threshold(s)?,
                        "exact": error_threshold_exact(s)?.to_string(),
                    }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok(Document::new("threshold", None, json!({"max_simplices": m}), json!({"thresholds": rows})).into())
        }
    }
}
