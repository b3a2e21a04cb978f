//! Distance-matrix input files.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use qtda_core::complex::{DistanceMatrix, Metric};
use qtda_core::Error as CoreError;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// `n` lines of `n` comma-separated distances.
    CsvMatrix,
    /// `{"matrix": [[..]]}` or `{"points": [[..]], "metric": ".."}`.
    Json,
}

impl InputFormat {
    /// JSON for `.json` files, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => InputFormat::Json,
            _ => InputFormat::CsvMatrix,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InputFormat::CsvMatrix => "csv-matrix",
            InputFormat::Json => "json",
        }
    }
}

/// A rejected input, located by 1-based line and column where possible.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl InputError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            column: Some(column),
            message: message.into(),
        }
    }

    fn general(message: impl Into<String>) -> Self {
        Self {
            line: None,
            column: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Matrix(Vec<Vec<f64>>),
    Points { points: Vec<Vec<f64>>, metric: Metric },
}

/// A parsed input file.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub source: Source,
    pub labels: Option<Vec<String>>,
    pub distances: DistanceMatrix,
}

pub fn parse_input(path: &Path, format: InputFormat) -> Result<InputDocument, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::general(format!("cannot read {}: {e}", path.display())))?;
    parse_str(&text, format)
}

pub fn parse_str(text: &str, format: InputFormat) -> Result<InputDocument, InputError> {
    match format {
        InputFormat::CsvMatrix => parse_csv(text),
        InputFormat::Json => parse_json(text),
    }
}

fn parse_csv(text: &str) -> Result<InputDocument, InputError> {
    // (line number, column of each field, values)
    let mut rows: Vec<(usize, Vec<usize>, Vec<f64>)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut start = 0;
        for field in line.split(',') {
            let lead = field.len() - field.trim_start().len();
            let col = line[..start + lead].chars().count() + 1;
            let token = field.trim();
            let v = f64::from_str(token).map_err(|_| {
                InputError::at(idx + 1, col, format!("expected a number, found `{token}`"))
            })?;
            cols.push(col);
            values.push(v);
            start += field.len() + 1;
        }
        rows.push((idx + 1, cols, values));
    }
    if rows.is_empty() {
        return Err(InputError::general("input contains no rows"));
    }
    let n = rows.len();
    for (line, cols, values) in &rows {
        if values.len() != n {
            let col = cols.get(n).copied().unwrap_or(cols[cols.len() - 1]);
            return Err(InputError::at(
                *line,
                col,
                format!("expected {n} entries, found {}", values.len()),
            ));
        }
    }
    let raw: Vec<Vec<f64>> = rows.iter().map(|r| r.2.clone()).collect();
    let distances = DistanceMatrix::new(&raw).map_err(|e| {
        let (i, j) = entry_of(&e);
        match i {
            Some(i) => InputError::at(rows[i].0, rows[i].1[j.unwrap_or(0)], e.to_string()),
            None => InputError::general(e.to_string()),
        }
    })?;
    Ok(InputDocument {
        source: Source::Matrix(raw),
        labels: None,
        distances,
    })
}

/// The matrix entry an error refers to, as `(row, column)`.
fn entry_of(e: &CoreError) -> (Option<usize>, Option<usize>) {
    match *e {
        CoreError::NotSquare { row, .. } => (Some(row), None),
        CoreError::Asymmetric { i, j, .. } | CoreError::BadDistance { i, j, .. } => (Some(i), Some(j)),
        CoreError::NonzeroDiagonal { i, .. } => (Some(i), Some(i)),
        _ => (None, None),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInput {
    matrix: Option<Vec<Vec<f64>>>,
    points: Option<Vec<Vec<f64>>>,
    metric: Option<String>,
    labels: Option<Vec<String>>,
}

fn parse_json(text: &str) -> Result<InputDocument, InputError> {
    let doc: JsonInput =
        serde_json::from_str(text).map_err(|e| InputError::at(e.line(), e.column(), e.to_string()))?;
    let located = |e: CoreError| {
        let msg = match entry_of(&e) {
            (Some(i), Some(j)) => format!("entry [{i}][{j}]: {e}"),
            (Some(i), None) => format!("row {i}: {e}"),
            _ => e.to_string(),
        };
        InputError::general(msg)
    };
    let (source, distances) = match (doc.matrix, doc.points) {
        (Some(m), None) => {
            if doc.metric.is_some() {
                return Err(InputError::general("`metric` applies only to `points`"));
            }
            let d = DistanceMatrix::new(&m).map_err(located)?;
            (Source::Matrix(m), d)
        }
        (None, Some(points)) => {
            let metric = match doc.metric.as_deref() {
                Some(name) => Metric::from_str(name).map_err(InputError::general)?,
                None => Metric::Euclidean,
            };
            let d = DistanceMatrix::from_points(&points, metric).map_err(located)?;
            (Source::Points { points, metric }, d)
        }
        _ => return Err(InputError::general("exactly one of `matrix` and `points` is required")),
    };
    if let Some(labels) = &doc.labels {
        if labels.len() != distances.len() {
            return Err(InputError::general(format!(
                "{} labels for {} points",
                labels.len(),
                distances.len()
            )));
        }
    }
    Ok(InputDocument {
        source,
        labels: doc.labels,
        distances,
    })
}
