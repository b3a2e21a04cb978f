//! The structured report written by every subcommand.

use qtda_core::complex::DistanceMatrix;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

/// Significant digits kept in printed floats.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    pub input_digest: Option<String>,
    pub parameters: Value,
    pub results: Value,
}

impl Document {
    pub fn new(command: &str, input: Option<&DistanceMatrix>, parameters: Value, results: Value) -> Self {
        Self {
            command: command.to_owned(),
            input_digest: input.map(digest),
            parameters: round_floats(parameters),
            results: round_floats(results),
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// SHA-256 of the matrix written as `n` followed by every entry in row-major
/// order, each as its shortest round-trip decimal.
pub fn digest(d: &DistanceMatrix) -> String {
    let mut h = Sha256::new();
    h.update(d.len().to_string());
    for row in d.rows() {
        h.update("\n");
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        h.update(line.join(","));
    }
    let bytes = h.finalize();
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Rounds every non-integer number in `v`.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, round_floats(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}
