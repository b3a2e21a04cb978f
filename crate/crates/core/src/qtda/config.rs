use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register chosen automatically.
pub const MAX_AUTO_QPE_BITS: usize = 10;

/// Largest register accepted from the caller.
pub const MAX_QPE_BITS: usize = 16;

/// How the kernel probability η is read out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Readout {
    /// `Tr(P₀ ρ P₀)` against the zero eigenspace.
    ExactProjection,
    /// Probability of the all-zeros register after phase estimation.
    PhaseEstimation,
}

/// How the simplex state is prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroverMode {
    /// Amplitudes written directly.
    Off,
    /// Amplitude amplification with the optimal iteration count, then
    /// post-selection on the marked strings.
    ExactIterations,
}

/// Settings of the quantum Betti pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QtdaConfig {
    /// Phase-register size; `None` picks the smallest register that
    /// separates the zero phase from the smallest nonzero one.
    pub qpe_bits: Option<usize>,
    /// Eigenvalues at or below this magnitude count as zero.
    pub zero_tolerance: f64,
    /// Estimate phases of `B²` instead of `B`.
    pub use_squared_operator: bool,
    /// Multiplier applied to `B²` (or `B`) before exponentiation; `None`
    /// rescales so every phase lies in `[0, ½]`.
    pub operator_scale: Option<f64>,
    pub readout: Readout,
    pub grover: GroverMode,
    /// Seed of the sampled readout.
    pub rng_seed: u64,
    /// Sample η̂ from this many register measurements instead of reading
    /// the outcome probability.
    pub shots: Option<u64>,
}

impl Default for QtdaConfig {
    fn default() -> Self {
        Self {
            qpe_bits: None,
            zero_tolerance: 1e-9,
            use_squared_operator: true,
            operator_scale: None,
            readout: Readout::PhaseEstimation,
            grover: GroverMode::Off,
            rng_seed: 0,
            shots: None,
        }
    }
}

impl QtdaConfig {
    /// The default settings with exact kernel projection.
    pub fn exact() -> Self {
        Self {
            readout: Readout::ExactProjection,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.qpe_bits {
            if t == 0 || t > MAX_QPE_BITS {
                return Err(Error::InvalidConfig(format!(
                    "qpe_bits must be in 1..={MAX_QPE_BITS}, got {t}"
                )));
            }
        }
        if !(self.zero_tolerance > 0.0 && self.zero_tolerance <= 1e-6) {
            return Err(Error::InvalidConfig(format!(
                "zero_tolerance must be in (0, 1e-6], got {}",
                self.zero_tolerance
            )));
        }
        if let Some(s) = self.operator_scale {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "operator_scale must be positive and finite, got {s}"
                )));
            }
        }
        if self.shots == Some(0) {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        Ok(())
    }
}
