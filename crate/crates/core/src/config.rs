//! Run configuration shared by the verification suites and the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::novikov::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Global knobs: energy truncation, coefficient tolerance, arity bound,
/// ramification depth, output format and the random seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub energy_cutoff: Rational,
    pub coefficient_tolerance: f64,
    pub arity_bound: usize,
    pub ramification_depth: u32,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            energy_cutoff: Rational::from_int(4),
            coefficient_tolerance: 1e-9,
            arity_bound: 6,
            ramification_depth: 8,
            format: OutputFormat::Text,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.energy_cutoff <= Rational::zero() {
            return Err(Error::ParseError {
                pos: 0,
                msg: "energy cutoff must be positive".into(),
            });
        }
        if self.coefficient_tolerance <= 0.0 {
            return Err(Error::ParseError {
                pos: 0,
                msg: "coefficient tolerance must be positive".into(),
            });
        }
        Ok(())
    }
}
