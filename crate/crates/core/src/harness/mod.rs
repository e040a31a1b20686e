//! Experiment plumbing: run configuration, report envelopes, the
//! genericity and openness experiments, and the two worked examples.

mod genericity;
mod reproduce;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exec::Exec;
use crate::nondegeneracy::{CheckMode, CheckOptions};
use crate::polynomial::Polynomial;

pub use genericity::{
    genericity_trial, instance_mapping, lattice_supports, openness_probe, DegenerateInstance, GenericityStats,
    OpennessReport, Sampler,
};
pub use reproduce::{
    example31_mapping, example32_mapping, reproduce_example31, reproduce_example32, Claim, CurveCheck, Example31Report,
    Example32Report, InequalityGrid,
};

pub const TOOL_NAME: &str = "lojnewton";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every knob a report depends on. Serialized into each report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    /// Rays per level (`mu`), starts per radius (probe).
    pub budget: usize,
    /// Witness-search starts per face system.
    pub attempts: usize,
    pub trials: usize,
    pub epsilon: f64,
    pub mode: CheckMode,
    pub box_samples: usize,
    pub box_half_width: f64,
    pub multiplier_samples: usize,
    /// First-type threshold on `|h|`.
    pub delta: f64,
    /// Second-type bound on `|g|`; `None` means `10 (1 + |g(0)|)`.
    pub g_bound: Option<f64>,
    pub exponent_bound: i64,
    pub out: Option<String>,
    /// Execution path; never changes a result, so it is not serialized.
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget: 64,
            attempts: 200,
            trials: 1000,
            epsilon: 1e-6,
            mode: CheckMode::Exact,
            box_samples: 1_000_000,
            box_half_width: 1e3,
            multiplier_samples: 100_000,
            delta: 1e-3,
            g_bound: None,
            exponent_bound: 6,
            out: None,
            exec: Exec::default(),
        }
    }
}

impl RunConfig {
    pub fn check_options(&self) -> CheckOptions {
        CheckOptions {
            mode: self.mode,
            attempts: self.attempts,
            seed: self.seed,
            exec: self.exec,
            ..CheckOptions::default()
        }
    }
}

/// Envelope shared by every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    /// SHA-256 of the canonical JSON of the input polynomials.
    pub input_sha256: String,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: &RunConfig, inputs: &[&Polynomial], result: T) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            command: command.into(),
            config: config.clone(),
            input_sha256: input_hash(inputs),
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

pub fn input_hash(inputs: &[&Polynomial]) -> String {
    let canonical = serde_json::to_string(inputs).expect("polynomials serialize");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
