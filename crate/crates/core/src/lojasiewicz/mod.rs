//! Numerical probes for the global inequality
//! `|g(x)|^alpha + |g(x)|^beta >= c |h(x)|`.
//!
//! `mu(t)` is the supremum of `|h|` over the level `|g| = t`. It is only
//! ever estimated from below, and it may be infinite.

mod fit;
mod hunt;
mod ktilde;
mod level;
mod multiplier;
mod verify;

pub use fit::{fit_exponents, geometric_grid, regression, ExponentFit, FitConfig, GridPoint, Regression};
pub use hunt::{
    evidence_points, hunt_sequences, sample_curve, validate_evidence, CurveSample, HuntConfig, HuntReport,
    SequenceEvidence, SequenceKind,
};
pub use ktilde::{ktilde_probe, ConstraintJson, KtildeConfig, KtildeProbeReport, RadiusResult, Trend};
pub use level::{mu_estimate, MuConfig, MuEstimate};
pub use multiplier::{ell, multiplier, MultiplierConfig, MultiplierReport};
pub use verify::{ratio, verify_inequality, SampleSource, SamplerConfig, VerifyReport, Violation, RATIO_SLACK};
