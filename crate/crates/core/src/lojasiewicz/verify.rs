use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polynomial::{FloatPoly, Polynomial};

/// Ratios up to `1 + RATIO_SLACK` count as holding.
pub const RATIO_SLACK: f64 = 1e-9;
const BLOCK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub box_samples: usize,
    pub box_half_width: f64,
    pub seed: u64,
    pub exec: Exec,
    #[serde(skip)]
    pub level_points: Vec<Vec<f64>>,
    #[serde(skip)]
    pub curve_points: Vec<Vec<f64>>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            box_samples: 100_000,
            box_half_width: 1e3,
            seed: 0,
            exec: Exec::default(),
            level_points: Vec::new(),
            curve_points: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Box,
    Level,
    Curve,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub source: SampleSource,
    pub index: usize,
    pub point: Vec<f64>,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub box_samples: usize,
    pub level_samples: usize,
    pub curve_samples: usize,
    /// Largest `c |h| / (|g|^alpha + |g|^beta)` seen.
    pub worst_ratio: f64,
    pub worst_point: Option<Vec<f64>>,
    pub first_violation: Option<Violation>,
    pub holds: bool,
}

/// `c |h(x)| / (|g(x)|^alpha + |g(x)|^beta)`; infinite when `g(x) = 0` but
/// `h(x) != 0`, zero when both vanish.
pub fn ratio(g: &FloatPoly, h: &FloatPoly, alpha: f64, beta: f64, c: f64, x: &[f64]) -> f64 {
    let hv = h.eval(x).abs();
    if hv == 0.0 {
        return 0.0;
    }
    let gv = g.eval(x).abs();
    let den = gv.powf(alpha) + gv.powf(beta);
    if den == 0.0 {
        f64::INFINITY
    } else {
        c * hv / den
    }
}

/// `(index, ratio)` of the worst point and of the first violation.
fn scan(points: &[Vec<f64>], f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> (Option<(usize, f64)>, Option<(usize, f64)>) {
    let mut worst: Option<(usize, f64)> = None;
    let mut first = None;
    for (i, x) in points.iter().enumerate() {
        let r = f(x);
        let r = if r.is_nan() { f64::INFINITY } else { r };
        if worst.is_none_or(|(_, w)| r > w) {
            worst = Some((i, r));
        }
        if first.is_none() && r > 1.0 + RATIO_SLACK {
            first = Some((i, r));
        }
    }
    (worst, first)
}

fn box_block(n: usize, seed: u64, block: usize, count: usize, half: f64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (block as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9));
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-half..=half)).collect())
        .collect()
}

/// Evaluates the inequality on uniform box samples, then on supplied
/// level-set points, then on supplied curve points.
pub fn verify_inequality(
    g: &Polynomial,
    h: &Polynomial,
    alpha: f64,
    beta: f64,
    c: f64,
    cfg: &SamplerConfig,
) -> Result<VerifyReport> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("c", c)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    if g.num_vars() != h.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vars(),
            got: h.num_vars(),
        });
    }
    let n = g.num_vars();
    let (gf, hf) = (g.to_float(), h.to_float());
    let f = |x: &[f64]| ratio(&gf, &hf, alpha, beta, c, x);

    let blocks = cfg.box_samples.div_ceil(BLOCK);
    let per_block = cfg.exec.map(blocks, |b| {
        let count = BLOCK.min(cfg.box_samples - b * BLOCK);
        let pts = box_block(n, cfg.seed, b, count, cfg.box_half_width);
        let (w, first) = scan(&pts, &f);
        (
            w.map(|(i, r)| (b * BLOCK + i, r, pts[i].clone())),
            first.map(|(i, r)| (b * BLOCK + i, r, pts[i].clone())),
        )
    });

    let mut worst: Option<(f64, Vec<f64>)> = None;
    let mut first_violation: Option<Violation> = None;
    let mut consider = |source, w: Option<(usize, f64, Vec<f64>)>, first: Option<(usize, f64, Vec<f64>)>| {
        if let Some((_, r, x)) = w {
            if worst.as_ref().is_none_or(|(b, _)| r > *b) {
                worst = Some((r, x));
            }
        }
        if first_violation.is_none() {
            first_violation = first.map(|(index, ratio, point)| Violation {
                source,
                index,
                point,
                ratio,
            });
        }
    };
    for (w, first) in per_block {
        consider(SampleSource::Box, w, first);
    }
    for (source, pts) in [
        (SampleSource::Level, &cfg.level_points),
        (SampleSource::Curve, &cfg.curve_points),
    ] {
        let (w, first) = scan(pts, &f);
        consider(
            source,
            w.map(|(i, r)| (i, r, pts[i].clone())),
            first.map(|(i, r)| (i, r, pts[i].clone())),
        );
    }
    let (worst_ratio, worst_point) = match worst {
        Some((r, x)) => (r, Some(x)),
        None => (0.0, None),
    };
    Ok(VerifyReport {
        alpha,
        beta,
        c,
        box_samples: cfg.box_samples,
        level_samples: cfg.level_points.len(),
        curve_samples: cfg.curve_points.len(),
        worst_ratio,
        worst_point,
        holds: first_violation.is_none(),
        first_violation,
    })
}
