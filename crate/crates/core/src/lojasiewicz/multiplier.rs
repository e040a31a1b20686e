use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::level::gaussian;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polynomial::Polynomial;
use crate::solve::simplest_rational;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierConfig {
    pub samples: usize,
    /// Samples lie in the ball of this radius.
    pub radius: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            radius: 1.0,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub alpha: f64,
    /// `floor(1/alpha) + 1`.
    pub ell: u64,
    /// `2 ell`; then `h^N = g f0` with `f0` continuous.
    pub n: u64,
    pub samples: usize,
    /// Samples where `g = 0`, left out of the ratio.
    pub skipped: usize,
    /// Largest `|h|^N / g^2` seen.
    pub max_ratio: f64,
    pub argmax: Option<Vec<f64>>,
}

/// `floor(1/alpha) + 1`, with `alpha` first snapped to the simplest
/// rational within `1e-12` so that `1/3` gives 4 rather than 3.
pub fn ell(alpha: f64) -> Result<u64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    let r = simplest_rational(alpha, 1e-12 * alpha).expect("finite alpha");
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let fl = den.div_floor(&num);
    u64::try_from(fl)
        .ok()
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::InvalidArgument(format!("alpha = {alpha} is too small")))
}

/// Half the samples uniform in the ball, half on log-uniform radii in
/// `[1e-6 R, R]`, so that the neighbourhood of the origin is covered.
fn sample(n: usize, i: usize, cfg: &MultiplierConfig) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (i as u64).wrapping_mul(0x2545_F491_4F6C_DD1D));
    let d: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
    let dn = d.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let r = if i.is_multiple_of(2) {
        cfg.radius * rng.gen::<f64>().powf(1.0 / n.max(1) as f64)
    } else {
        cfg.radius * 10f64.powf(rng.gen_range(-6.0..=0.0))
    };
    d.iter().map(|v| r * v / dn).collect()
}

pub fn multiplier(g: &Polynomial, h: &Polynomial, alpha: f64, cfg: &MultiplierConfig) -> Result<MultiplierReport> {
    let ell = ell(alpha)?;
    let big_n = 2 * ell;
    if g.num_vars() != h.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vars(),
            got: h.num_vars(),
        });
    }
    let n = g.num_vars();
    let (gf, hf) = (g.to_float(), h.to_float());
    let exp = i32::try_from(big_n).unwrap_or(i32::MAX);
    let ratios: Vec<Option<(f64, Vec<f64>)>> = cfg.exec.map(cfg.samples, |i| {
        let x = sample(n, i, cfg);
        let gv = gf.eval(&x);
        if gv == 0.0 {
            return None;
        }
        Some((hf.eval(&x).abs().powi(exp) / (gv * gv), x))
    });
    let skipped = ratios.iter().filter(|r| r.is_none()).count();
    let best = ratios
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<f64>)>, |acc, (v, x)| match acc {
            Some((b, _)) if b >= v => acc,
            _ => Some((v, x)),
        });
    Ok(MultiplierReport {
        alpha,
        ell,
        n: big_n,
        samples: cfg.samples,
        skipped,
        max_ratio: best.as_ref().map_or(0.0, |b| b.0),
        argmax: best.map(|b| b.1),
    })
}
