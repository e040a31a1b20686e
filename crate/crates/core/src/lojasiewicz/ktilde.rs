//! Sphere-wise minimization of the gradient norm, as numerical evidence for
//! asymptotic critical values: sequences escaping to infinity along which
//! the (constrained) gradient of `f` tends to zero.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::level::gaussian;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polynomial::{FloatPoly, Polynomial};
use crate::solve::{levenberg_marquardt, levenberg_marquardt_with_jacobian, LmOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtildeConfig {
    /// Starts per radius: coordinate and diagonal directions, then random.
    pub budget: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for KtildeConfig {
    fn default() -> Self {
        Self {
            budget: 24,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    BoundedAway,
    Decaying,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub radius: f64,
    pub feasible: bool,
    pub min_grad_norm: Option<f64>,
    pub f_value: Option<f64>,
    pub point: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub h: Polynomial,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KtildeProbeReport {
    pub constraint: Option<ConstraintJson>,
    pub radii: Vec<f64>,
    pub results: Vec<RadiusResult>,
    pub trend: Trend,
    /// `f` at the last radius when the trend is decaying: a candidate
    /// asymptotic critical value.
    pub candidate_value: Option<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn on_sphere(u: &[f64], radius: f64) -> Vec<f64> {
    let nu = norm(u).max(f64::MIN_POSITIVE);
    u.iter().map(|v| radius * v / nu).collect()
}

/// Start `i`: `+-e_j`, then the `2^n` diagonals, then Gaussian directions.
fn start_direction(n: usize, i: usize, seed: u64) -> Vec<f64> {
    if i < 2 * n {
        let mut d = vec![0.0; n];
        d[i / 2] = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        return d;
    }
    let diagonals = 1usize << n.min(16);
    let k = i - 2 * n;
    if k < diagonals {
        return (0..n).map(|j| if k >> j & 1 == 1 { -1.0 } else { 1.0 }).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
    (0..n).map(|_| gaussian(&mut rng)).collect()
}

/// `grad f` minus its component along `grad h`.
fn projected_grad(f: &FloatPoly, h: &FloatPoly, x: &[f64]) -> Vec<f64> {
    let gf = f.grad(x);
    let gh = h.grad(x);
    let nn = dot(&gh, &gh);
    if nn == 0.0 {
        return gf;
    }
    let lambda = dot(&gf, &gh) / nn;
    gf.iter().zip(&gh).map(|(a, b)| a - lambda * b).collect()
}

/// Alternating Newton steps onto `h = r` and rescaling onto the sphere.
fn retract(h: &FloatPoly, r: f64, mut x: Vec<f64>, radius: f64) -> Option<Vec<f64>> {
    let tol = 1e-10 * (1.0 + r.abs());
    for _ in 0..50 {
        let res = h.eval(&x) - r;
        if res.abs() <= tol {
            return Some(x);
        }
        let g = h.grad(&x);
        let nn = dot(&g, &g);
        if nn == 0.0 || !nn.is_finite() {
            return None;
        }
        let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - res * b / nn).collect();
        x = on_sphere(&y, radius);
    }
    None
}

fn minimize_plain(f: &FloatPoly, u0: &[f64], radius: f64) -> Vec<f64> {
    let residual = |u: &[f64]| f.grad(&on_sphere(u, radius));
    let jac = |u: &[f64], _: &[f64]| {
        let n = u.len();
        let nu = norm(u).max(f64::MIN_POSITIVE);
        let uh: Vec<f64> = u.iter().map(|v| v / nu).collect();
        let hess = f.hessian(&on_sphere(u, radius));
        let dx: Vec<Vec<f64>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| radius / nu * (if a == b { 1.0 } else { 0.0 } - uh[a] * uh[b]))
                    .collect()
            })
            .collect();
        (0..n)
            .map(|a| (0..n).map(|b| (0..n).map(|k| hess[a][k] * dx[k][b]).sum()).collect())
            .collect()
    };
    let res = levenberg_marquardt_with_jacobian(residual, jac, u0, LmOptions::default());
    on_sphere(&res.x, radius)
}

fn minimize_constrained(f: &FloatPoly, h: &FloatPoly, r: f64, u0: &[f64], radius: f64) -> Option<Vec<f64>> {
    let w = 1.0 / (1.0 + r.abs());
    let residual = |u: &[f64]| {
        let x = on_sphere(u, radius);
        let mut out = projected_grad(f, h, &x);
        out.push(w * (h.eval(&x) - r));
        out
    };
    let res = levenberg_marquardt(residual, u0, LmOptions::default());
    retract(h, r, on_sphere(&res.x, radius), radius)
}

/// Minimizes `|grad f|` (or, with a constraint `h = r`, the norm of
/// `grad f` projected off `grad h`) over each sphere `|x| = R`.
pub fn ktilde_probe(
    f: &Polynomial,
    constraint: Option<(&Polynomial, f64)>,
    radii: &[f64],
    cfg: &KtildeConfig,
) -> Result<KtildeProbeReport> {
    if radii.iter().any(|r| !(*r > 0.0) || !r.is_finite()) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    if let Some((h, _)) = constraint {
        if h.num_vars() != f.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: f.num_vars(),
                got: h.num_vars(),
            });
        }
    }
    let n = f.num_vars();
    let ff = f.to_float();
    let hf = constraint.map(|(h, r)| (h.to_float(), r));
    let results: Vec<RadiusResult> = radii
        .iter()
        .map(|&radius| {
            let found: Vec<Option<(f64, Vec<f64>)>> = cfg.exec.map(cfg.budget, |i| {
                let u0 = start_direction(n, i, cfg.seed);
                let x = match &hf {
                    None => minimize_plain(&ff, &u0, radius),
                    Some((h, r)) => minimize_constrained(&ff, h, *r, &u0, radius)?,
                };
                let g = match &hf {
                    None => ff.grad(&x),
                    Some((h, _)) => projected_grad(&ff, h, &x),
                };
                let v = norm(&g);
                v.is_finite().then_some((v, x))
            });
            let best = found
                .into_iter()
                .flatten()
                .fold(None::<(f64, Vec<f64>)>, |acc, (v, x)| match acc {
                    Some((b, _)) if b <= v => acc,
                    _ => Some((v, x)),
                });
            match best {
                Some((v, x)) => RadiusResult {
                    radius,
                    feasible: true,
                    min_grad_norm: Some(v),
                    f_value: Some(ff.eval(&x)),
                    point: Some(x),
                },
                None => RadiusResult {
                    radius,
                    feasible: false,
                    min_grad_norm: None,
                    f_value: None,
                    point: None,
                },
            }
        })
        .collect();
    let norms: Vec<(f64, Option<f64>)> = results
        .iter()
        .filter_map(|r| r.min_grad_norm.map(|m| (m, r.f_value)))
        .collect();
    let trend = match (norms.first(), norms.last()) {
        (Some(first), Some(last)) if norms.len() >= 2 => {
            if last.0 < 1e-6 || last.0 < first.0 * 1e-3 {
                Trend::Decaying
            } else {
                Trend::BoundedAway
            }
        }
        _ => Trend::Undetermined,
    };
    Ok(KtildeProbeReport {
        constraint: constraint.map(|(h, r)| ConstraintJson { h: h.clone(), r }),
        radii: radii.to_vec(),
        candidate_value: if trend == Trend::Decaying {
            norms.last().and_then(|l| l.1)
        } else {
            None
        },
        results,
        trend,
    })
}
