use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
pub(crate) use rand_distr_lite::gaussian;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::polynomial::{FloatPoly, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuConfig {
    /// Number of rays, coordinate rays first.
    pub budget: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for MuConfig {
    fn default() -> Self {
        Self {
            budget: 64,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuEstimate {
    pub t: f64,
    /// Best `|h|` found on `|g| = t`; `None` when no ray crossed the level.
    pub value: Option<f64>,
    pub argmax: Option<Vec<f64>>,
    pub crossings: usize,
    /// The value over all rays exceeds the value over the first half by
    /// more than 0.1%, a sign that the supremum may be infinite.
    pub grows_with_budget: bool,
    /// Every level-set point reached, after ascent.
    #[serde(skip)]
    pub points: Vec<Vec<f64>>,
}

const SCAN_STEPS: usize = 160;
const LOG_R_MIN: f64 = -8.0;
const LOG_R_MAX: f64 = 8.0;
const MAX_CROSSINGS_PER_RAY: usize = 8;

/// Ray `i`: `+-e_j` for `i < 2n`, then seeded Gaussian directions.
pub(crate) fn ray_direction(n: usize, i: usize, seed: u64) -> Vec<f64> {
    if i < 2 * n {
        let mut d = vec![0.0; n];
        d[i / 2] = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        return d;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0xA24B_AED4_963E_E407));
    loop {
        let d: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return d.iter().map(|v| v / norm).collect();
        }
    }
}

fn scale(d: &[f64], r: f64) -> Vec<f64> {
    d.iter().map(|v| v * r).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Points on the ray where `|g| = t`, located by a geometric scan in `r`
/// followed by bisection in `log r`.
pub(crate) fn level_crossings(g: &FloatPoly, d: &[f64], t: f64) -> Vec<Vec<f64>> {
    let phi = |lr: f64| g.eval(&scale(d, 10f64.powf(lr))).abs() - t;
    let step = (LOG_R_MAX - LOG_R_MIN) / SCAN_STEPS as f64;
    let mut out = Vec::new();
    let mut prev_lr = LOG_R_MIN;
    let mut prev = phi(prev_lr);
    for k in 1..=SCAN_STEPS {
        let lr = LOG_R_MIN + step * k as f64;
        let cur = phi(lr);
        if prev.is_finite() && cur.is_finite() && (prev <= 0.0) != (cur <= 0.0) {
            let (mut lo, mut hi) = (prev_lr, lr);
            let lo_neg = prev <= 0.0;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (phi(mid) <= 0.0) == lo_neg {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-16 {
                    break;
                }
            }
            let a = scale(d, 10f64.powf(lo));
            let b = scale(d, 10f64.powf(hi));
            let best = if (g.eval(&a).abs() - t).abs() <= (g.eval(&b).abs() - t).abs() {
                a
            } else {
                b
            };
            out.push(best);
            if out.len() == MAX_CROSSINGS_PER_RAY {
                break;
            }
        }
        prev = cur;
        prev_lr = lr;
    }
    out
}

/// Newton steps along `grad g` back onto `g = target`.
fn retract(g: &FloatPoly, mut x: Vec<f64>, target: f64) -> Option<Vec<f64>> {
    let tol = 1e-14 * target.abs().max(f64::MIN_POSITIVE);
    for _ in 0..30 {
        let r = g.eval(&x) - target;
        if r.abs() <= tol {
            return Some(x);
        }
        let gg = g.grad(&x);
        let nn = dot(&gg, &gg);
        if nn == 0.0 || !nn.is_finite() {
            return None;
        }
        for (xi, gi) in x.iter_mut().zip(&gg) {
            *xi -= r * gi / nn;
        }
    }
    let r = g.eval(&x) - target;
    (r.abs() <= 1e-10 * target.abs()).then_some(x)
}

/// Projected ascent of `|h|` on the level set through `x0`.
pub(crate) fn ascend(g: &FloatPoly, h: &FloatPoly, x0: Vec<f64>) -> (f64, Vec<f64>) {
    let target = g.eval(&x0);
    let mut x = x0;
    let mut val = h.eval(&x).abs();
    let mut eta = 0.05 * dot(&x, &x).sqrt().max(1e-300);
    for _ in 0..60 {
        let gg = g.grad(&x);
        let hv = h.eval(&x);
        let gh: Vec<f64> = h.grad(&x).iter().map(|v| if hv < 0.0 { -v } else { *v }).collect();
        let nn = dot(&gg, &gg);
        if nn == 0.0 || !nn.is_finite() {
            break;
        }
        let c = dot(&gh, &gg) / nn;
        let p: Vec<f64> = gh.iter().zip(&gg).map(|(a, b)| a - c * b).collect();
        let pn = dot(&p, &p).sqrt();
        if pn == 0.0 || !pn.is_finite() {
            break;
        }
        let xn = dot(&x, &x).sqrt();
        let mut moved = false;
        while eta > 1e-12 * xn.max(1e-300) {
            let y: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + eta * b / pn).collect();
            if let Some(y) = retract(g, y, target) {
                let v = h.eval(&y).abs();
                if v > val && v.is_finite() {
                    x = y;
                    val = v;
                    eta *= 1.5;
                    moved = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (val, x)
}

/// Best value per ray and every ascent end point.
pub(crate) fn ray_results(
    g: &FloatPoly,
    h: &FloatPoly,
    t: f64,
    rays: usize,
    seed: u64,
    exec: Exec,
) -> Vec<Vec<(f64, Vec<f64>)>> {
    let n = g.num_vars();
    exec.map(rays, |i| {
        let d = ray_direction(n, i, seed);
        level_crossings(g, &d, t).into_iter().map(|x| ascend(g, h, x)).collect()
    })
}

/// Lower estimate of `sup { |h(x)| : |g(x)| = t }`.
pub fn mu_estimate(g: &Polynomial, h: &Polynomial, t: f64, cfg: &MuConfig) -> Result<MuEstimate> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidArgument(format!("level t = {t} must be positive")));
    }
    if g.num_vars() != h.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: g.num_vars(),
            got: h.num_vars(),
        });
    }
    let (gf, hf) = (g.to_float(), h.to_float());
    let per_ray = ray_results(&gf, &hf, t, cfg.budget, cfg.seed, cfg.exec);
    Ok(summarize(t, per_ray))
}

pub(crate) fn summarize(t: f64, per_ray: Vec<Vec<(f64, Vec<f64>)>>) -> MuEstimate {
    let half = per_ray.len() / 2;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut best_half: Option<f64> = None;
    let mut crossings = 0;
    let mut points = Vec::new();
    for (i, ray) in per_ray.into_iter().enumerate() {
        for (v, x) in ray {
            crossings += 1;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, x.clone()));
            }
            if i < half.max(1) && best_half.is_none_or(|b| v > b) {
                best_half = Some(v);
            }
            points.push(x);
        }
    }
    let grows = match (&best, best_half) {
        (Some((b, _)), Some(h)) => *b > h * 1.001,
        (Some(_), None) => true,
        _ => false,
    };
    MuEstimate {
        t,
        value: best.as_ref().map(|b| b.0),
        argmax: best.map(|b| b.1),
        crossings,
        grows_with_budget: grows,
        points,
    }
}

/// Standard normal draws by the Box-Muller transform.
mod rand_distr_lite {
    use rand::Rng;

    pub fn gaussian<R: Rng>(rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
