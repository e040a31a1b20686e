//! Multi-start witness search for rank deficiency on the common zero set
//! of a face system, in exponential coordinates `x_j = sigma_j e^{s_j}`
//! with the sign orthant `sigma` fixed per start.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FaceSystem, Witness};
use crate::exec::Exec;
use crate::linalg;
use crate::polynomial::{rational_to_f64, FloatPoly};
use crate::solve::{det_f64, levenberg_marquardt, simplest_rational, LmOptions};
use crate::Rational;

/// `|f_i(x)| < F_TOL (1 + |x|^deg_i)`.
pub const F_TOL: f64 = 1e-10;
/// Bound on the `k x k` minors of the scaled weighted Jacobian.
pub const MINOR_TOL: f64 = 1e-8;
const BATCH: usize = 32;

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut c: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for l in i + 1..k {
                    c[l] = c[l - 1] + 1;
                }
                break;
            }
        }
    }
}

fn minors(rows: &[Vec<f64>], n: usize) -> Vec<f64> {
    let k = rows.len();
    combinations(n, k)
        .into_iter()
        .map(|cols| det_f64(rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect()))
        .collect()
}

/// Residual maxima `(max_i |f_i| / (1 + |x|^deg_i), max |minor|)` with the
/// Jacobian rows scaled the same way.
pub fn residuals(polys: &[FloatPoly], x: &[f64]) -> (f64, f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut fmax = 0.0f64;
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        let scale = 1.0 + norm.powi(p.degree() as i32);
        fmax = fmax.max(p.eval(x).abs() / scale);
        rows.push(p.weighted_grad(x).iter().map(|w| w / scale).collect::<Vec<_>>());
    }
    let mmax = minors(&rows, x.len()).into_iter().fold(0.0f64, |a, m| a.max(m.abs()));
    (fmax, mmax)
}

/// Same quantities normalized by `S_i = sum |c x^kappa|` instead, so that
/// points near the coordinate hyperplanes cannot pass by shrinking every
/// term at once.
pub fn relative_residuals(polys: &[FloatPoly], x: &[f64]) -> (f64, f64) {
    let mut fmax = 0.0f64;
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        let scale = p.magnitude(x);
        if scale == 0.0 || !scale.is_finite() {
            return (f64::INFINITY, f64::INFINITY);
        }
        fmax = fmax.max(p.eval(x).abs() / scale);
        rows.push(p.weighted_grad(x).iter().map(|w| w / scale).collect::<Vec<_>>());
    }
    let mmax = minors(&rows, x.len()).into_iter().fold(0.0f64, |a, m| a.max(m.abs()));
    (fmax, mmax)
}

/// Both the absolute and the relative residual tests pass.
pub fn accepts(polys: &[FloatPoly], x: &[f64]) -> bool {
    if x.iter().any(|v| *v == 0.0 || !v.is_finite()) {
        return false;
    }
    let (f, m) = residuals(polys, x);
    let (fr, mr) = relative_residuals(polys, x);
    f < F_TOL && m < MINOR_TOL && fr < F_TOL && mr < MINOR_TOL
}

/// LM objective: for one polynomial the weighted gradient (the Euler
/// relation then forces `f = 0`), otherwise the values together with all
/// maximal minors, each normalized by `sum |c x^kappa|`.
fn objective(polys: &[FloatPoly], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let scales: Vec<f64> = polys.iter().map(|p| p.magnitude(x).max(f64::MIN_POSITIVE)).collect();
    if polys.len() == 1 {
        return polys[0].weighted_grad(x).iter().map(|w| w / scales[0]).collect();
    }
    let mut out: Vec<f64> = polys.iter().zip(&scales).map(|(p, s)| p.eval(x) / s).collect();
    let rows: Vec<Vec<f64>> = polys
        .iter()
        .zip(&scales)
        .map(|(p, s)| p.weighted_grad(x).iter().map(|w| w / s).collect())
        .collect();
    out.extend(minors(&rows, n));
    out
}

/// Exact check at a rational point: every `f_i` vanishes and the weighted
/// Jacobian has rank below `k`.
pub fn is_exact_witness(sys: &FaceSystem, x: &[Rational]) -> bool {
    if x.iter().any(num_traits::Zero::is_zero) {
        return false;
    }
    let zero = sys
        .face_polys
        .iter()
        .all(|f| f.evaluate_exact(x).is_ok_and(|v| num_traits::Zero::is_zero(&v)));
    zero && {
        let m = super::face_rank_matrix(sys, x, super::MatrixForm::Plain).expect("nonzero point");
        linalg::rank(&m) < sys.face_polys.len()
    }
}

pub(crate) fn certify_exact_point(sys: &FaceSystem, x: Vec<Rational>) -> Option<Witness> {
    if !is_exact_witness(sys, &x) {
        return None;
    }
    let point: Vec<f64> = x.iter().map(rational_to_f64).collect();
    let (f, m) = residuals(&sys.float_polys(), &point);
    Some(Witness {
        point,
        exact_point: Some(x.iter().map(ToString::to_string).collect()),
        f_residual: f,
        minor_residual: m,
    })
}

pub(crate) fn float_witness(sys: &FaceSystem, x: Vec<f64>) -> Witness {
    for tol in [1e-6, 1e-9, 1e-12] {
        let approx: Option<Vec<Rational>> = x
            .iter()
            .map(|&v| simplest_rational(v, tol * v.abs().max(1.0)))
            .collect();
        if let Some(w) = approx.and_then(|a| certify_exact_point(sys, a)) {
            return w;
        }
    }
    let (f, m) = residuals(&sys.float_polys(), &x);
    Witness {
        point: x,
        exact_point: None,
        f_residual: f,
        minor_residual: m,
    }
}

/// Runs up to `attempts` LM starts; returns the first accepted witness in
/// attempt order together with the number of attempts consumed.
pub fn witness_search(sys: &FaceSystem, attempts: usize, seed: u64, exec: Exec) -> (Option<Witness>, usize) {
    let polys = sys.float_polys();
    let n = sys.num_vars();
    let orthants = 1usize << n.min(20);
    let mut done = 0;
    while done < attempts {
        let batch = BATCH.min(attempts - done);
        let found: Vec<Option<Vec<f64>>> = exec.map(batch, |b| {
            let a = done + b;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (a as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let sigma: Vec<f64> = (0..n)
                .map(|j| if (a % orthants) >> j & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            let spread = if a < orthants { 0.0 } else { 3.0 };
            let s0: Vec<f64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
            let to_x = |s: &[f64]| -> Vec<f64> { s.iter().zip(&sigma).map(|(v, g)| g * v.exp()).collect() };
            let res = levenberg_marquardt(|s| objective(&polys, &to_x(s)), &s0, LmOptions::default());
            let x = to_x(&res.x);
            accepts(&polys, &x).then_some(x)
        });
        if let Some((b, x)) = found.into_iter().enumerate().find_map(|(b, x)| x.map(|x| (b, x))) {
            return (Some(float_witness(sys, x)), done + b + 1);
        }
        done += batch;
    }
    (None, attempts)
}

/// Re-checks a witness at `x_j t^{q_j}`; weighted homogeneity keeps it a
/// witness for every `t > 0`.
pub fn rescaled_is_witness(sys: &FaceSystem, x: &[Rational], t: &Rational) -> bool {
    let y: Vec<Rational> = x
        .iter()
        .zip(&sys.witness_q)
        .map(|(v, &qj)| v * t.pow(qj as i32))
        .collect();
    is_exact_witness(sys, &y)
}
