//! Small dense numerical helpers: Levenberg-Marquardt least squares,
//! Gaussian elimination and rational reconstruction of floats.

use num_bigint::BigInt;

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop once the residual norm falls below this.
    pub tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            tol: 1e-15,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmResult {
    pub x: Vec<f64>,
    pub norm: f64,
    pub iterations: usize,
}

fn norm(r: &[f64]) -> f64 {
    let n2: f64 = r.iter().map(|v| v * v).sum();
    if n2.is_finite() {
        n2.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Minimizes `|r(x)|` from `x0` with a forward-difference Jacobian.
pub fn levenberg_marquardt<F>(r: F, x0: &[f64], opts: LmOptions) -> LmResult
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let jac = |x: &[f64], res: &[f64]| {
        let n = x.len();
        let mut jac = vec![vec![0.0; n]; res.len()];
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.to_vec();
            xp[j] += h;
            let rp = r(&xp);
            for (row, (a, b)) in jac.iter_mut().zip(rp.iter().zip(res)) {
                row[j] = (a - b) / h;
            }
        }
        jac
    };
    levenberg_marquardt_with_jacobian(&r, jac, x0, opts)
}

/// Levenberg-Marquardt with a caller-supplied Jacobian `jac(x, r(x))`.
pub fn levenberg_marquardt_with_jacobian<F, J>(r: F, jac: J, x0: &[f64], opts: LmOptions) -> LmResult
where
    F: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&[f64], &[f64]) -> Vec<Vec<f64>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut res = r(&x);
    let mut cur = norm(&res);
    let mut lambda = 1e-3;
    let mut it = 0;
    while it < opts.max_iter && cur > opts.tol && cur.is_finite() {
        it += 1;
        let jm = jac(&x, &res);
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for (row, ri) in jm.iter().zip(&res) {
            for a in 0..n {
                jtr[a] += row[a] * ri;
                for b in 0..n {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[k][k] += lambda * (jtj[k][k] + 1e-12);
            }
            let rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let Some(step) = solve_dense(a, rhs) else {
                lambda *= 4.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let tr = r(&trial);
            let tn = norm(&tr);
            if tn < cur {
                let small = step.iter().zip(&x).all(|(s, v)| s.abs() <= 1e-16 * v.abs().max(1.0));
                x = trial;
                res = tr;
                cur = tn;
                lambda = (lambda / 3.0).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    LmResult {
        x,
        norm: cur,
        iterations: it,
    }
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f == 0.0 {
                continue;
            }
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Determinant by elimination with partial pivoting.
pub fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Simplest rational (smallest denominator) within `tol` of `x`, by
/// continued fractions. `None` for non-finite input.
pub fn simplest_rational(x: f64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::from(0), BigInt::from(1));
    let (mut k0, mut k1) = (BigInt::from(1), BigInt::from(0));
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let cand = Rational::new(h1.clone(), k1.clone());
        if (crate::polynomial::rational_to_f64(&cand) - x).abs() <= tol {
            return Some(cand);
        }
        let frac = rest - a;
        if frac == 0.0 {
            return Some(cand);
        }
        rest = 1.0 / frac;
        if !rest.is_finite() || rest.abs() > 1e15 {
            return Some(cand);
        }
    }
    Some(Rational::new(h1, k1))
}
