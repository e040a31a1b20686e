//! Small exact linear algebra: rational Gaussian elimination plus a few
//! integer helpers (gcd, primitive vectors, fraction-free determinants).
//!
//! Matrices are tiny (at most a few hundred rows, n <= 4 columns in the
//! common case), so everything is dense and row-major.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

pub type QMatrix = Vec<Vec<Rational>>;

pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn q_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn q_matrix(rows: &[Vec<i64>]) -> QMatrix {
    rows.iter().map(|r| q_vec(r)).collect()
}

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref(mut m: QMatrix) -> (QMatrix, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    rref(m.to_vec()).1.len()
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    rank(&q_matrix(rows))
}

/// Basis of the right null space `{x : m x = 0}` for a matrix with `cols`
/// columns.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> QMatrix {
    let (r, pivots) = rref(m.to_vec());
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Integer null-space basis. Each vector is primitive with its first
/// nonzero entry positive.
pub fn kernel_i64(rows: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    kernel(&q_matrix(rows), cols)
        .into_iter()
        .map(|v| {
            let mut z = clear_denominators(&v);
            if z.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                z.iter_mut().for_each(|x| *x = -*x);
            }
            z
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction (sign preserved). Zero maps to zero.
pub fn clear_denominators(v: &[Rational]) -> Vec<i64> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            y.to_i64().expect("covector entry overflows i64")
        })
        .collect()
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for k in c..n {
                    let delta = &f * &a[c][k];
                    a[i][k] -= delta;
                }
            }
        }
    }
    d
}

pub fn inverse(m: &[Vec<Rational>]) -> Option<QMatrix> {
    let n = m.len();
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Fraction-free (Bareiss) determinant of a small integer matrix.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Vector orthogonal to the `n - 1` rows of an `(n-1) x n` integer matrix,
/// via signed maximal minors. Zero iff the rows are dependent.
pub fn cross_product(rows: &[Vec<i64>], n: usize) -> Vec<i128> {
    debug_assert_eq!(rows.len() + 1, n);
    (0..n)
        .map(|skip| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, &x)| x as i128)
                        .collect()
                })
                .collect();
            let d = det_i128(&minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Divide by the gcd of the entries; `None` for the zero vector.
pub fn primitive_i128(v: &[i128]) -> Option<Vec<i64>> {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return None;
    }
    Some(
        v.iter()
            .map(|&x| i64::try_from(x / g).expect("primitive vector overflows i64"))
            .collect(),
    )
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_q(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank of a floating-point matrix by Gaussian elimination with a
/// relative pivot threshold.
pub fn rank_f64(m: &[Vec<f64>], rel_tol: f64) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a.iter().flatten().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= rel_tol * scale {
            continue;
        }
        a.swap(r, p);
        for i in r + 1..rows {
            let f = a[i][c] / a[r][c];
            for k in c..cols {
                a[i][k] -= f * a[r][k];
            }
        }
        r += 1;
    }
    r
}

pub fn abs_q(x: &Rational) -> Rational {
    x.abs()
}
