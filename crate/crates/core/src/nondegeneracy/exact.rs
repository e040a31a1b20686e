//! Exact emptiness decisions for face systems whose faces are points or
//! parallel segments. This covers every face system in two variables.
//!
//! On a segment with primitive direction `v` a face polynomial factors as
//! `f = x^a P(x^v)` with `P` univariate, and `m = x^v` sweeps all of `R*`
//! because some `v_j` is odd. For one polynomial the weighted gradient is
//! `x^a (a P(m) + m P'(m) v)`, which by the Euler relation vanishes iff
//! `P(m) = P'(m) = 0`. For several polynomials every weighted gradient row
//! is parallel to `v` on the common zero set, so the rank drops iff the
//! `P_i` have a common nonzero real root.

use num_traits::{Signed, Zero};

use super::{Evidence, FaceSystem};
use crate::linalg::{dot_i64, primitive_i128, q};
use crate::polynomial::rational_to_f64;
use crate::univariate::UPoly;
use crate::Rational;

/// `Some(evidence)` when the system is decidable this way.
pub(crate) fn decide_collinear(sys: &FaceSystem) -> Option<Evidence> {
    let faces: Vec<&[Vec<i64>]> = sys.faces.iter().map(|f| f.points()).collect();
    if faces.iter().any(|pts| pts.len() == 1) {
        return Some(Evidence::EmptyZeroSet {
            reason: "monomial face polynomial".into(),
        });
    }
    let mut dir: Option<Vec<i64>> = None;
    for pts in &faces {
        let base = &pts[0];
        for p in &pts[1..] {
            let diff: Vec<i128> = p.iter().zip(base).map(|(a, b)| i128::from(a - b)).collect();
            let mut v = primitive_i128(&diff)?;
            if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            match &dir {
                None => dir = Some(v),
                Some(d) if *d == v => {}
                Some(_) => return None,
            }
        }
    }
    let v = dir?;
    let polys: Vec<(Vec<i64>, UPoly)> = sys
        .face_polys
        .iter()
        .map(|f| {
            let support = f.support_i64();
            let base = support
                .iter()
                .min_by_key(|k| dot_i64(&v, k))
                .expect("nonzero face polynomial")
                .clone();
            let vv = dot_i64(&v, &v);
            let len = support
                .iter()
                .map(|k| (dot_i64(&v, k) - dot_i64(&v, &base)) / vv)
                .max()
                .unwrap() as usize;
            let mut coeffs = vec![Rational::zero(); len + 1];
            for (e, c) in f.terms() {
                let t = (dot_i64(&v, &e.to_i64()) - dot_i64(&v, &base)) / vv;
                coeffs[t as usize] = c.clone();
            }
            (base, UPoly::new(coeffs))
        })
        .collect();

    let g = if polys.len() == 1 {
        let p = &polys[0].1;
        let g = p.gcd(&p.derivative());
        if g.count_nonzero_real_roots() == 0 {
            return Some(if p.count_nonzero_real_roots() == 0 {
                Evidence::EmptyZeroSet {
                    reason: "face polynomial has no zero in the torus".into(),
                }
            } else {
                Evidence::FullRankEverywhere
            });
        }
        g
    } else {
        let g = polys[1..].iter().fold(polys[0].1.clone(), |acc, (_, p)| acc.gcd(p));
        if g.count_nonzero_real_roots() == 0 {
            return Some(Evidence::EmptyZeroSet {
                reason: "face polynomials have no common zero in the torus".into(),
            });
        }
        g
    };
    Some(Evidence::Witness(witness_from_root(sys, &v, &g)))
}

/// Places a nonzero real root `m` of `g` on the torus via `x^v = m`.
fn witness_from_root(sys: &FaceSystem, v: &[i64], g: &UPoly) -> super::Witness {
    let n = v.len();
    let j = v
        .iter()
        .position(|x| x % 2 != 0)
        .expect("primitive direction has an odd entry");
    let vj = v[j];
    if g.degree() == Some(1) {
        let root = -&g.coeffs()[0] / &g.coeffs()[1];
        if vj.abs() == 1 {
            let mut x = vec![q(1); n];
            x[j] = root.pow(vj as i32);
            return super::search::certify_exact_point(sys, x).expect("collinear root is an exact witness");
        }
        return float_witness(sys, n, j, vj, rational_to_f64(&root));
    }
    let width = Rational::new(1.into(), num_bigint::BigInt::from(10).pow(30));
    let (a, b) = g.isolate_nonzero_root(&width).expect("nonzero root exists");
    let mid = (a + b) / q(2);
    float_witness(sys, n, j, vj, rational_to_f64(&mid))
}

fn float_witness(sys: &FaceSystem, n: usize, j: usize, vj: i64, m: f64) -> super::Witness {
    let mut x = vec![1.0; n];
    let mag = m.abs().powf(1.0 / vj as f64);
    x[j] = if m.is_negative() { -mag } else { mag };
    super::search::float_witness(sys, x)
}
