//! Dense univariate polynomials over Q with gcd and Sturm root counting.

use num_traits::{One, Signed, Zero};

use crate::linalg::{abs_q, q};
use crate::Rational;

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Rational>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Self(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let dl = d.lead();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / dl;
            for (i, c) in d.0.iter().enumerate() {
                r[shift + i] -= &f * c;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Self::new(r)
    }

    /// Monic gcd; the gcd with zero is the other argument made monic.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone(), self.derivative()];
        while !chain.last().unwrap().is_zero() {
            let k = chain.len();
            let r = chain[k - 2].rem(&chain[k - 1]);
            chain.push(Self(r.0.iter().map(|c| -c).collect()));
        }
        chain.pop();
        chain
    }

    fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut prev = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    fn sign(x: &Rational) -> i8 {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    }

    fn changes_at(chain: &[Self], t: &Rational) -> usize {
        Self::sign_changes(chain.iter().map(|p| Self::sign(&p.eval(t))))
    }

    fn changes_at_infinity(chain: &[Self], positive: bool) -> usize {
        Self::sign_changes(chain.iter().map(|p| {
            let s = Self::sign(p.lead());
            if positive || p.0.len() % 2 == 1 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::changes_at_infinity(&chain, false) - Self::changes_at_infinity(&chain, true)
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots_in(&self, a: &Rational, b: &Rational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = self.sturm_chain();
        Self::changes_at(&chain, a).saturating_sub(Self::changes_at(&chain, b))
    }

    /// Number of distinct real roots different from zero.
    pub fn count_nonzero_real_roots(&self) -> usize {
        let total = self.count_real_roots();
        if !self.is_zero() && self.0[0].is_zero() {
            total - 1
        } else {
            total
        }
    }

    /// Cauchy bound: every root has modulus below it.
    pub fn root_bound(&self) -> Rational {
        let l = abs_q(self.lead());
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| abs_q(c) / &l)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::one()
    }

    /// An isolating interval `(lo, hi]` of width at most `width` around a
    /// nonzero real root, preferring the smallest positive one.
    pub fn isolate_nonzero_root(&self, width: &Rational) -> Option<(Rational, Rational)> {
        if self.degree().unwrap_or(0) == 0 {
            return None;
        }
        let chain = self.sturm_chain();
        let count =
            |a: &Rational, b: &Rational| Self::changes_at(&chain, a).saturating_sub(Self::changes_at(&chain, b));
        let bound = self.root_bound();
        // (0, B] then (-B, 0), excluding a root at zero via a tiny offset
        let zero = Rational::zero();
        for (lo, hi) in [(zero.clone(), bound.clone()), (-bound.clone(), zero.clone())] {
            let hi = if hi.is_zero() {
                // shrink below any nonzero root: (-B, -eps]
                let mut eps = Rational::new(1.into(), 2.into());
                while count(&-eps.clone(), &zero) > usize::from(self.0[0].is_zero()) {
                    eps /= q(2);
                }
                -eps
            } else {
                hi
            };
            let (mut a, mut b) = (lo, hi);
            if count(&a, &b) == 0 {
                continue;
            }
            while &b - &a > *width {
                let mid = (&a + &b) / q(2);
                if count(&a, &mid) > 0 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Some((a, b));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_vec;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(q_vec(c))
    }

    #[test]
    fn gcd_and_derivative() {
        // (t-1)^2 (t+2)
        let p = up(&[2, -3, 0, 1]);
        assert_eq!(p.gcd(&p.derivative()), up(&[-1, 1]));
        assert_eq!(up(&[1, 0, 1]).gcd(&up(&[0, 1])), up(&[1]));
        assert_eq!(up(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn sturm_counts() {
        let p = up(&[2, -3, 0, 1]);
        assert_eq!(p.count_real_roots(), 2);
        assert_eq!(p.count_roots_in(&q(0), &q(5)), 1);
        assert_eq!(up(&[1, 0, 1]).count_real_roots(), 0);
        // t (t - 3)
        let z = up(&[0, -3, 1]);
        assert_eq!(z.count_real_roots(), 2);
        assert_eq!(z.count_nonzero_real_roots(), 1);
        assert_eq!(up(&[0, 1]).count_nonzero_real_roots(), 0);
    }

    #[test]
    fn isolation() {
        // t^2 - 2
        let p = up(&[-2, 0, 1]);
        let w = Rational::new(1.into(), 1_000_000.into());
        let (a, b) = p.isolate_nonzero_root(&w).unwrap();
        assert!(a < b && &b - &a <= w);
        let lo = crate::polynomial::rational_to_f64(&a);
        assert!((lo - 2f64.sqrt()).abs() < 1e-5);
        // t (t + 1): only the negative root is nonzero
        let (a, b) = up(&[0, 1, 1]).isolate_nonzero_root(&w).unwrap();
        assert!(a < q(-1) + &w && b >= q(-1));
        assert!(up(&[0, 1]).isolate_nonzero_root(&w).is_none());
    }
}
