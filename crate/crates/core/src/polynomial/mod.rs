//! Exact sparse multivariate polynomials over the rationals.

mod float;
mod json;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use float::FloatPoly;
pub use json::{PolynomialJson, TermJson};
pub use parse::{parse_polynomial, GRAMMAR};

use crate::error::{Error, Result};
use crate::polyhedra::{Face, NewtonPolyhedron};
use crate::Rational;

/// Largest exponent a single variable may carry.
pub const MAX_EXPONENT: u64 = 1 << 31;

/// Exponent vector `kappa` of a monomial `x^kappa`. Ordered
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.iter().any(|&e| u64::from(e) > MAX_EXPONENT) {
            return Err(Error::ExponentOverflow);
        }
        Ok(Self(entries))
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for &e in entries {
            if e < 0 {
                return Err(Error::NegativeSupport(entries.to_vec()));
            }
            if e as u64 > MAX_EXPONENT {
                return Err(Error::ExponentOverflow);
            }
            out.push(e as u32);
        }
        Ok(Self(out))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        Self(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&e| i64::from(e)).collect()
    }

    pub fn dot(&self, q: &[i64]) -> i64 {
        self.0.iter().zip(q).map(|(&e, &c)| i64::from(e) * c).sum()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).ok_or(Error::ExponentOverflow))
                .collect::<Result<_>>()?,
        )
    }
}

/// `f = sum c_kappa x^kappa` with nonzero rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zeros(num_vars), c)
    }

    pub fn var(num_vars: usize, j: usize) -> Self {
        Self::monomial(ExponentVector::unit(num_vars, j), Rational::one())
    }

    pub fn monomial(e: ExponentVector, c: Rational) -> Self {
        let mut p = Self::zero(e.len());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Collects terms, merging duplicate exponents and dropping zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn support_i64(&self) -> Vec<Vec<i64>> {
        self.terms.keys().map(ExponentVector::to_i64).collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(ExponentVector::total_degree).max().unwrap_or(0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn newton_polyhedron(&self) -> Result<NewtonPolyhedron> {
        crate::polyhedra::newton_polyhedron(&self.support_i64())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.checked_add(eb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::constant(self.num_vars, Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars != other.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        Ok(())
    }

    /// `x_j^k * f`.
    pub fn shift(&self, j: usize, k: u32) -> Result<Self> {
        let mut t = ExponentVector::zeros(self.num_vars);
        t.0[j] = k;
        Ok(Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| Ok((e.checked_add(&t)?, c.clone())))
                .collect::<Result<_>>()?,
        })
    }

    /// Exact value `sum c_kappa prod x_j^kappa_j`.
    pub fn evaluate_exact(&self, point: &[Rational]) -> Result<Rational> {
        self.check_point(point.len())?;
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e.entries()) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Floating evaluation with compensated (Neumaier) summation.
    /// Overflow yields an infinite value.
    pub fn evaluate_float(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point.len())?;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (e, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for (x, &k) in point.iter().zip(e.entries()) {
                if k > 0 {
                    term *= powu(*x, k);
                }
            }
            let t = sum + term;
            if !t.is_finite() {
                return Ok(t);
            }
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        Ok(sum + comp)
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: len,
            });
        }
        Ok(())
    }

    /// Partial derivative with respect to `x_j` (0-based).
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.num_vars);
        for (e, c) in &self.terms {
            let k = e.0[j];
            if k > 0 {
                let mut d = e.clone();
                d.0[j] -= 1;
                out.add_term(d, c * Rational::from_integer(k.into()));
            }
        }
        out
    }

    pub fn gradient(&self) -> PolynomialMapping {
        PolynomialMapping {
            components: (0..self.num_vars).map(|j| self.partial(j)).collect(),
        }
    }

    /// Terms whose exponents satisfy `<q, kappa> = d`.
    pub fn filter_by_covector(&self, q: &[i64], d: i64) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.dot(q) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Face part `f_Delta`: the terms whose exponents lie in `face`.
    /// The face must be `Delta(q, Gamma(f))` for its own witness covector.
    pub fn face_part(&self, face: &Face) -> Result<Self> {
        if self.is_zero() || face.ambient_dim() != self.num_vars {
            return Err(Error::FaceNotInPolyhedron);
        }
        let support = self.support_i64();
        let q = face.witness_q();
        let d = support.iter().map(|k| crate::linalg::dot_i64(q, k)).min();
        if d != Some(face.d()) {
            return Err(Error::FaceNotInPolyhedron);
        }
        let on_face: Vec<Vec<i64>> = support
            .into_iter()
            .filter(|k| crate::linalg::dot_i64(q, k) == face.d())
            .collect();
        if on_face.as_slice() != face.points() {
            return Err(Error::FaceNotInPolyhedron);
        }
        Ok(self.filter_by_covector(q, face.d()))
    }

    /// Sets `x_j = 0` for every `j` outside `keep` (0-based indices).
    pub fn restrict_to_axes(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        if let Some(&j) = keep.iter().find(|&&j| j >= self.num_vars) {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.num_vars,
            });
        }
        Ok(Self {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| {
                    e.entries()
                        .iter()
                        .enumerate()
                        .all(|(j, &k)| k == 0 || keep.contains(&j))
                })
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// `sum_j q_j x_j df/dx_j - d f`, built from the actual derivatives.
    /// Vanishes identically when `f` is weighted homogeneous of type (q, d).
    pub fn euler_residual(&self, q: &[Rational], d: &Rational) -> Result<Self> {
        self.check_point(q.len())?;
        let mut acc = self.scale(&-d.clone());
        for (j, qj) in q.iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            let weighted = self.partial(j).shift(j, 1)?.scale(qj);
            acc = &acc + &weighted;
        }
        Ok(acc)
    }

    /// Replaces the coefficient of each exponent, keeping the support.
    pub fn with_coefficients(&self, coeffs: &[Rational]) -> Result<Self> {
        if coeffs.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: coeffs.len(),
            });
        }
        Self::from_terms(self.num_vars, self.terms.keys().cloned().zip(coeffs.iter().cloned()))
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.terms.values().cloned().collect()
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly::from_polynomial(self)
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        if c.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub(crate) fn powu(x: f64, k: u32) -> f64 {
    if k <= i32::MAX as u32 {
        x.powi(k as i32)
    } else {
        x.powf(f64::from(k))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on variable-count mismatch or exponent overflow; use
    /// [`Polynomial::try_mul`] for a fallible product.
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial product")
    }
}

/// Canonical printer: terms in decreasing lexicographic exponent order,
/// rational coefficients as `p/q`. The output parses back to the same
/// polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{}", j + 1, k)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Ordered tuple `F = (f_1, ..., f_p)` sharing the variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMapping {
    components: Vec<Polynomial>,
}

impl PolynomialMapping {
    /// Requires at least one component and a common variable count. The
    /// bound `p <= n` is enforced by the checkers that need it, since
    /// reduced mappings may have fewer variables than components.
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::NoComponents);
        };
        let n = first.num_vars();
        if let Some(bad) = components.iter().find(|c| c.num_vars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.num_vars(),
            });
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn num_vars(&self) -> usize {
        self.components.first().map_or(0, Polynomial::num_vars)
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        Self::new(indices.iter().map(|&i| self.components[i].clone()).collect())
    }

    pub fn check_p_le_n(&self) -> Result<()> {
        if self.len() > self.num_vars() {
            return Err(Error::TooManyComponents {
                p: self.len(),
                n: self.num_vars(),
            });
        }
        Ok(())
    }
}
