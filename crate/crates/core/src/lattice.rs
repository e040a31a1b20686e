//! Integer lattice tools for supports lying on a proper affine subspace:
//! primitive vectors, unimodular completion of a covector family by
//! lattice-point descent, and the monomial change of coordinates that rewrites
//! such a mapping as monomial prefactors times polynomials in fewer
//! variables.
//!
//! With basis matrix `A` (row `j` is the covector `q~^j`) the coordinate
//! change is `x_k = prod_j u_j^{A_jk}`, so `x^kappa = u^{A kappa}`.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, det_i128, dot_i64, kernel_i64, primitive_i128, q};
use crate::polynomial::{ExponentVector, Polynomial, PolynomialMapping};
use crate::Rational;

/// `v / gcd(v)`, sign preserved.
pub fn primitive(v: &[i64]) -> Result<Vec<i64>> {
    primitive_i128(&v.iter().map(|&x| i128::from(x)).collect::<Vec<_>>()).ok_or(Error::ZeroVector)
}

/// Square integer matrix with determinant `+-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularBasis {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl UnimodularBasis {
    /// Checks `|det| = 1`.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let d = det_i128(&to_i128(&rows));
        if d.abs() != 1 {
            return Err(Error::InvalidArgument(format!("basis determinant is {d}, not +-1")));
        }
        Ok(Self { n, rows })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn det(&self) -> i64 {
        det_i128(&to_i128(&self.rows)) as i64
    }

    /// `A kappa`.
    pub fn apply(&self, kappa: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| dot_i64(r, kappa)).collect()
    }

    /// Integer inverse matrix; `None` when the rows are not unimodular.
    pub fn inverse(&self) -> Option<Vec<Vec<i64>>> {
        let inv = linalg::inverse(&linalg::q_matrix(&self.rows))?;
        inv.iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        if x.is_integer() {
                            i64::try_from(x.to_integer()).ok()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `x(u)` with `x_k = prod_j u_j^{A_jk}`; all `u_j` must be nonzero.
    pub fn monomial_map(&self, u: &[Rational]) -> Vec<Rational> {
        monomial_map(&self.rows, u)
    }

    /// `u(x)`, the inverse monomial map.
    pub fn inverse_monomial_map(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        Some(monomial_map(&self.inverse()?, x))
    }
}

fn to_i128(rows: &[Vec<i64>]) -> Vec<Vec<i128>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect()
}

/// `y_k = prod_j u_j^{M_jk}`.
fn monomial_map(m: &[Vec<i64>], u: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    (0..n)
        .map(|k| {
            (0..n).fold(Rational::one(), |acc, j| {
                let e = i32::try_from(m[j][k]).expect("exponent fits i32");
                acc * u[j].pow(e)
            })
        })
        .collect()
}

/// Lattice points of `conv{0, v_1, ..., v_m}` other than its `m + 1`
/// vertices, sorted lexicographically. The `v_i` must be independent.
pub fn simplex_nonvertex_points(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = lattice_scan(verts, Region::Simplex)
        .into_iter()
        .map(|(_, z)| z)
        .collect();
    out.sort();
    out
}

/// Nonzero lattice points `sum t_i v_i` with every `t_i` in `[0, 1)`. The
/// set is empty exactly when the `v_i` form a basis of the lattice points
/// of their span. Points of the simplex `conv{0, v_1, ..., v_m}` come first,
/// then the rest, each group sorted lexicographically.
pub fn parallelepiped_points(verts: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = lattice_scan(verts, Region::Parallelepiped);
    out.sort();
    out.into_iter().map(|(_, z)| z).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Region {
    Simplex,
    Parallelepiped,
}

/// Scans the bounding box of the region in the coordinates of a nonsingular
/// minor. Each hit is tagged with whether it lies outside the simplex.
fn lattice_scan(verts: &[Vec<i64>], region: Region) -> Vec<(bool, Vec<i64>)> {
    let m = verts.len();
    if m == 0 {
        return Vec::new();
    }
    let n = verts[0].len();
    let rows = independent_rows(verts, n);
    let b: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| verts.iter().map(|v| i128::from(v[r])).collect())
        .collect();
    let mut det = det_i128(&b);
    assert!(det != 0, "simplex vertices must be independent");
    let mut adj = adjugate(&b);
    if det < 0 {
        det = -det;
        adj.iter_mut().flatten().for_each(|x| *x = -*x);
    }
    let (lo, hi): (Vec<i64>, Vec<i64>) = match region {
        Region::Simplex => rows
            .iter()
            .map(|&r| {
                let lo = verts.iter().map(|v| v[r]).min().unwrap().min(0);
                let hi = verts.iter().map(|v| v[r]).max().unwrap().max(0);
                (lo, hi)
            })
            .unzip(),
        Region::Parallelepiped => rows
            .iter()
            .map(|&r| {
                let lo: i64 = verts.iter().map(|v| v[r].min(0)).sum();
                let hi: i64 = verts.iter().map(|v| v[r].max(0)).sum();
                (lo, hi)
            })
            .unzip(),
    };
    let mut out = Vec::new();
    let mut z = lo.clone();
    'scan: loop {
        let w: Vec<i128> = adj
            .iter()
            .map(|row| row.iter().zip(&z).map(|(a, &x)| a * i128::from(x)).sum())
            .collect();
        let total: i128 = w.iter().sum();
        let in_simplex = w.iter().all(|&x| x >= 0) && total <= det;
        let keep = match region {
            Region::Simplex => {
                let vertex =
                    w.iter().all(|&x| x == 0) || (w.iter().filter(|&&x| x != 0).count() == 1 && w.contains(&det));
                in_simplex && !vertex
            }
            Region::Parallelepiped => w.iter().all(|&x| (0..det).contains(&x)) && w.iter().any(|&x| x != 0),
        };
        if keep {
            let full: Vec<i128> = (0..n)
                .map(|c| verts.iter().zip(&w).map(|(v, wi)| i128::from(v[c]) * wi).sum())
                .collect();
            if full.iter().all(|x| x % det == 0) {
                out.push((!in_simplex, full.iter().map(|x| (x / det) as i64).collect()));
            }
        }
        let mut j = m;
        loop {
            if j == 0 {
                break 'scan;
            }
            j -= 1;
            if z[j] < hi[j] {
                z[j] += 1;
                break;
            }
            z[j] = lo[j];
        }
    }
    out
}

/// First `m` coordinates (lexicographically) whose minor is nonsingular.
fn independent_rows(verts: &[Vec<i64>], n: usize) -> Vec<usize> {
    let m = verts.len();
    let mut chosen: Vec<usize> = Vec::new();
    for c in 0..n {
        let mut trial = chosen.clone();
        trial.push(c);
        let cols: Vec<Vec<i64>> = trial.iter().map(|&r| verts.iter().map(|v| v[r]).collect()).collect();
        if linalg::rank_i64(&cols) == trial.len() {
            chosen = trial;
            if chosen.len() == m {
                break;
            }
        }
    }
    chosen
}

fn adjugate(b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let m = b.len();
    if m == 1 {
        return vec![vec![1]];
    }
    (0..m)
        .map(|i| {
            (0..m)
                .map(|r| {
                    let minor: Vec<Vec<i128>> = (0..m)
                        .filter(|&rr| rr != r)
                        .map(|rr| (0..m).filter(|&cc| cc != i).map(|cc| b[rr][cc]).collect())
                        .collect();
                    let d = det_i128(&minor);
                    if (i + r) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

/// One replacement chain of the descent: the counts of nonzero lattice
/// points in the half-open parallelepiped observed while completing basis
/// vector `index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentStep {
    pub index: usize,
    pub counts: Vec<usize>,
}

/// Completes `n - d` independent covectors, nonnegative on `s`, to a
/// unimodular basis whose first rows span the same prefix spaces.
pub fn unimodular_complete(n: usize, q_list: &[Vec<i64>], s: &[Vec<i64>]) -> Result<UnimodularBasis> {
    Ok(unimodular_complete_traced(n, q_list, s)?.0)
}

pub fn unimodular_complete_traced(
    n: usize,
    q_list: &[Vec<i64>],
    s: &[Vec<i64>],
) -> Result<(UnimodularBasis, Vec<DescentStep>)> {
    for v in q_list.iter().chain(s) {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let mut start = Vec::with_capacity(n);
    for v in q_list {
        start.push(primitive(v)?);
    }
    if linalg::rank_i64(&start) < start.len() {
        return Err(Error::DependentCovectors);
    }
    for (index, v) in start.iter().enumerate() {
        if let Some(point) = s.iter().find(|k| dot_i64(v, k) < 0) {
            return Err(Error::NegativeOnSupport {
                index,
                point: point.clone(),
            });
        }
    }
    for j in 0..n {
        if start.len() == n {
            break;
        }
        let mut trial = start.clone();
        trial.push((0..n).map(|i| i64::from(i == j)).collect());
        if linalg::rank_i64(&trial) == trial.len() {
            start = trial;
        }
    }

    let mut basis: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut trace = Vec::new();
    for (index, mut c) in start.into_iter().enumerate() {
        let mut counts = Vec::new();
        loop {
            let mut verts = basis.clone();
            verts.push(c.clone());
            let pts = parallelepiped_points(&verts);
            if let Some(&prev) = counts.last() {
                if pts.len() >= prev {
                    return Err(Error::Internal("simplex descent did not decrease".into()));
                }
            }
            counts.push(pts.len());
            match pts.into_iter().next() {
                Some(a) => c = a,
                None => break,
            }
        }
        trace.push(DescentStep { index, counts });
        basis.push(c);
    }
    let b = UnimodularBasis::new(basis).map_err(|e| Error::Internal(format!("completion is not unimodular: {e}")))?;
    Ok((b, trace))
}

/// Covectors constant on every support, with their values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCovectors {
    /// `n - d` primitive integer covectors, canonical sign.
    pub q_list: Vec<Vec<i64>>,
    /// `d_matrix[i][j] = <q^j, kappa>` for `kappa` in `supp(f_i)`.
    pub d_matrix: Vec<Vec<i64>>,
    /// Dimension of the Minkowski sum of the Newton polyhedra.
    pub dim: usize,
    pub needs_shift: bool,
}

pub fn affine_support_covectors(f: &PolynomialMapping) -> Result<AffineCovectors> {
    let n = f.num_vars();
    let supports = supports(f)?;
    let diffs: Vec<Vec<i64>> = supports
        .iter()
        .flat_map(|s| {
            let base = s[0].clone();
            s[1..]
                .iter()
                .map(move |k| k.iter().zip(&base).map(|(a, b)| a - b).collect::<Vec<i64>>())
                .collect::<Vec<_>>()
        })
        .collect();
    let dim = linalg::rank_i64(&diffs);
    if dim == n {
        return Err(Error::FullDimensional);
    }
    let q_list = kernel_i64(&diffs, n);
    let d_matrix: Vec<Vec<i64>> = supports
        .iter()
        .map(|s| q_list.iter().map(|qj| dot_i64(qj, &s[0])).collect())
        .collect();
    let needs_shift = d_matrix.iter().flatten().any(|&d| d < 0);
    Ok(AffineCovectors {
        q_list,
        d_matrix,
        dim,
        needs_shift,
    })
}

fn supports(f: &PolynomialMapping) -> Result<Vec<Vec<Vec<i64>>>> {
    f.components()
        .iter()
        .map(|c| {
            let s = c.support_i64();
            if s.is_empty() {
                Err(Error::EmptySupport)
            } else {
                Ok(s)
            }
        })
        .collect()
}

/// Mapping rewritten as `x_r^N f_i(x(u)) = u_1^{d_i1} ... u_{n-d}^{d_i,n-d} g_i(u')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedMapping {
    pub original: PolynomialMapping,
    pub basis: UnimodularBasis,
    /// Axis `r` of the shift `kappa -> kappa + N e^r`.
    pub shift_axis: usize,
    pub shift: u32,
    /// `d_ij >= 0`, `n - d` entries per component.
    pub monomial_prefactors: Vec<Vec<i64>>,
    /// The `g_i`, in the last `d` coordinates `u'`.
    pub reduced: PolynomialMapping,
}

impl ReducedMapping {
    pub fn reduced_dim(&self) -> usize {
        self.reduced.num_vars()
    }

    /// The mapping after the shift, `x_r^N f_i`.
    pub fn shifted(&self) -> Result<PolynomialMapping> {
        PolynomialMapping::new(
            self.original
                .components()
                .iter()
                .map(|f| f.shift(self.shift_axis, self.shift))
                .collect::<Result<_>>()?,
        )
    }

    pub fn to_json(&self, verification: Option<VerificationReport>) -> ReductionReport {
        ReductionReport {
            basis: self.basis.rows().to_vec(),
            det: self.basis.det(),
            shift_axis: self.shift_axis + 1,
            shift: self.shift,
            monomial_prefactors: self.monomial_prefactors.clone(),
            reduced: self.reduced.components().to_vec(),
            verification,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub basis: Vec<Vec<i64>>,
    pub det: i64,
    /// 1-based axis of the shift.
    pub shift_axis: usize,
    pub shift: u32,
    pub monomial_prefactors: Vec<Vec<i64>>,
    pub reduced: Vec<Polynomial>,
    pub verification: Option<VerificationReport>,
}

pub fn reduce_mapping(f: &PolynomialMapping) -> Result<ReducedMapping> {
    let n = f.num_vars();
    let cov = affine_support_covectors(f)?;
    let mut q_list = cov.q_list.clone();
    let mut dm = cov.d_matrix.clone();
    let mut shift_axis = 0;
    let mut shift = 0i64;
    if cov.needs_shift {
        shift_axis = (0..n)
            .find(|&r| q_list.iter().any(|qj| qj[r] != 0))
            .expect("some covector is nonzero");
        let r = shift_axis;
        let p = q_list.iter().position(|qj| qj[r] != 0).unwrap();
        if q_list[p][r] < 0 {
            q_list[p].iter_mut().for_each(|x| *x = -*x);
            dm.iter_mut().for_each(|row| row[p] = -row[p]);
        }
        let pivot = q_list[p].clone();
        for j in 0..q_list.len() {
            if j == p || q_list[j][r] > 0 {
                continue;
            }
            let m = (-q_list[j][r]).div_euclid(pivot[r]) + 1;
            for (x, y) in q_list[j].iter_mut().zip(&pivot) {
                *x += m * y;
            }
            for row in dm.iter_mut() {
                row[j] += m * row[p];
            }
        }
        for row in &dm {
            for (j, &d) in row.iter().enumerate() {
                if d < 0 {
                    let qr = q_list[j][r];
                    shift = shift.max((-d + qr - 1) / qr);
                }
            }
        }
    }
    let shift = u32::try_from(shift).map_err(|_| Error::ExponentOverflow)?;
    let shifted: Vec<Polynomial> = f
        .components()
        .iter()
        .map(|c| c.shift(shift_axis, shift))
        .collect::<Result<_>>()?;
    let all_support: Vec<Vec<i64>> = {
        let mut s: Vec<Vec<i64>> = shifted.iter().flat_map(Polynomial::support_i64).collect();
        s.sort();
        s.dedup();
        s
    };
    let basis = unimodular_complete(n, &q_list, &all_support)?;
    let k = q_list.len();
    let d = n - k;
    let mut prefactors = Vec::with_capacity(shifted.len());
    let mut reduced = Vec::with_capacity(shifted.len());
    for comp in &shifted {
        let s0 = comp.support_i64()[0].clone();
        let image = basis.apply(&s0);
        if image[..k].iter().any(|&x| x < 0) {
            return Err(Error::Internal("negative prefactor after shift".into()));
        }
        prefactors.push(image[..k].to_vec());
        let terms = comp
            .terms()
            .map(|(e, c)| {
                let img = basis.apply(&e.to_i64());
                if img[..k] != image[..k] {
                    return Err(Error::Internal("covector not constant on support".into()));
                }
                Ok((ExponentVector::from_i64(&img[k..])?, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        reduced.push(Polynomial::from_terms(d, terms)?);
    }
    Ok(ReducedMapping {
        original: f.clone(),
        basis,
        shift_axis,
        shift,
        monomial_prefactors: prefactors,
        reduced: PolynomialMapping::new(reduced)?,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub samples: usize,
    pub value_pass: usize,
    pub value_fail: usize,
    pub rank_pass: usize,
    pub rank_fail: usize,
    pub inverse_pass: usize,
    pub inverse_fail: usize,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.value_fail == 0 && self.rank_fail == 0 && self.inverse_fail == 0
    }
}

/// Random nonzero rational with small numerator and denominator.
pub fn sample_nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut num: i64 = rng.gen_range(-9..=8);
    if num >= 0 {
        num += 1;
    }
    let den: i64 = rng.gen_range(1..=9);
    Rational::new(num.into(), den.into())
}

/// Checks the reduction identities exactly at random points of `(Q*)^n`.
pub fn verify_reduction(r: &ReducedMapping, sample_count: usize, seed: u64, exec: Exec) -> VerificationReport {
    let n = r.basis.n();
    let shifted = r.shifted().expect("shift succeeded at construction");
    let k = n - r.reduced_dim();
    let outcomes: Vec<(bool, bool, bool)> = exec.map(sample_count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        let u: Vec<Rational> = (0..n).map(|_| sample_nonzero_rational(&mut rng)).collect();
        let x = r.basis.monomial_map(&u);
        let up = &u[k..];
        let mut values = true;
        let mut x_rows = Vec::new();
        let mut u_rows = Vec::new();
        for (i, (f, g)) in shifted.components().iter().zip(r.reduced.components()).enumerate() {
            let lhs = f.evaluate_exact(&x).expect("arity");
            let gv = g.evaluate_exact(up).expect("arity");
            let pref = r.monomial_prefactors[i]
                .iter()
                .zip(&u)
                .fold(Rational::one(), |acc, (&e, uj)| acc * uj.pow(e as i32));
            values &= lhs == &pref * &gv;
            x_rows.push(
                (0..n)
                    .map(|j| &x[j] * f.partial(j).evaluate_exact(&x).expect("arity"))
                    .collect::<Vec<_>>(),
            );
            let mut row: Vec<Rational> = r.monomial_prefactors[i].iter().map(|&d| q(d) * &gv).collect();
            row.extend((0..up.len()).map(|j| &up[j] * g.partial(j).evaluate_exact(up).expect("arity")));
            u_rows.push(row);
        }
        let ranks = linalg::rank(&x_rows) == linalg::rank(&u_rows);
        let back = r.basis.inverse_monomial_map(&x);
        (values, ranks, back.as_deref() == Some(&u[..]))
    });
    let mut rep = VerificationReport {
        samples: sample_count,
        ..Default::default()
    };
    for (v, rk, inv) in outcomes {
        if v {
            rep.value_pass += 1
        } else {
            rep.value_fail += 1
        }
        if rk {
            rep.rank_pass += 1
        } else {
            rep.rank_fail += 1
        }
        if inv {
            rep.inverse_pass += 1
        } else {
            rep.inverse_fail += 1
        }
    }
    rep
}

/// Negative control: the same reduction with one basis row doubled
/// (determinant 2), keeping prefactors and reduced polynomials. Picks the
/// first row that is nonzero on the shifted supports; `None` if every row
/// vanishes there, in which case the corruption is invisible.
pub fn corrupt_basis(r: &ReducedMapping) -> Option<ReducedMapping> {
    let shifted = r.shifted().ok()?;
    let support: Vec<Vec<i64>> = shifted.components().iter().flat_map(Polynomial::support_i64).collect();
    let row = (0..r.basis.n()).find(|&j| support.iter().any(|k| dot_i64(&r.basis.rows()[j], k) != 0))?;
    let mut rows = r.basis.rows().to_vec();
    rows[row].iter_mut().for_each(|x| *x *= 2);
    let mut out = r.clone();
    out.basis = UnimodularBasis { n: r.basis.n(), rows };
    Some(out)
}

impl Default for UnimodularBasis {
    fn default() -> Self {
        Self::identity(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    fn map(texts: &[&str], n: usize) -> PolynomialMapping {
        PolynomialMapping::new(texts.iter().map(|t| parse_polynomial(t, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[2, 2]).unwrap(), vec![1, 1]);
        assert_eq!(primitive(&[-4, 6]).unwrap(), vec![-2, 3]);
        assert_eq!(primitive(&[0, 5, 0]).unwrap(), vec![0, 1, 0]);
        assert!(matches!(primitive(&[0, 0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn completion_examples() {
        let s = vec![vec![1, 0], vec![0, 1]];
        let b = unimodular_complete(2, &[vec![1, 1]], &s).unwrap();
        assert_eq!(b.rows(), &[vec![1, 1], vec![1, 0]]);
        assert_eq!(b.det(), -1);
        let b2 = unimodular_complete(2, &[vec![2, 2]], &s).unwrap();
        assert_eq!(b2, b);
        let id = unimodular_complete(3, &[], &[vec![1, 2, 3]]).unwrap();
        assert_eq!(id, UnimodularBasis::identity(3));
    }

    #[test]
    fn completion_errors() {
        let s = vec![vec![1, 0]];
        assert!(matches!(
            unimodular_complete(2, &[vec![1, 1], vec![2, 2]], &s),
            Err(Error::DependentCovectors)
        ));
        assert!(matches!(
            unimodular_complete(2, &[vec![-1, 1]], &s),
            Err(Error::NegativeOnSupport { index: 0, .. })
        ));
    }

    #[test]
    fn descent_replaces_interior_points() {
        // conv{0,(1,1,0),(1,-1,0)} holds (1,0,0)
        let (b, trace) = unimodular_complete_traced(3, &[vec![1, 1, 0], vec![1, -1, 0]], &[vec![1, 0, 0]]).unwrap();
        assert_eq!(b.rows()[1], vec![1, 0, 0]);
        assert_eq!(trace[1].counts, vec![1, 0]);
        assert_eq!(b.det().abs(), 1);
    }

    #[test]
    fn simplex_points() {
        assert_eq!(
            simplex_nonvertex_points(&[vec![2, 0], vec![0, 2]]),
            vec![vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert!(simplex_nonvertex_points(&[vec![1, 1], vec![1, 0]]).is_empty());
        assert_eq!(
            simplex_nonvertex_points(&[vec![3, 3, 0]]),
            vec![vec![1, 1, 0], vec![2, 2, 0]]
        );
    }

    #[test]
    fn empty_tetrahedron_is_still_completed() {
        let reeve = [vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]];
        assert!(simplex_nonvertex_points(&reeve).is_empty());
        assert_eq!(parallelepiped_points(&reeve), vec![vec![1, 1, 1]]);
        let b = unimodular_complete(3, &reeve, &[]).unwrap();
        assert_eq!(b.det().abs(), 1);
        assert_eq!(b.rows()[2], vec![1, 1, 1]);
    }

    #[test]
    fn covectors() {
        let c = affine_support_covectors(&map(&["x1*x2 + x1^2*x2^2"], 2)).unwrap();
        assert_eq!(
            (c.q_list.clone(), c.d_matrix.clone(), c.needs_shift),
            (vec![vec![1, -1]], vec![vec![0]], false)
        );
        let c = affine_support_covectors(&map(&["x1^2*x2"], 2)).unwrap();
        assert_eq!(c.q_list.len(), 2);
        assert_eq!(c.dim, 0);
        assert!(matches!(
            affine_support_covectors(&map(&["x1 + x2 + 1"], 2)),
            Err(Error::FullDimensional)
        ));
    }

    #[test]
    fn reduction_examples() {
        let r = reduce_mapping(&map(&["x1*x2 + x1^2*x2^2"], 2)).unwrap();
        assert_eq!(r.basis.rows(), &[vec![1, -1], vec![1, 0]]);
        assert_eq!(r.reduced.components()[0], parse_polynomial("x1 + x1^2", 1).unwrap());
        assert_eq!(r.monomial_prefactors, vec![vec![0]]);
        assert_eq!(r.shift, 0);
        let r = reduce_mapping(&map(&["x1*x2 - 1"], 2)).unwrap();
        assert_eq!(r.reduced.components()[0], parse_polynomial("x1 - 1", 1).unwrap());
        let rep = verify_reduction(&r, 100, 1, Exec::Sequential);
        assert!(rep.passed());
        assert_eq!(rep.value_pass, 100);
    }

    #[test]
    fn shifted_reduction() {
        // values of (1,-1) are -1 on both supports
        let f = map(&["x2 + x1*x2^2", "3*x2 - x1^2*x2^3"], 2);
        let r = reduce_mapping(&f).unwrap();
        assert!(r.shift > 0);
        assert!(r.monomial_prefactors.iter().flatten().all(|&d| d >= 0));
        assert!(verify_reduction(&r, 50, 3, Exec::Sequential).passed());
    }

    #[test]
    fn monomial_reduction_to_constants() {
        let r = reduce_mapping(&map(&["5*x1^2*x2"], 2)).unwrap();
        assert_eq!(r.reduced_dim(), 0);
        assert_eq!(r.monomial_prefactors, vec![vec![2, 1]]);
        assert!(verify_reduction(&r, 20, 0, Exec::Sequential).passed());
    }

    #[test]
    fn corrupted_basis_is_detected() {
        let r = reduce_mapping(&map(&["x1*x2 + x1^2*x2^2"], 2)).unwrap();
        let bad = corrupt_basis(&r).unwrap();
        assert_eq!(bad.basis.det().abs(), 2);
        let rep = verify_reduction(&bad, 100, 1, Exec::Sequential);
        assert!(rep.value_fail > 0);
    }

    #[test]
    fn three_variables() {
        let f = map(&["x1*x2*x3 + x1^2*x2^2*x3^2 - 2", "x1*x2*x3 + 1"], 3);
        let r = reduce_mapping(&f).unwrap();
        assert_eq!(r.reduced_dim(), 1);
        assert!(verify_reduction(&r, 30, 9, Exec::Sequential).passed());
    }
}
