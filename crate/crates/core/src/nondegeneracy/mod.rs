//! Khovanskii non-degeneracy at infinity and its sub-tuple strengthening.
//!
//! Every face tuple with all `d(q, Gamma_i) < 0` yields a face system
//! `(f_{i, Delta_i})`. The mapping is degenerate iff some face system has a
//! point of `(R*)^n` where all face polynomials vanish and the weighted
//! Jacobian `(x_j df_i/dx_j)` has rank below the number of components.
//!
//! Systems whose faces are points or parallel segments (all systems in two
//! variables) are decided exactly. The rest go to a certified multi-start
//! witness search, which can prove degeneracy but only bounds the search
//! effort otherwise.

mod exact;
mod search;

use serde::{Deserialize, Serialize};

pub use search::{
    accepts, is_exact_witness, relative_residuals, rescaled_is_witness, residuals, witness_search, F_TOL, MINOR_TOL,
};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, QMatrix};
use crate::polyhedra::{enumerate_face_tuples_with, Face, FaceTuple, TupleMode};
use crate::polynomial::{FloatPoly, Polynomial, PolynomialMapping};
use crate::Rational;

/// Face polynomials `f_{i, Delta_i}` for `i` in a subset `I`, all taken
/// along one covector `q` with `d(q, Gamma(f_i)) < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSystem {
    /// 0-based component indices.
    pub subset: Vec<usize>,
    pub faces: Vec<Face>,
    pub witness_q: Vec<i64>,
    pub degrees: Vec<i64>,
    pub face_polys: Vec<Polynomial>,
}

impl FaceSystem {
    /// `tuple` must come from the polyhedra of the components in `subset`.
    pub fn from_tuple(f: &PolynomialMapping, subset: &[usize], tuple: &FaceTuple) -> Result<Self> {
        let face_polys = subset
            .iter()
            .zip(&tuple.degrees)
            .map(|(&i, &d)| {
                let c = f
                    .components()
                    .get(i)
                    .ok_or(Error::IndexOutOfRange { index: i, len: f.len() })?;
                Ok(c.filter_by_covector(&tuple.witness_q, d))
            })
            .collect::<Result<Vec<_>>>()?;
        if face_polys.iter().any(Polynomial::is_zero) {
            return Err(Error::FaceNotInPolyhedron);
        }
        Ok(Self {
            subset: subset.to_vec(),
            faces: tuple.faces.clone(),
            witness_q: tuple.witness_q.clone(),
            degrees: tuple.degrees.clone(),
            face_polys,
        })
    }

    /// The system cut out by an integer covector; every `d_i` must be negative.
    pub fn from_covector(f: &PolynomialMapping, subset: &[usize], q: &[i64]) -> Result<Self> {
        if q.len() != f.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: f.num_vars(),
                got: q.len(),
            });
        }
        let mut faces = Vec::new();
        let mut degrees = Vec::new();
        for &i in subset {
            let c = f
                .components()
                .get(i)
                .ok_or(Error::IndexOutOfRange { index: i, len: f.len() })?;
            let (d, face) = c.newton_polyhedron()?.d_and_face(q);
            if d >= 0 {
                return Err(Error::InvalidArgument(format!(
                    "d(q, Gamma(f_{})) = {d} is not negative",
                    i + 1
                )));
            }
            degrees.push(d);
            faces.push(face);
        }
        Self::from_tuple(
            f,
            subset,
            &FaceTuple {
                faces,
                witness_q: q.to_vec(),
                degrees,
            },
        )
    }

    pub fn num_vars(&self) -> usize {
        self.witness_q.len()
    }

    pub fn float_polys(&self) -> Vec<FloatPoly> {
        self.face_polys.iter().map(Polynomial::to_float).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixForm {
    /// `k x n` weighted Jacobian, meaningful on the common zero set.
    Plain,
    /// `k x (n + k)` with the face values on a diagonal block.
    Augmented,
}

/// Weighted Jacobian of the face system at a rational point of the torus.
pub fn face_rank_matrix(sys: &FaceSystem, x: &[Rational], form: MatrixForm) -> Result<QMatrix> {
    let n = sys.num_vars();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    if let Some(j) = x.iter().position(num_traits::Zero::is_zero) {
        return Err(Error::ZeroCoordinate(j));
    }
    let k = sys.face_polys.len();
    let mut m = Vec::with_capacity(k);
    for (i, f) in sys.face_polys.iter().enumerate() {
        let mut row: Vec<Rational> = (0..n)
            .map(|j| Ok(&x[j] * f.partial(j).evaluate_exact(x)?))
            .collect::<Result<_>>()?;
        if form == MatrixForm::Augmented {
            let v = f.evaluate_exact(x)?;
            row.extend((0..k).map(|l| if l == i { v.clone() } else { linalg::q(0) }));
        }
        m.push(row);
    }
    Ok(m)
}

/// Membership of a point in the zero set `V` and its regular part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    OffZeroSet,
    Regular,
    Singular,
}

pub fn classify_point(sys: &FaceSystem, x: &[Rational]) -> Result<PointClass> {
    let m = face_rank_matrix(sys, x, MatrixForm::Plain)?;
    for f in &sys.face_polys {
        if !num_traits::Zero::is_zero(&f.evaluate_exact(x)?) {
            return Ok(PointClass::OffZeroSet);
        }
    }
    Ok(if linalg::rank(&m) == sys.face_polys.len() {
        PointClass::Regular
    } else {
        PointClass::Singular
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NonDegenerate,
    Degenerate,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMode {
    Exact2d,
    WitnessSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub point: Vec<f64>,
    /// Rational coordinates when the witness was confirmed exactly.
    pub exact_point: Option<Vec<String>>,
    pub f_residual: f64,
    pub minor_residual: f64,
}

impl Witness {
    pub fn max_residual(&self) -> f64 {
        self.f_residual.max(self.minor_residual)
    }

    pub fn exact(&self) -> Option<Vec<Rational>> {
        self.exact_point
            .as_ref()
            .map(|v| v.iter().map(|s| s.parse().expect("stored rational")).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Evidence {
    EmptyZeroSet { reason: String },
    FullRankEverywhere,
    Witness(Witness),
    SearchExhausted { trials: usize },
}

impl Evidence {
    pub fn verdict(&self) -> Verdict {
        match self {
            Evidence::EmptyZeroSet { .. } | Evidence::FullRankEverywhere => Verdict::NonDegenerate,
            Evidence::Witness(_) => Verdict::Degenerate,
            Evidence::SearchExhausted { .. } => Verdict::Undecided,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    /// 1-based component indices.
    pub subset: Vec<usize>,
    pub witness_q: Vec<i64>,
    /// Vertex lists of the faces.
    pub faces: Vec<Vec<Vec<i64>>>,
    pub degrees: Vec<i64>,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub verdict: Verdict,
    pub mode: DecisionMode,
    /// False when face tuples were sampled rather than enumerated.
    pub complete_enumeration: bool,
    pub systems: Vec<SystemReport>,
    pub failing_subset: Option<Vec<usize>>,
    pub failing_witness_q: Option<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Exact decisions where available, witness search elsewhere.
    Exact,
    /// Witness search for every system.
    Search,
    /// Sampled face tuples; needed for `n > 4`.
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub mode: CheckMode,
    /// Witness-search starts per face system.
    pub attempts: usize,
    pub seed: u64,
    pub exec: Exec,
    pub covector_samples: usize,
    pub covector_bound: i64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            mode: CheckMode::Exact,
            attempts: 200,
            seed: 0,
            exec: Exec::default(),
            covector_samples: 4000,
            covector_bound: 8,
        }
    }
}

impl CheckOptions {
    pub fn with_mode(mode: CheckMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

/// Exact decision for a two-variable face system.
pub fn exact_check_2d(sys: &FaceSystem) -> Result<Evidence> {
    if sys.num_vars() != 2 {
        return Err(Error::NotTwoDimensional(sys.num_vars()));
    }
    exact::decide_collinear(sys).ok_or_else(|| Error::Internal("two-variable faces are always collinear".into()))
}

fn system_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0xD6E8_FEB8_6659_FD93)
}

/// Decides a single face system under the given options.
pub fn decide_system(sys: &FaceSystem, opts: &CheckOptions, index: usize) -> Evidence {
    if opts.mode != CheckMode::Search {
        if let Some(e) = exact::decide_collinear(sys) {
            return e;
        }
    }
    match witness_search(sys, opts.attempts, system_seed(opts.seed, index), opts.exec) {
        (Some(w), _) => Evidence::Witness(w),
        (None, trials) => Evidence::SearchExhausted { trials },
    }
}

fn tuple_mode(n: usize, opts: &CheckOptions) -> Result<TupleMode> {
    let sampled = TupleMode::Sampled {
        samples: opts.covector_samples,
        bound: opts.covector_bound,
        seed: opts.seed,
    };
    match opts.mode {
        CheckMode::Exact => Ok(TupleMode::Exact),
        CheckMode::Search if n <= crate::polyhedra::MAX_EXACT_DIM => Ok(TupleMode::Exact),
        CheckMode::Search | CheckMode::Sampled => Ok(sampled),
    }
}

fn systems_for(f: &PolynomialMapping, subset: &[usize], opts: &CheckOptions) -> Result<(Vec<FaceSystem>, bool)> {
    let polys = subset
        .iter()
        .map(|&i| f.components()[i].newton_polyhedron())
        .collect::<Result<Vec<_>>>()?;
    let mode = tuple_mode(f.num_vars(), opts)?;
    let en = enumerate_face_tuples_with(&polys, &mode, opts.exec)?;
    let systems = en
        .tuples
        .iter()
        .map(|t| FaceSystem::from_tuple(f, subset, t))
        .collect::<Result<Vec<_>>>()?;
    Ok((systems, en.complete))
}

fn assemble(
    f: &PolynomialMapping,
    systems: Vec<FaceSystem>,
    complete: bool,
    opts: &CheckOptions,
) -> NondegeneracyReport {
    let indexed: Vec<(usize, FaceSystem)> = systems.into_iter().enumerate().collect();
    let evidence = opts.exec.map_slice(&indexed, |(i, s)| decide_system(s, opts, *i));
    let mut verdict = Verdict::NonDegenerate;
    let mut failing_subset = None;
    let mut failing_witness_q = None;
    let mut reports = Vec::with_capacity(indexed.len());
    for ((_, s), e) in indexed.into_iter().zip(evidence) {
        match e.verdict() {
            Verdict::Degenerate => {
                if verdict != Verdict::Degenerate {
                    failing_subset = Some(s.subset.iter().map(|i| i + 1).collect());
                    failing_witness_q = Some(s.witness_q.clone());
                }
                verdict = Verdict::Degenerate;
            }
            Verdict::Undecided if verdict == Verdict::NonDegenerate => verdict = Verdict::Undecided,
            _ => {}
        }
        reports.push(SystemReport {
            subset: s.subset.iter().map(|i| i + 1).collect(),
            witness_q: s.witness_q,
            faces: s.faces.iter().map(|f| f.vertices().to_vec()).collect(),
            degrees: s.degrees,
            evidence: e,
        });
    }
    let mode = if f.num_vars() == 2 && opts.mode != CheckMode::Search {
        DecisionMode::Exact2d
    } else {
        DecisionMode::WitnessSearch
    };
    NondegeneracyReport {
        verdict,
        mode,
        complete_enumeration: complete,
        systems: reports,
        failing_subset,
        failing_witness_q,
    }
}

/// Khovanskii non-degeneracy at infinity of the whole tuple.
pub fn khovanskii_check(f: &PolynomialMapping, opts: &CheckOptions) -> Result<NondegeneracyReport> {
    f.check_p_le_n()?;
    let all: Vec<usize> = (0..f.len()).collect();
    let (systems, complete) = systems_for(f, &all, opts)?;
    Ok(assemble(f, systems, complete, opts))
}

/// Nonempty subsets of `0..p`, by size and then lexicographically.
pub fn subsets(p: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << p))
        .map(|mask| (0..p).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Khovanskii non-degeneracy of every sub-tuple.
pub fn nondegenerate_at_infinity(f: &PolynomialMapping, opts: &CheckOptions) -> Result<NondegeneracyReport> {
    f.check_p_le_n()?;
    let mut systems = Vec::new();
    let mut complete = true;
    for subset in subsets(f.len()) {
        let (s, c) = systems_for(f, &subset, opts)?;
        systems.extend(s);
        complete &= c;
    }
    Ok(assemble(f, systems, complete, opts))
}

/// The augmented-matrix form: for covectors negative on every component,
/// the matrix `[xDF | diag(f_{i, Delta_i})]` has full rank on the whole
/// torus. A rank drop at `x` means some nonempty `J` has its face
/// polynomials vanishing at `x` with dependent weighted gradients, so the
/// check runs every sub-system `J` of every full face tuple.
pub fn augmented_check(f: &PolynomialMapping, opts: &CheckOptions) -> Result<NondegeneracyReport> {
    f.check_p_le_n()?;
    let all: Vec<usize> = (0..f.len()).collect();
    let (full, complete) = systems_for(f, &all, opts)?;
    let mut systems = Vec::new();
    for s in &full {
        for j in subsets(f.len()) {
            let tuple = FaceTuple {
                faces: j.iter().map(|&i| s.faces[i].clone()).collect(),
                witness_q: s.witness_q.clone(),
                degrees: j.iter().map(|&i| s.degrees[i]).collect(),
            };
            systems.push(FaceSystem::from_tuple(f, &j, &tuple)?);
        }
    }
    Ok(assemble(f, systems, complete, opts))
}
