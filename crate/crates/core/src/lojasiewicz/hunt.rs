//! Searches monomial curves `x_j(s) = a_j s^{q_j}`, `s -> 0+`, for
//! sequences along which `g -> 0` while `|h|` stays away from zero (first
//! type) or `g` stays bounded while `|h| -> inf` (second type).
//!
//! Along such a curve `g(x(s)) = sum_e C_e(a) s^e` with
//! `C_e(a) = sum_{<q,kappa> = e} c_kappa a^kappa`, so both kinds reduce to
//! making some of the `C_e` vanish exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::lattice::primitive;
use crate::polyhedra::enumerate_negative_face_tuples;
use crate::polynomial::{rational_to_f64, Polynomial};
use crate::solve::{levenberg_marquardt, simplest_rational, LmOptions};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    FirstType,
    SecondType,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuntConfig {
    /// Candidate exponents range over `[-bound, bound]^n`.
    pub exponent_bound: i64,
    pub max_candidates: usize,
    /// Extra random starts per candidate beyond one per sign orthant.
    pub extra_starts: usize,
    /// First type: `|h| >= delta` along the curve.
    pub delta: f64,
    /// Second type: `|g| <= bound`; `None` means `10 (1 + |g(0)|)`.
    pub bound: Option<f64>,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for HuntConfig {
    fn default() -> Self {
        Self {
            exponent_bound: 6,
            max_candidates: 5000,
            extra_starts: 4,
            delta: 1e-3,
            bound: None,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub s: f64,
    pub x: Vec<f64>,
    pub g: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceEvidence {
    pub kind: SequenceKind,
    pub q: Vec<i64>,
    /// Exact coefficients `a_j`.
    pub a: Vec<String>,
    pub a_float: Vec<f64>,
    pub delta: Option<f64>,
    pub bound: Option<f64>,
    /// `lim g(x(s))` as `s -> 0+`.
    pub g_limit: String,
    /// Smallest `e` with `D_e(a) != 0` in `h(x(s)) = sum_e D_e s^e`.
    pub h_order: Option<i64>,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HuntReport {
    pub kind: SequenceKind,
    pub candidates_tried: usize,
    /// Every candidate in the exponent box was examined.
    pub exhaustive: bool,
    pub evidence: Option<SequenceEvidence>,
}

type Groups = BTreeMap<i64, Vec<(Vec<u32>, Rational)>>;

fn group_terms(p: &Polynomial, q: &[i64]) -> Groups {
    let mut out: Groups = BTreeMap::new();
    for (e, c) in p.terms() {
        out.entry(e.dot(q)).or_default().push((e.entries().to_vec(), c.clone()));
    }
    out
}

fn group_value(group: &[(Vec<u32>, Rational)], a: &[Rational]) -> Rational {
    group
        .iter()
        .map(|(k, c)| {
            k.iter()
                .zip(a)
                .fold(c.clone(), |acc, (&kj, aj)| acc * aj.pow(kj as i32))
        })
        .fold(Rational::zero(), |s, v| s + v)
}

/// A group that cannot vanish anywhere on the torus: a single term, or
/// even exponents throughout with coefficients of one sign.
fn never_vanishes(group: &[(Vec<u32>, Rational)]) -> bool {
    group.len() == 1
        || (group.iter().all(|(k, _)| k.iter().all(|v| v % 2 == 0))
            && (group.iter().all(|(_, c)| c.is_positive()) || group.iter().all(|(_, c)| c.is_negative())))
}

struct Candidate {
    q: Vec<i64>,
    g: Groups,
    h: Groups,
}

impl Candidate {
    fn required(&self, kind: SequenceKind) -> Vec<&[(Vec<u32>, Rational)]> {
        self.g
            .iter()
            .filter(|(e, _)| match kind {
                SequenceKind::FirstType => **e <= 0,
                SequenceKind::SecondType => **e < 0,
            })
            .map(|(_, v)| v.as_slice())
            .collect()
    }

    fn h_order(&self, a: &[Rational]) -> Option<(i64, Rational)> {
        self.h
            .iter()
            .map(|(e, grp)| (*e, group_value(grp, a)))
            .find(|(_, v)| !v.is_zero())
    }

    /// Exact test of the defining conditions at `a`.
    fn accepts(&self, kind: SequenceKind, a: &[Rational], delta: f64, bound: f64) -> bool {
        if a.iter().any(Zero::is_zero) || self.required(kind).iter().any(|g| !group_value(g, a).is_zero()) {
            return false;
        }
        let h_lead = self.h_order(a);
        match kind {
            SequenceKind::FirstType => match h_lead {
                Some((e, _)) if e < 0 => true,
                Some((0, v)) => rational_to_f64(&v).abs() >= delta,
                _ => false,
            },
            SequenceKind::SecondType => {
                let c0 = self.g.get(&0).map_or(Rational::zero(), |g| group_value(g, a));
                rational_to_f64(&c0).abs() <= bound && h_lead.is_some_and(|(e, _)| e < 0)
            }
        }
    }
}

/// Negative-face-tuple covectors of `[G]`, `[H]`, `[G, H]` first, then the
/// primitive vectors of the exponent box with a negative entry, by
/// `l1` norm and then lexicographically.
fn candidate_exponents(g: &Polynomial, h: &Polynomial, bound: i64) -> Vec<Vec<i64>> {
    let n = g.num_vars();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |q: Vec<i64>, out: &mut Vec<Vec<i64>>| {
        if q.iter().any(|v| *v < 0) && seen.insert(q.clone()) {
            out.push(q);
        }
    };
    if let (Ok(pg), Ok(ph)) = (g.newton_polyhedron(), h.newton_polyhedron()) {
        for polys in [vec![pg.clone()], vec![ph.clone()], vec![pg, ph]] {
            if let Ok(tuples) = enumerate_negative_face_tuples(&polys) {
                for t in tuples {
                    push(t.witness_q.clone(), &mut out);
                }
            }
        }
    }
    let width = (2 * bound + 1) as usize;
    let total = width.checked_pow(n as u32).unwrap_or(usize::MAX);
    let mut boxed: Vec<Vec<i64>> = (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let v = (idx % width) as i64 - bound;
                    idx /= width;
                    v
                })
                .collect::<Vec<i64>>()
        })
        .filter(|q| q.iter().any(|v| *v < 0) && primitive(q).is_ok_and(|p| p == *q))
        .collect();
    boxed.sort_by_key(|q| (q.iter().map(|v| v.abs()).sum::<i64>(), q.clone()));
    for q in boxed {
        push(q, &mut out);
    }
    out
}

fn rationalize(a: &[f64]) -> Vec<Vec<Rational>> {
    [1e-6, 1e-9, 1e-12]
        .iter()
        .filter_map(|tol| {
            a.iter()
                .map(|&v| simplest_rational(v, tol * v.abs().max(1.0)))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

fn solve_candidate(
    cand: &Candidate,
    kind: SequenceKind,
    cfg: &HuntConfig,
    bound: f64,
    index: usize,
) -> Option<Vec<Rational>> {
    let n = cand.q.len();
    let required = cand.required(kind);
    if required.iter().any(|g| never_vanishes(g)) {
        return None;
    }
    let orthants = 1usize << n.min(20);
    let attempts = orthants + cfg.extra_starts;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (index as u64).wrapping_mul(0x94D0_49BB_1331_11EB));
    for attempt in 0..attempts {
        let sigma: Vec<f64> = (0..n)
            .map(|j| if (attempt % orthants) >> j & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let s0: Vec<f64> = if attempt < orthants {
            vec![0.0; n]
        } else {
            (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect()
        };
        let exact_start: Vec<Rational> = sigma
            .iter()
            .map(|v| Rational::from_integer((*v as i64).into()))
            .collect();
        if attempt < orthants && cand.accepts(kind, &exact_start, cfg.delta, bound) {
            return Some(exact_start);
        }
        if required.is_empty() {
            continue;
        }
        let to_a = |s: &[f64]| -> Vec<f64> { s.iter().zip(&sigma).map(|(v, g)| g * v.exp()).collect() };
        let residual = |s: &[f64]| -> Vec<f64> {
            let a = to_a(s);
            required
                .iter()
                .map(|grp| {
                    let (mut val, mut mag) = (0.0, 0.0);
                    for (k, c) in grp.iter() {
                        let t =
                            rational_to_f64(c) * k.iter().zip(&a).map(|(&kj, aj)| aj.powi(kj as i32)).product::<f64>();
                        val += t;
                        mag += t.abs();
                    }
                    if mag > 0.0 {
                        val / mag
                    } else {
                        0.0
                    }
                })
                .collect()
        };
        let res = levenberg_marquardt(residual, &s0, LmOptions::default());
        if res.norm > 1e-8 {
            continue;
        }
        for a in rationalize(&to_a(&res.x)) {
            if cand.accepts(kind, &a, cfg.delta, bound) {
                return Some(a);
            }
        }
    }
    None
}

/// Exact evaluation along `x_j(s) = a_j s^{q_j} (1 + b_j s)` at
/// `s = 1 / round(10^{k/2})`, `k = 2..=16`, keeping finite samples only.
pub fn sample_curve(g: &Polynomial, h: &Polynomial, q: &[i64], a: &[Rational], b: &[Rational]) -> Vec<CurveSample> {
    (2..=16)
        .filter_map(|k| {
            let m = 10f64.powf(k as f64 / 2.0).round() as i64;
            let s = Rational::new(1.into(), m.into());
            let x: Vec<Rational> = q
                .iter()
                .zip(a)
                .zip(b)
                .map(|((&qj, aj), bj)| aj * s.pow(qj as i32) * (Rational::from_integer(1.into()) + bj * &s))
                .collect();
            let gv = rational_to_f64(&g.evaluate_exact(&x).ok()?);
            let hv = rational_to_f64(&h.evaluate_exact(&x).ok()?);
            let xf: Vec<f64> = x.iter().map(rational_to_f64).collect();
            (gv.is_finite() && hv.is_finite() && xf.iter().all(|v| v.is_finite())).then(|| CurveSample {
                s: rational_to_f64(&s),
                x: xf,
                g: gv,
                h: hv,
            })
        })
        .collect()
}

/// Numerical re-check over the last five samples.
pub fn validate_evidence(ev: &SequenceEvidence) -> bool {
    if ev.samples.len() < 5 {
        return false;
    }
    let tail = &ev.samples[ev.samples.len() - 5..];
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !tail.windows(2).all(|w| norm(&w[1].x) > norm(&w[0].x)) {
        return false;
    }
    match ev.kind {
        SequenceKind::FirstType => {
            let delta = ev.delta.unwrap_or(0.0);
            tail.iter().all(|p| p.g.abs() < 1e-6 && p.h.abs() >= delta)
        }
        SequenceKind::SecondType => {
            let bound = ev.bound.unwrap_or(f64::INFINITY);
            tail.windows(2).all(|w| w[1].h.abs() > w[0].h.abs()) && tail.iter().all(|p| p.g.abs() <= bound)
        }
    }
}

const BATCH: usize = 16;

/// Tries curve candidates in order and returns the first one whose
/// evidence re-validates, or reports exhaustion.
pub fn hunt_sequences(g: &Polynomial, h: &Polynomial, kind: SequenceKind, cfg: &HuntConfig) -> HuntReport {
    let n = g.num_vars();
    let g0 = g
        .evaluate_exact(&vec![Rational::zero(); n])
        .map(|v| rational_to_f64(&v).abs())
        .unwrap_or(0.0);
    let bound = cfg.bound.unwrap_or(10.0 * (1.0 + g0));
    let all = candidate_exponents(g, h, cfg.exponent_bound);
    let exhaustive = all.len() <= cfg.max_candidates;
    let qs: Vec<Vec<i64>> = all.into_iter().take(cfg.max_candidates).collect();
    let mut tried = 0;
    for (chunk_index, chunk) in qs.chunks(BATCH).enumerate() {
        let found = cfg.exec.map(chunk.len(), |i| {
            let index = chunk_index * BATCH + i;
            let cand = Candidate {
                q: chunk[i].clone(),
                g: group_terms(g, &chunk[i]),
                h: group_terms(h, &chunk[i]),
            };
            let a = solve_candidate(&cand, kind, cfg, bound, index)?;
            let zeros = vec![Rational::zero(); n];
            let g_limit = match kind {
                SequenceKind::FirstType => Rational::zero(),
                SequenceKind::SecondType => cand.g.get(&0).map_or(Rational::zero(), |grp| group_value(grp, &a)),
            };
            let ev = SequenceEvidence {
                kind,
                q: cand.q.clone(),
                a: a.iter().map(ToString::to_string).collect(),
                a_float: a.iter().map(rational_to_f64).collect(),
                delta: (kind == SequenceKind::FirstType).then_some(cfg.delta),
                bound: (kind == SequenceKind::SecondType).then_some(bound),
                g_limit: g_limit.to_string(),
                h_order: cand.h_order(&a).map(|(e, _)| e),
                samples: sample_curve(g, h, &cand.q, &a, &zeros),
            };
            validate_evidence(&ev).then_some(ev)
        });
        for (i, ev) in found.into_iter().enumerate() {
            if let Some(ev) = ev {
                return HuntReport {
                    kind,
                    candidates_tried: tried + i + 1,
                    exhaustive,
                    evidence: Some(ev),
                };
            }
        }
        tried += chunk.len();
    }
    HuntReport {
        kind,
        candidates_tried: tried,
        exhaustive,
        evidence: None,
    }
}

/// Curve points of an evidence record, for inequality checks.
pub fn evidence_points(ev: &SequenceEvidence) -> Vec<Vec<f64>> {
    ev.samples.iter().map(|p| p.x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use crate::polynomial::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, 2).unwrap()
    }

    fn cfg() -> HuntConfig {
        HuntConfig {
            exec: Exec::Sequential,
            ..HuntConfig::default()
        }
    }

    #[test]
    fn example_31_second_type() {
        let g = p("(x1^2 - 1)^2 + (x1*x2 - 1)^2");
        let h = p("(x1^2 - 1)^2 + (x2^2 - 1)^2");
        let r = hunt_sequences(&g, &h, SequenceKind::SecondType, &cfg());
        let ev = r.evidence.expect("second-type evidence");
        assert_eq!(ev.q, vec![1, -1]);
        assert_eq!(ev.a, vec!["1", "1"]);
        assert_eq!(ev.g_limit, "1");
        assert_eq!(ev.h_order, Some(-4));
        assert!(validate_evidence(&ev));
    }

    #[test]
    fn hyperbola_first_type() {
        let r = hunt_sequences(&p("(x1*x2 - 1)^2"), &p("x2^2"), SequenceKind::FirstType, &cfg());
        let ev = r.evidence.expect("first-type evidence");
        assert_eq!(ev.q, vec![1, -1]);
        assert_eq!(ev.a, vec!["1", "1"]);
        assert!(validate_evidence(&ev));
    }

    #[test]
    fn perturbed_hyperbola_curve() {
        let (g, h) = (p("(x1*x2 - 1)^2"), p("x2^2"));
        let samples = sample_curve(&g, &h, &[1, -1], &[q(1), q(1)], &[q(1), q(0)]);
        assert_eq!(samples.len(), 15);
        for s in &samples {
            assert!((s.g - s.s * s.s).abs() <= 1e-12 * s.s * s.s);
            assert!(s.h >= 1.0);
        }
    }

    #[test]
    fn example_32_exhausts_both_kinds() {
        let (g, h) = (p("x1^2 + x2^4"), p("x1^2 + x2^2"));
        for kind in [SequenceKind::FirstType, SequenceKind::SecondType] {
            let r = hunt_sequences(&g, &h, kind, &cfg());
            assert!(r.evidence.is_none() && r.exhaustive && r.candidates_tried > 50);
        }
    }

    #[test]
    fn validation_rejects_short_or_flat_tails() {
        let ev = SequenceEvidence {
            kind: SequenceKind::SecondType,
            q: vec![-1],
            a: vec!["1".into()],
            a_float: vec![1.0],
            delta: None,
            bound: Some(10.0),
            g_limit: "0".into(),
            h_order: None,
            samples: (1..=6)
                .map(|k| CurveSample {
                    s: 1.0 / k as f64,
                    x: vec![k as f64],
                    g: 0.0,
                    h: 1.0,
                })
                .collect(),
        };
        assert!(!validate_evidence(&ev));
    }
}
