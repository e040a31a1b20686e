use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::nondegeneracy::{nondegenerate_at_infinity, CheckMode, CheckOptions, Verdict};
use crate::polynomial::{ExponentVector, Polynomial, PolynomialMapping};
use crate::Rational;

/// Smallest admissible coefficient magnitude, in millionths.
const MIN_COEFF_MICROS: i64 = 1000;
const MAX_REDRAWS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampler {
    /// `c = k / 10^6` with `k` uniform on `[lo, hi] * 10^6`, redrawn while
    /// `|c| < 1e-3`.
    Uniform { lo: f64, hi: f64 },
    /// The same coefficients in every trial, one list per support.
    Pinned { coefficients: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateInstance {
    pub trial: usize,
    pub coefficients: Vec<Vec<String>>,
    pub failing_subset: Option<Vec<usize>>,
    pub failing_witness_q: Option<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericityStats {
    pub supports: Vec<Vec<Vec<i64>>>,
    pub sampler: Sampler,
    pub trials: usize,
    pub seed: u64,
    pub mode: CheckMode,
    pub nondegenerate_count: usize,
    pub degenerate_count: usize,
    /// Checker budget exhausted; never counted as degenerate.
    pub undecided_count: usize,
    /// Coefficient draws rejected for `|c| < 1e-3`.
    pub redraws: usize,
    /// Observed fraction; evidence for density, not a proof of it.
    pub fraction_nondegenerate: Option<f64>,
    pub degenerate_instances: Vec<DegenerateInstance>,
    pub undecided_trials: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpennessReport {
    pub epsilon: f64,
    pub trials: usize,
    pub remained_nondegenerate: usize,
    pub degenerate: usize,
    pub undecided: usize,
    /// Jitters rejected because a coefficient changed sign or vanished.
    pub redraws: usize,
}

/// `Z_i`: the lattice points of each Newton polyhedron.
pub fn lattice_supports(f: &PolynomialMapping) -> Result<Vec<Vec<Vec<i64>>>> {
    f.components()
        .iter()
        .map(|p| Ok(p.newton_polyhedron()?.integer_points()))
        .collect()
}

/// The mapping with coefficient `coeffs[i][k]` on the point `supports[i][k]`.
pub fn instance_mapping(supports: &[Vec<Vec<i64>>], coeffs: &[Vec<Rational>]) -> Result<PolynomialMapping> {
    if supports.len() != coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: supports.len(),
            got: coeffs.len(),
        });
    }
    let n = supports.first().and_then(|s| s.first()).map_or(0, Vec::len);
    let comps = supports
        .iter()
        .zip(coeffs)
        .map(|(z, c)| {
            if z.len() != c.len() {
                return Err(Error::DimensionMismatch {
                    expected: z.len(),
                    got: c.len(),
                });
            }
            let terms = z
                .iter()
                .zip(c)
                .map(|(k, c)| Ok((ExponentVector::from_i64(k)?, c.clone())))
                .collect::<Result<Vec<_>>>()?;
            Polynomial::from_terms(n, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    PolynomialMapping::new(comps)
}

fn validate_supports(supports: &[Vec<Vec<i64>>]) -> Result<()> {
    if supports.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let n = supports[0].first().map(Vec::len).ok_or(Error::EmptySupport)?;
    for z in supports {
        if z.is_empty() {
            return Err(Error::EmptySupport);
        }
        for k in z {
            if k.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: k.len(),
                });
            }
            if k.iter().any(|v| *v < 0) {
                return Err(Error::NegativeSupport(k.clone()));
            }
        }
    }
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a rational number: {s:?}")))
}

/// Coefficients for one trial and the number of rejected draws.
fn draw(supports: &[Vec<Vec<i64>>], sampler: &Sampler, rng: &mut ChaCha8Rng) -> Result<(Vec<Vec<Rational>>, usize)> {
    match sampler {
        Sampler::Uniform { lo, hi } => {
            let (lo, hi) = ((lo * 1e6).ceil() as i64, (hi * 1e6).floor() as i64);
            let mut redraws = 0;
            let coeffs = supports
                .iter()
                .map(|z| {
                    z.iter()
                        .map(|_| loop {
                            let k = rng.gen_range(lo..=hi);
                            if k.abs() >= MIN_COEFF_MICROS {
                                break Rational::new(k.into(), 1_000_000.into());
                            }
                            redraws += 1;
                        })
                        .collect()
                })
                .collect();
            Ok((coeffs, redraws))
        }
        Sampler::Pinned { coefficients } => {
            let coeffs = coefficients
                .iter()
                .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok((coeffs, 0))
        }
    }
}

fn validate_sampler(supports: &[Vec<Vec<i64>>], sampler: &Sampler) -> Result<()> {
    match sampler {
        Sampler::Uniform { lo, hi } => {
            let (l, h) = ((lo * 1e6).ceil() as i64, (hi * 1e6).floor() as i64);
            if !(lo.is_finite() && hi.is_finite()) || l > h || (h < MIN_COEFF_MICROS && l > -MIN_COEFF_MICROS) {
                return Err(Error::InvalidArgument(format!(
                    "sampler range [{lo}, {hi}] has no coefficient with |c| >= 1e-3"
                )));
            }
        }
        Sampler::Pinned { coefficients } => {
            let coeffs = coefficients
                .iter()
                .map(|c| c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            instance_mapping(supports, &coeffs)?;
            let min = Rational::new(1.into(), 1000.into());
            if coeffs.iter().flatten().any(|c| c.abs() < min) {
                return Err(Error::InvalidArgument(
                    "pinned coefficient with |c| < 1e-3 changes the Newton polyhedron".into(),
                ));
            }
        }
    }
    Ok(())
}

fn trial_options(opts: &CheckOptions, i: usize) -> CheckOptions {
    CheckOptions {
        seed: opts.seed ^ i as u64,
        exec: Exec::Sequential,
        ..*opts
    }
}

/// Draws `trials` coefficient vectors on fixed supports (per-trial seed
/// `seed ^ i`) and runs the non-degeneracy checker on each.
pub fn genericity_trial(
    supports: &[Vec<Vec<i64>>],
    sampler: &Sampler,
    trials: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<GenericityStats> {
    validate_supports(supports)?;
    validate_sampler(supports, sampler)?;
    let outcomes = opts.exec.map(trials, |i| -> Result<_> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        let (coeffs, redraws) = draw(supports, sampler, &mut rng)?;
        let f = instance_mapping(supports, &coeffs)?;
        let report = nondegenerate_at_infinity(&f, &trial_options(opts, i))?;
        Ok((coeffs, redraws, report))
    });
    let mut stats = GenericityStats {
        supports: supports.to_vec(),
        sampler: sampler.clone(),
        trials,
        seed,
        mode: opts.mode,
        nondegenerate_count: 0,
        degenerate_count: 0,
        undecided_count: 0,
        redraws: 0,
        fraction_nondegenerate: None,
        degenerate_instances: Vec::new(),
        undecided_trials: Vec::new(),
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let (coeffs, redraws, report) = outcome?;
        stats.redraws += redraws;
        match report.verdict {
            Verdict::NonDegenerate => stats.nondegenerate_count += 1,
            Verdict::Undecided => {
                stats.undecided_count += 1;
                stats.undecided_trials.push(i);
            }
            Verdict::Degenerate => {
                stats.degenerate_count += 1;
                stats.degenerate_instances.push(DegenerateInstance {
                    trial: i,
                    coefficients: coeffs
                        .iter()
                        .map(|c| c.iter().map(ToString::to_string).collect())
                        .collect(),
                    failing_subset: report.failing_subset,
                    failing_witness_q: report.failing_witness_q,
                });
            }
        }
    }
    if trials > 0 {
        stats.fraction_nondegenerate = Some(stats.nondegenerate_count as f64 / trials as f64);
    }
    Ok(stats)
}

/// Jitters every existing coefficient by a uniform amount in
/// `[-epsilon, epsilon]` and counts how many perturbed mappings stay
/// non-degenerate. A jitter that flips or kills a coefficient is redrawn.
pub fn openness_probe(
    f: &PolynomialMapping,
    epsilon: f64,
    trials: usize,
    seed: u64,
    opts: &CheckOptions,
) -> Result<OpennessReport> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} must be positive")));
    }
    if nondegenerate_at_infinity(f, opts)?.verdict != Verdict::NonDegenerate {
        return Err(Error::NotNondegenerate);
    }
    let eps = Rational::from_float(epsilon).expect("finite epsilon");
    let outcomes = opts.exec.map(trials, |i| -> Result<(Verdict, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        let mut redraws = 0;
        let mut comps = Vec::with_capacity(f.len());
        for p in f.components() {
            let mut coeffs = Vec::with_capacity(p.len());
            for c in p.coefficients() {
                let mut tries = 0;
                let jittered = loop {
                    let k: i64 = rng.gen_range(-1_000_000..=1_000_000);
                    let v = &c + &eps * Rational::new(k.into(), 1_000_000.into());
                    if !v.is_zero() && v.is_positive() == c.is_positive() {
                        break v;
                    }
                    redraws += 1;
                    tries += 1;
                    if tries == MAX_REDRAWS {
                        return Err(Error::InvalidArgument(format!(
                            "epsilon = {epsilon} keeps flipping the sign of coefficient {c}"
                        )));
                    }
                };
                coeffs.push(jittered);
            }
            comps.push(p.with_coefficients(&coeffs)?);
        }
        let g = PolynomialMapping::new(comps)?;
        Ok((nondegenerate_at_infinity(&g, &trial_options(opts, i))?.verdict, redraws))
    });
    let mut report = OpennessReport {
        epsilon,
        trials,
        remained_nondegenerate: 0,
        degenerate: 0,
        undecided: 0,
        redraws: 0,
    };
    for outcome in outcomes {
        let (verdict, redraws) = outcome?;
        report.redraws += redraws;
        match verdict {
            Verdict::NonDegenerate => report.remained_nondegenerate += 1,
            Verdict::Degenerate => report.degenerate += 1,
            Verdict::Undecided => report.undecided += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::parse_polynomial;

    fn seq() -> CheckOptions {
        CheckOptions {
            exec: Exec::Sequential,
            ..CheckOptions::default()
        }
    }

    fn ex32() -> PolynomialMapping {
        PolynomialMapping::new(vec![
            parse_polynomial("x1^2 + x2^4", 2).unwrap(),
            parse_polynomial("x1^2 + x2^2", 2).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn pinned_square_is_degenerate_and_replays() {
        let supports = vec![vec![vec![2, 0], vec![1, 1], vec![0, 2]]];
        let sampler = Sampler::Pinned {
            coefficients: vec![vec!["1".into(), "-2".into(), "1".into()]],
        };
        let stats = genericity_trial(&supports, &sampler, 1, 0, &seq()).unwrap();
        assert_eq!((stats.degenerate_count, stats.nondegenerate_count), (1, 0));
        let inst = &stats.degenerate_instances[0];
        let coeffs: Vec<Vec<Rational>> = inst
            .coefficients
            .iter()
            .map(|c| c.iter().map(|s| s.parse().unwrap()).collect())
            .collect();
        let f = instance_mapping(&supports, &coeffs).unwrap();
        assert_eq!(
            nondegenerate_at_infinity(&f, &seq()).unwrap().verdict,
            Verdict::Degenerate
        );
    }

    #[test]
    fn zero_trials() {
        let supports = lattice_supports(&ex32()).unwrap();
        let stats = genericity_trial(&supports, &Sampler::Uniform { lo: -1.0, hi: 1.0 }, 0, 1, &seq()).unwrap();
        assert_eq!(stats.trials, 0);
        assert_eq!(
            stats.nondegenerate_count + stats.degenerate_count + stats.undecided_count,
            0
        );
        assert_eq!(stats.fraction_nondegenerate, None);
    }

    #[test]
    fn example_32_supports_are_generic() {
        let supports = lattice_supports(&ex32()).unwrap();
        assert_eq!(supports[0], vec![vec![0, 4], vec![1, 2], vec![2, 0]]);
        let sampler = Sampler::Uniform { lo: -1.0, hi: 1.0 };
        let stats = genericity_trial(&supports, &sampler, 60, 7, &seq()).unwrap();
        assert_eq!(
            stats.nondegenerate_count + stats.degenerate_count + stats.undecided_count,
            60
        );
        assert_eq!(stats.undecided_count, 0);
        assert!(stats.nondegenerate_count >= 59);
        let par = genericity_trial(
            &supports,
            &sampler,
            60,
            7,
            &CheckOptions {
                exec: Exec::Parallel,
                ..seq()
            },
        )
        .unwrap();
        assert_eq!(stats, par);
    }

    #[test]
    fn bad_inputs() {
        let sampler = Sampler::Uniform { lo: -1.0, hi: 1.0 };
        assert!(genericity_trial(&[], &sampler, 1, 0, &seq()).is_err());
        assert!(genericity_trial(&[vec![]], &sampler, 1, 0, &seq()).is_err());
        let tiny = Sampler::Uniform { lo: -1e-4, hi: 1e-4 };
        assert!(genericity_trial(&[vec![vec![1, 0]]], &tiny, 1, 0, &seq()).is_err());
        let small_pin = Sampler::Pinned {
            coefficients: vec![vec!["1/10000".into()]],
        };
        assert!(genericity_trial(&[vec![vec![1, 0]]], &small_pin, 1, 0, &seq()).is_err());
    }

    #[test]
    fn openness_small_and_large_epsilon() {
        let r = openness_probe(&ex32(), 1e-6, 20, 3, &seq()).unwrap();
        assert_eq!((r.remained_nondegenerate, r.redraws), (20, 0));
        let r = openness_probe(&ex32(), 1.5, 20, 3, &seq()).unwrap();
        assert!(r.redraws > 0);
        assert_eq!(r.remained_nondegenerate + r.degenerate + r.undecided, 20);
    }

    #[test]
    fn openness_rejects_degenerate_input() {
        let f = PolynomialMapping::new(vec![parse_polynomial("(x1 - x2)^2", 2).unwrap()]).unwrap();
        assert!(matches!(
            openness_probe(&f, 1e-6, 5, 0, &seq()),
            Err(Error::NotNondegenerate)
        ));
    }
}
