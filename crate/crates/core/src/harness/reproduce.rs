use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::Result;
use crate::linalg::q;
use crate::lojasiewicz::{
    fit_exponents, hunt_sequences, multiplier, sample_curve, verify_inequality, ExponentFit, FitConfig, HuntConfig,
    HuntReport, MuConfig, MultiplierConfig, MultiplierReport, SamplerConfig, SequenceKind, VerifyReport,
};
use crate::nondegeneracy::{nondegenerate_at_infinity, CheckMode, NondegeneracyReport, Verdict};
use crate::polynomial::{parse_polynomial, rational_to_f64, Polynomial, PolynomialMapping};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
}

fn claim(name: &str, holds: bool) -> Claim {
    Claim {
        name: name.into(),
        holds,
    }
}

/// `g` and `h` along `x = (s, 1/s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveCheck {
    pub s: f64,
    pub x: Vec<f64>,
    pub g: f64,
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub cs: Vec<f64>,
    pub curve_points: usize,
    pub combinations: usize,
    pub violated: usize,
    pub all_violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example31Report {
    pub g: Polynomial,
    pub h: Polynomial,
    pub g_convenient: bool,
    pub h_convenient: bool,
    pub nondegeneracy: NondegeneracyReport,
    pub second_type: HuntReport,
    pub curve_check: CurveCheck,
    pub inequality_grid: InequalityGrid,
    pub claims: Vec<Claim>,
    pub all_claims_hold: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example32Report {
    pub g: Polynomial,
    pub h: Polynomial,
    pub g_convenient: bool,
    pub nondegeneracy: NondegeneracyReport,
    pub fit: ExponentFit,
    /// The inequality with `(alpha, beta, c) = (1/2, 1, 1)`.
    pub verification: VerifyReport,
    /// The inequality with the fitted constants, on an independent sample.
    pub fitted_verification: VerifyReport,
    pub first_type: HuntReport,
    pub second_type: HuntReport,
    pub multiplier: MultiplierReport,
    pub claims: Vec<Claim>,
    pub all_claims_hold: bool,
}

pub fn example31_mapping() -> PolynomialMapping {
    PolynomialMapping::new(vec![
        parse_polynomial("(x1^2 - 1)^2 + (x1*x2 - 1)^2", 2).expect("valid"),
        parse_polynomial("(x1^2 - 1)^2 + (x2^2 - 1)^2", 2).expect("valid"),
    ])
    .expect("valid")
}

pub fn example32_mapping() -> PolynomialMapping {
    PolynomialMapping::new(vec![
        parse_polynomial("x1^2 + x2^4", 2).expect("valid"),
        parse_polynomial("x1^2 + x2^2", 2).expect("valid"),
    ])
    .expect("valid")
}

fn exact_check(f: &PolynomialMapping, cfg: &RunConfig) -> Result<NondegeneracyReport> {
    let mut opts = cfg.check_options();
    opts.mode = CheckMode::Exact;
    nondegenerate_at_infinity(f, &opts)
}

fn hunt_config(cfg: &RunConfig) -> HuntConfig {
    HuntConfig {
        exponent_bound: cfg.exponent_bound,
        delta: cfg.delta,
        bound: cfg.g_bound,
        seed: cfg.seed,
        exec: cfg.exec,
        ..HuntConfig::default()
    }
}

pub fn reproduce_example31(cfg: &RunConfig) -> Result<Example31Report> {
    let f = example31_mapping();
    let (g, h) = (&f.components()[0], &f.components()[1]);
    let g_convenient = g.newton_polyhedron()?.is_convenient();
    let h_convenient = h.newton_polyhedron()?.is_convenient();
    let nondegeneracy = exact_check(&f, cfg)?;
    let second_type = hunt_sequences(g, h, SequenceKind::SecondType, &hunt_config(cfg));

    let s = Rational::new(1.into(), 1000.into());
    let x = vec![s.clone(), q(1) / &s];
    let curve_check = CurveCheck {
        s: rational_to_f64(&s),
        x: x.iter().map(rational_to_f64).collect(),
        g: rational_to_f64(&g.evaluate_exact(&x)?),
        h: rational_to_f64(&h.evaluate_exact(&x)?),
    };

    let curve: Vec<Vec<f64>> = sample_curve(g, h, &[1, -1], &[q(1), q(1)], &[q(0), q(0)])
        .into_iter()
        .map(|p| p.x)
        .collect();
    let alphas: Vec<f64> = (1..=30).map(|k| k as f64 / 10.0).collect();
    let cs: Vec<f64> = (-6..=0).map(|k| 10f64.powi(k)).collect();
    let sampler = SamplerConfig {
        box_samples: 0,
        curve_points: curve.clone(),
        exec: cfg.exec,
        ..SamplerConfig::default()
    };
    let mut violated = 0;
    for &a in &alphas {
        for &b in &alphas {
            for &c in &cs {
                if !verify_inequality(g, h, a, b, c, &sampler)?.holds {
                    violated += 1;
                }
            }
        }
    }
    let combinations = alphas.len() * alphas.len() * cs.len();
    let inequality_grid = InequalityGrid {
        betas: alphas.clone(),
        alphas,
        cs,
        curve_points: curve.len(),
        combinations,
        violated,
        all_violated: violated == combinations,
    };

    let claims = vec![
        claim("g is not convenient", !g_convenient),
        claim("h is convenient", h_convenient),
        claim(
            "(g, h) is non-degenerate at infinity",
            nondegeneracy.verdict == Verdict::NonDegenerate,
        ),
        claim("a second-type sequence exists", second_type.evidence.is_some()),
        claim(
            "g(s, 1/s) is within 1e-3 of 1 at s = 1e-3",
            (curve_check.g - 1.0).abs() < 1e-3,
        ),
        claim("h(s, 1/s) exceeds 1e6 at s = 1e-3", curve_check.h.abs() > 1e6),
        claim(
            "every (alpha, beta, c) in the grid is violated",
            inequality_grid.all_violated,
        ),
    ];
    Ok(Example31Report {
        g: g.clone(),
        h: h.clone(),
        g_convenient,
        h_convenient,
        nondegeneracy,
        second_type,
        curve_check,
        inequality_grid,
        all_claims_hold: claims.iter().all(|c| c.holds),
        claims,
    })
}

pub fn reproduce_example32(cfg: &RunConfig) -> Result<Example32Report> {
    let f = example32_mapping();
    let (g, h) = (&f.components()[0], &f.components()[1]);
    let g_convenient = g.newton_polyhedron()?.is_convenient();
    let nondegeneracy = exact_check(&f, cfg)?;
    let fit = fit_exponents(
        g,
        h,
        &FitConfig {
            mu: MuConfig {
                budget: cfg.budget,
                seed: cfg.seed,
                exec: cfg.exec,
            },
            ..FitConfig::default()
        },
    )?;
    let sampler = SamplerConfig {
        box_samples: cfg.box_samples,
        box_half_width: cfg.box_half_width,
        seed: cfg.seed,
        exec: cfg.exec,
        level_points: fit.level_points.clone(),
        curve_points: Vec::new(),
    };
    let verification = verify_inequality(g, h, 0.5, 1.0, 1.0, &sampler)?;
    let fresh = SamplerConfig {
        seed: cfg.seed ^ 0x5EED,
        level_points: Vec::new(),
        ..sampler
    };
    let fitted_verification = verify_inequality(g, h, fit.alpha, fit.beta, fit.c, &fresh)?;
    let hc = hunt_config(cfg);
    let first_type = hunt_sequences(g, h, SequenceKind::FirstType, &hc);
    let second_type = hunt_sequences(g, h, SequenceKind::SecondType, &hc);
    let multiplier = multiplier(
        g,
        h,
        0.5,
        &MultiplierConfig {
            samples: cfg.multiplier_samples,
            radius: 1.0,
            seed: cfg.seed,
            exec: cfg.exec,
        },
    )?;
    let claims = vec![
        claim("g is convenient", g_convenient),
        claim(
            "(g, h) is non-degenerate at infinity",
            nondegeneracy.verdict == Verdict::NonDegenerate,
        ),
        claim("fitted alpha lies in [0.45, 0.55]", (0.45..=0.55).contains(&fit.alpha)),
        claim("fitted beta lies in [0.90, 1.10]", (0.90..=1.10).contains(&fit.beta)),
        claim("|g|^(1/2) + |g| >= |h| on every sample", verification.holds),
        claim("no first-type sequence found", first_type.evidence.is_none()),
        claim("no second-type sequence found", second_type.evidence.is_none()),
        claim("N = 6 for alpha = 1/2", multiplier.n == 6),
        claim("h^6 / g^2 <= 10 on the unit ball samples", multiplier.max_ratio <= 10.0),
    ];
    Ok(Example32Report {
        g: g.clone(),
        h: h.clone(),
        g_convenient,
        nondegeneracy,
        fit,
        verification,
        fitted_verification,
        first_type,
        second_type,
        multiplier,
        all_claims_hold: claims.iter().all(|c| c.holds),
        claims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;

    fn small() -> RunConfig {
        RunConfig {
            budget: 16,
            box_samples: 20_000,
            multiplier_samples: 5_000,
            exec: Exec::Sequential,
            ..RunConfig::default()
        }
    }

    #[test]
    fn example_31_claims() {
        let r = reproduce_example31(&small()).unwrap();
        assert!(r.all_claims_hold, "{:?}", r.claims);
        assert_eq!(r.inequality_grid.combinations, 6300);
    }

    #[test]
    fn example_32_claims() {
        let r = reproduce_example32(&small()).unwrap();
        assert!(r.all_claims_hold, "{:?}", r.claims);
        assert!(r.fitted_verification.holds, "{:?}", r.fitted_verification);
    }
}
