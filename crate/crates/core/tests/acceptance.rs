//! Acceptance gate. Runs every criterion at its stated size and tolerance,
//! prints one PASS/FAIL line per criterion and exits nonzero on any failure.

mod common;

use std::time::{Duration, Instant};

use common::{
    brute_d_and_face, check_completion, q, random_completion_instance, random_flat_mapping, random_polynomial,
};
use lojnewton::harness::{
    example31_mapping, example32_mapping, genericity_trial, lattice_supports, openness_probe, reproduce_example31,
    reproduce_example32, RunConfig, Sampler,
};
use lojnewton::lattice::{corrupt_basis, reduce_mapping, verify_reduction};
use lojnewton::lojasiewicz::{ktilde_probe, KtildeConfig};
use lojnewton::nondegeneracy::{nondegenerate_at_infinity, CheckMode, CheckOptions, DecisionMode, Evidence, Verdict};
use lojnewton::polyhedra::{face_lattice, newton_polyhedron};
use lojnewton::polynomial::parse_polynomial;
use lojnewton::{Exec, ExponentVector, Polynomial, PolynomialMapping};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, took: Duration) -> Result<(), String> {
    ensure(took < limit, || {
        format!("took {:.2}s, limit {}s", took.as_secs_f64(), limit.as_secs())
    })
}

fn mapping(texts: &[&str]) -> PolynomialMapping {
    PolynomialMapping::new(texts.iter().map(|t| parse_polynomial(t, 2).unwrap()).collect()).unwrap()
}

fn example31() -> Outcome {
    let start = Instant::now();
    let r = reproduce_example31(&RunConfig::default()).map_err(|e| e.to_string())?;
    within(Duration::from_secs(30), start.elapsed())?;
    ensure(!r.g_convenient && r.h_convenient, || "convenience flags".into())?;
    ensure(
        r.nondegeneracy.verdict == Verdict::NonDegenerate && r.nondegeneracy.mode == DecisionMode::Exact2d,
        || {
            format!(
                "non-degeneracy {:?} in {:?}",
                r.nondegeneracy.verdict, r.nondegeneracy.mode
            )
        },
    )?;
    ensure(r.second_type.evidence.is_some(), || "no second-type evidence".into())?;
    // along (1/k, k): g = (1/k^2 - 1)^2 and h = g + (k^2 - 1)^2
    let k = 1000.0f64;
    let g_oracle = (1.0 / (k * k) - 1.0).powi(2);
    let h_oracle = g_oracle + (k * k - 1.0).powi(2);
    let c = &r.curve_check;
    ensure(c.s == 1e-3, || format!("curve sampled at s = {}", c.s))?;
    ensure(
        (c.g - g_oracle).abs() <= 1e-12 && (c.h - h_oracle).abs() <= 1e-12 * h_oracle,
        || format!("curve values ({}, {}) differ from ({g_oracle}, {h_oracle})", c.g, c.h),
    )?;
    ensure((c.g - 1.0).abs() < 1e-3 && c.h.abs() > 1e6, || {
        format!("curve values ({}, {})", c.g, c.h)
    })?;
    let grid = &r.inequality_grid;
    ensure(grid.combinations == 30 * 30 * 7 && grid.all_violated, || {
        format!("{} of {} grid points violated", grid.violated, grid.combinations)
    })?;
    Ok(format!(
        "g(s,1/s) = {:.9}, h(s,1/s) = {:.4e}, {}/{} grid points violated",
        c.g, c.h, grid.violated, grid.combinations
    ))
}

fn example32() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    ensure(
        cfg.box_samples == 1_000_000 && cfg.box_half_width == 1e3 && cfg.multiplier_samples == 100_000,
        || "default sample sizes changed".into(),
    )?;
    let r = reproduce_example32(&cfg).map_err(|e| e.to_string())?;
    within(Duration::from_secs(60), start.elapsed())?;
    ensure((0.45..=0.55).contains(&r.fit.alpha), || {
        format!("alpha = {}", r.fit.alpha)
    })?;
    ensure((0.90..=1.10).contains(&r.fit.beta), || format!("beta = {}", r.fit.beta))?;
    let v = &r.verification;
    ensure((v.alpha, v.beta, v.c) == (0.5, 1.0, 1.0), || {
        "wrong constants verified".into()
    })?;
    ensure(v.box_samples == 1_000_000 && v.level_samples > 0, || {
        format!("{} box and {} level samples", v.box_samples, v.level_samples)
    })?;
    ensure(v.holds && v.worst_ratio <= 1.0 + 1e-9, || {
        format!("worst ratio {}", v.worst_ratio)
    })?;
    let m = &r.multiplier;
    ensure(m.n == 6 && m.samples == 100_000, || {
        format!("N = {} on {} samples", m.n, m.samples)
    })?;
    ensure(m.max_ratio <= 10.0, || format!("max h^6/g^2 = {}", m.max_ratio))?;
    Ok(format!(
        "alpha = {:.4}, beta = {:.4}, worst ratio {:.6} over {} points, N = {}, max h^6/g^2 = {:.4}",
        r.fit.alpha,
        r.fit.beta,
        v.worst_ratio,
        v.box_samples + v.level_samples,
        m.n,
        m.max_ratio
    ))
}

fn polyhedral_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases: Vec<(Vec<Vec<i64>>, Vec<i64>)> = (0..1000)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(1..=12);
            let s = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=6)).collect()).collect();
            let cov = (0..n).map(|_| rng.gen_range(-6..=6)).collect();
            (s, cov)
        })
        .collect();
    let start = Instant::now();
    let mut mismatches = 0;
    for (s, cov) in &cases {
        let (d, face) = newton_polyhedron(s).map_err(|e| e.to_string())?.d_and_face(cov);
        if (d, face.points().to_vec()) != brute_d_and_face(s, cov) {
            mismatches += 1;
        }
    }
    within(Duration::from_secs(10), start.elapsed())?;
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!(
        "1000 cases, 0 mismatches in {:.3}s",
        start.elapsed().as_secs_f64()
    ))
}

fn euler_relation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut faces, mut failures) = (0, 0);
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let f = random_polynomial(&mut rng, n, 12, 5);
        let p = f.newton_polyhedron().map_err(|e| e.to_string())?;
        for idx in face_lattice(&p) {
            let cov: Vec<i64> = (0..n)
                .map(|j| {
                    p.facets()
                        .iter()
                        .filter(|fc| idx.iter().all(|i| fc.vertices.contains(i)))
                        .map(|fc| fc.normal[j])
                        .sum()
                })
                .collect();
            let (d, face) = p.d_and_face(&cov);
            let mut want: Vec<Vec<i64>> = idx.iter().map(|&i| p.vertices()[i].clone()).collect();
            want.sort();
            let mut got = face.vertices().to_vec();
            got.sort();
            ensure(got == want, || {
                format!("covector {cov:?} exposes {got:?}, expected {want:?}")
            })?;
            let qr: Vec<_> = cov.iter().map(|&v| q(v)).collect();
            let fd = f.face_part(&face).map_err(|e| e.to_string())?;
            if !fd.euler_residual(&qr, &q(d)).map_err(|e| e.to_string())?.is_zero() {
                failures += 1;
            }
            faces += 1;
        }
    }
    ensure(failures == 0, || format!("{failures} of {faces} faces fail"))?;
    Ok(format!("100 polynomials, {faces} faces, 0 failures"))
}

fn completion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let start = Instant::now();
    for i in 0..500 {
        let (n, qs, s) = random_completion_instance(&mut rng);
        check_completion(n, &qs, &s).map_err(|e| format!("instance {i} ({qs:?}): {e}"))?;
    }
    within(Duration::from_secs(60), start.elapsed())?;
    Ok(format!(
        "500 instances, 0 failures in {:.2}s",
        start.elapsed().as_secs_f64()
    ))
}

fn reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut controls = 0;
    for i in 0..100u64 {
        let f = random_flat_mapping(&mut rng);
        let r = reduce_mapping(&f).map_err(|e| format!("mapping {i}: {e}"))?;
        let v = verify_reduction(&r, 100, i, Exec::default());
        ensure(v.samples == 100 && v.passed(), || format!("mapping {i}: {v:?}"))?;
        if let Some(bad) = corrupt_basis(&r) {
            let c = verify_reduction(&bad, 100, i, Exec::default());
            ensure(c.value_fail > 0 || c.rank_fail > 0, || {
                format!("corrupted control {i} passed")
            })?;
            controls += 1;
        }
    }
    ensure(controls > 0, || "no corrupted control was constructed".into())?;
    Ok(format!(
        "100 mappings x 100 points pass; {controls} corrupted controls all fail"
    ))
}

fn degeneracy_detection() -> Outcome {
    let opts = CheckOptions::with_mode(CheckMode::Exact);
    let r = nondegenerate_at_infinity(&mapping(&["(x1 - x2)^2"]), &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Degenerate, || {
        format!("(x1-x2)^2 gives {:?}", r.verdict)
    })?;
    let best = r
        .systems
        .iter()
        .filter_map(|s| match &s.evidence {
            Evidence::Witness(w) => Some(w.max_residual()),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    ensure(best < 1e-12, || format!("witness residual {best}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut monomials = 0;
    for n in 1..=3 {
        for _ in 0..20 {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
            let c = q([-3, -1, 1, 2][rng.gen_range(0..4)]);
            let f = Polynomial::monomial(ExponentVector::new(e.clone()).unwrap(), c);
            let v = nondegenerate_at_infinity(&PolynomialMapping::new(vec![f]).unwrap(), &opts)
                .map_err(|e| e.to_string())?
                .verdict;
            ensure(v == Verdict::NonDegenerate, || format!("monomial {e:?} gives {v:?}"))?;
            monomials += 1;
        }
    }
    for (name, f) in [("31", example31_mapping()), ("32", example32_mapping())] {
        let r = nondegenerate_at_infinity(&f, &opts).map_err(|e| e.to_string())?;
        ensure(
            r.verdict == Verdict::NonDegenerate && r.mode == DecisionMode::Exact2d,
            || format!("example {name}: {:?} in {:?}", r.verdict, r.mode),
        )?;
    }
    Ok(format!(
        "witness residual {best:.1e}; {monomials} monomials and both examples non-degenerate"
    ))
}

fn genericity() -> Outcome {
    let f = example32_mapping();
    let supports = lattice_supports(&f).map_err(|e| e.to_string())?;
    let opts = CheckOptions::with_mode(CheckMode::Exact);
    let stats = genericity_trial(&supports, &Sampler::Uniform { lo: -1.0, hi: 1.0 }, 1000, 8, &opts)
        .map_err(|e| e.to_string())?;
    let frac = stats.fraction_nondegenerate.unwrap_or(0.0);
    ensure(frac >= 0.99, || format!("fraction {frac}"))?;
    let open = openness_probe(&f, 1e-6, 100, 8, &opts).map_err(|e| e.to_string())?;
    ensure(open.remained_nondegenerate == 100, || {
        format!("{} of 100 stayed", open.remained_nondegenerate)
    })?;
    let pinned = genericity_trial(
        &[vec![vec![2, 0], vec![1, 1], vec![0, 2]]],
        &Sampler::Pinned {
            coefficients: vec![vec!["1".into(), "-2".into(), "1".into()]],
        },
        1,
        0,
        &opts,
    )
    .map_err(|e| e.to_string())?;
    ensure(pinned.degenerate_count == 1, || "pinned (1,-2,1) not degenerate".into())?;
    Ok(format!(
        "{}/1000 non-degenerate ({} degenerate, {} undecided), openness 100/100, pinned degenerate",
        stats.nondegenerate_count, stats.degenerate_count, stats.undecided_count
    ))
}

fn ktilde() -> Outcome {
    let cfg = KtildeConfig::default();
    let hyp = parse_polynomial("(x1*x2 - 1)^2", 2).unwrap();
    let r = ktilde_probe(&hyp, None, &[100.0, 1e3, 1e4], &cfg).map_err(|e| e.to_string())?;
    let mut worst = (0.0f64, 0.0f64);
    for res in &r.results {
        let (gn, fv) = (
            res.min_grad_norm.unwrap_or(f64::INFINITY),
            res.f_value.unwrap_or(f64::INFINITY),
        );
        ensure(gn < 1e-6 && fv.abs() < 1e-8, || {
            format!("R = {}: |grad| = {gn}, f = {fv}", res.radius)
        })?;
        worst = (worst.0.max(gn), worst.1.max(fv.abs()));
    }
    let g = parse_polynomial("x1^2 + x2^4", 2).unwrap();
    let r = ktilde_probe(&g, None, &[10.0, 100.0, 1e3, 1e4], &cfg).map_err(|e| e.to_string())?;
    let mut slack = f64::INFINITY;
    for res in &r.results {
        let gn = res.min_grad_norm.unwrap_or(0.0);
        ensure(gn >= res.radius, || format!("R = {}: |grad| = {gn}", res.radius))?;
        slack = slack.min(gn / res.radius);
    }
    Ok(format!(
        "hyperbola max |grad| {:.1e}, max f {:.1e}; min |grad g|/R = {slack:.3}",
        worst.0, worst.1
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("reproduce-example31", example31),
        ("reproduce-example32", example32),
        ("polyhedral oracle equivalence", polyhedral_oracle),
        ("Euler relation on every face", euler_relation),
        ("unimodular completion properties", completion),
        ("monomial reduction correctness", reduction),
        ("degeneracy detection", degeneracy_detection),
        ("genericity and openness", genericity),
        ("asymptotic critical value probes", ktilde),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({secs:.2}s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
