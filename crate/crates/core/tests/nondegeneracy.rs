mod common;

use common::q;
use lojnewton::nondegeneracy::{
    augmented_check, exact_check_2d, nondegenerate_at_infinity, rescaled_is_witness, subsets, witness_search,
    CheckMode, CheckOptions, FaceSystem, Verdict,
};
use lojnewton::polyhedra::enumerate_negative_face_tuples;
use lojnewton::polynomial::parse_polynomial;
use lojnewton::{Exec, ExponentVector, Polynomial, PolynomialMapping, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_term<R: Rng>(rng: &mut R) -> (ExponentVector, Rational) {
    let e = vec![rng.gen_range(0..=4), rng.gen_range(0..=4)];
    let c: i64 = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
    (ExponentVector::new(e).unwrap(), q(c))
}

/// Either a random sparse polynomial or `(c1 x1^a - c2 x2^b)^2` plus terms
/// strictly above the edge joining `(2a, 0)` and `(0, 2b)`, whose edge face
/// is degenerate whenever `c1, c2 > 0`.
fn random_component<R: Rng>(rng: &mut R) -> Polynomial {
    loop {
        let p = if rng.gen_bool(0.5) {
            Polynomial::from_terms(2, (0..rng.gen_range(1..=8)).map(|_| random_term(rng))).unwrap()
        } else {
            let (a, b) = (rng.gen_range(1..=2u32), rng.gen_range(1..=2u32));
            let (c1, c2) = (
                rng.gen_range(1..=3),
                rng.gen_range(1..=3) * if rng.gen_bool(0.8) { 1 } else { -1 },
            );
            let text = format!("({c1}*x1^{a} - {c2}*x2^{b})^2");
            let mut p = parse_polynomial(&text, 2).unwrap();
            for _ in 0..rng.gen_range(0..=5) {
                let (e, c) = random_term(rng);
                let k = e.to_i64();
                if (b as i64) * k[0] + (a as i64) * k[1] < 2 * (a * b) as i64 {
                    p = &p + &Polynomial::monomial(e, c);
                }
            }
            p
        };
        if p.len() <= 8 && !p.is_zero() {
            return p;
        }
    }
}

fn random_mapping(seed: u64) -> PolynomialMapping {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(1..=2);
    PolynomialMapping::new((0..p).map(|_| random_component(&mut rng)).collect()).unwrap()
}

fn systems(f: &PolynomialMapping) -> Vec<FaceSystem> {
    let mut out = Vec::new();
    for s in subsets(f.len()) {
        let polys: Vec<_> = s
            .iter()
            .map(|&i| f.components()[i].newton_polyhedron().unwrap())
            .collect();
        for t in enumerate_negative_face_tuples(&polys).unwrap() {
            out.push(FaceSystem::from_tuple(f, &s, &t).unwrap());
        }
    }
    out
}

#[test]
fn exact_and_search_never_contradict() {
    let (mut degenerate, mut found, mut clean) = (0, 0, 0);
    for m in 0..200u64 {
        let f = random_mapping(m);
        for (k, sys) in systems(&f).iter().enumerate() {
            let exact = exact_check_2d(sys).unwrap().verdict();
            assert_ne!(exact, Verdict::Undecided);
            let (w, _) = witness_search(sys, 5000, m ^ k as u64, Exec::default());
            match exact {
                Verdict::Degenerate => {
                    degenerate += 1;
                    found += usize::from(w.is_some());
                }
                _ => {
                    assert!(
                        w.is_none(),
                        "search found a witness on an exactly empty system of {f:?}: {w:?}"
                    );
                    clean += 1;
                }
            }
        }
    }
    assert!(degenerate >= 20, "only {degenerate} degenerate systems drawn");
    assert!(clean >= 100);
    assert!(found as f64 >= 0.95 * degenerate as f64, "{found} of {degenerate}");
}

/// Independent recheck of a witness by exact partial derivatives evaluated in
/// floating point.
fn independent_residuals(sys: &FaceSystem, x: &[f64]) -> (f64, f64) {
    let f: f64 = sys
        .face_polys
        .iter()
        .map(|p| p.evaluate_float(x).unwrap().abs())
        .fold(0.0, f64::max);
    let rows: Vec<Vec<f64>> = sys
        .face_polys
        .iter()
        .map(|p| {
            (0..x.len())
                .map(|j| x[j] * p.partial(j).evaluate_float(x).unwrap())
                .collect()
        })
        .collect();
    let minor = match rows.len() {
        1 => rows[0].iter().fold(0.0f64, |m, v| m.max(v.abs())),
        _ => (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]).abs(),
    };
    (f, minor)
}

#[test]
fn witnesses_recheck_and_rescale() {
    let mut checked = 0;
    for m in 0..60u64 {
        let f = random_mapping(m);
        for sys in systems(&f) {
            if let Some(w) = witness_search(&sys, 200, m, Exec::Sequential).0 {
                let norm = w.point.iter().map(|v| v * v).sum::<f64>().sqrt();
                let deg = sys.face_polys.iter().map(|p| p.total_degree()).max().unwrap() as i32;
                let (fr, mr) = independent_residuals(&sys, &w.point);
                assert!(fr < 1e-10 * (1.0 + norm.powi(deg)), "{fr}");
                assert!(mr < 1e-8, "{mr}");
                if let Some(x) = w.exact() {
                    for t in [Rational::new(1.into(), 2.into()), q(2)] {
                        assert!(rescaled_is_witness(&sys, &x, &t));
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 5);
}

#[test]
fn augmented_form_agrees_with_subtuple_form() {
    let opts = CheckOptions::with_mode(CheckMode::Exact);
    for m in 0..200u64 {
        let f = random_mapping(1000 + m);
        let a = augmented_check(&f, &opts).unwrap().verdict;
        let b = nondegenerate_at_infinity(&f, &opts).unwrap().verdict;
        assert_eq!(a, b, "{f:?}");
    }
}

#[test]
fn subset_failures_propagate() {
    let opts = CheckOptions::with_mode(CheckMode::Exact);
    for m in 0..100u64 {
        let f = random_mapping(5000 + m);
        let full = nondegenerate_at_infinity(&f, &opts).unwrap();
        let any_sub = subsets(f.len()).iter().any(|s| {
            lojnewton::nondegeneracy::khovanskii_check(&f.subset(s).unwrap(), &opts)
                .unwrap()
                .verdict
                == Verdict::Degenerate
        });
        assert_eq!(full.verdict == Verdict::Degenerate, any_sub);
        if any_sub {
            assert!(full.failing_subset.is_some());
        }
    }
}
