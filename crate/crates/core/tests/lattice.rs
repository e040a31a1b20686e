mod common;

use common::{check_completion, random_completion_instance, random_flat_mapping};
use lojnewton::lattice::{corrupt_basis, reduce_mapping, unimodular_complete, verify_reduction};
use lojnewton::Exec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn completion_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, qs, s) = random_completion_instance(&mut rng);
        prop_assert_eq!(check_completion(n, &qs, &s), Ok(()));
    }

    #[test]
    fn monomial_map_inverts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, qs, s) = random_completion_instance(&mut rng);
        let b = unimodular_complete(n, &qs, &s).unwrap();
        let u: Vec<_> = (0..n).map(|_| lojnewton::lattice::sample_nonzero_rational(&mut rng)).collect();
        prop_assert_eq!(b.inverse_monomial_map(&b.monomial_map(&u)), Some(u));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn reduction_identities(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_flat_mapping(&mut rng);
        let r = reduce_mapping(&f).unwrap();
        prop_assert!(r.reduced_dim() < f.num_vars());
        for (a, b) in f.components().iter().zip(r.reduced.components()) {
            prop_assert_eq!(a.len(), b.len());
        }
        let v = verify_reduction(&r, 20, seed, Exec::Sequential);
        prop_assert!(v.passed(), "{:?}", v);
    }
}

#[test]
fn corrupted_basis_is_caught() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut caught = 0;
    for _ in 0..20 {
        let f = random_flat_mapping(&mut rng);
        let r = reduce_mapping(&f).unwrap();
        if let Some(bad) = corrupt_basis(&r) {
            assert!(!verify_reduction(&bad, 20, 1, Exec::Sequential).passed());
            caught += 1;
        }
    }
    assert!(caught > 10);
}

#[test]
fn rejects_negative_covector() {
    assert!(unimodular_complete(2, &[vec![1, -1]], &[vec![0, 1]]).is_err());
}
