mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sft_core::algebra::{mul, Element, Flavor, TruncationPolicy};
use sft_core::linalg;
use sft_core::Rational;

use common::*;

fn flavor(i: usize) -> Flavor {
    Flavor::ALL[i % Flavor::ALL.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_parses_back(seed in any::<u64>(), f in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_signature(&mut rng, 3, 2);
        let flavor = flavor(f);
        let e = random_homogeneous(&mut rng, &sig, flavor, 5, 4);
        let text = e.display(&sig).to_string();
        prop_assert_eq!(Element::parse(flavor, &sig, &text).unwrap(), e);
    }

    #[test]
    fn truncation_is_an_ideal(seed in any::<u64>(), f in 0usize..6, w in 1u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = random_signature(&mut rng, 3, 1);
        let flavor = flavor(f);
        let policy = TruncationPolicy::uniform(w);
        let a = random_homogeneous(&mut rng, &sig, flavor, 4, 3);
        let b = random_homogeneous(&mut rng, &sig, flavor, 4, 3);
        let full = policy.reduce(&mul(&sig, &a, &b).unwrap());
        prop_assert_eq!(policy.reduce(&full), full.clone());
        prop_assert_eq!(policy.reduce(&mul(&sig, &policy.reduce(&a), &b).unwrap()), full.clone());
        prop_assert_eq!(policy.reduce(&mul(&sig, &a, &policy.reduce(&b)).unwrap()), full);
    }

    #[test]
    fn solutions_solve(columns in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..6), rhs in prop::collection::vec(-3i64..=3, 4)) {
        let sparse = |v: &[i64]| -> BTreeMap<usize, Rational> {
            v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, r(x))).collect()
        };
        let cols: Vec<_> = columns.iter().map(|c| sparse(c)).collect();
        if let Some(x) = linalg::solve(&cols, &sparse(&rhs)) {
            let mut sum: BTreeMap<usize, Rational> = BTreeMap::new();
            for (c, k) in cols.iter().zip(&x) {
                for (&i, v) in c {
                    *sum.entry(i).or_default() += v * k;
                }
            }
            sum.retain(|_, v| *v != r(0));
            prop_assert_eq!(sum, sparse(&rhs));
        }
    }
}
