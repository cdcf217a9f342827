use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use starseq::analysis::{recip_check, sigma_partial, tail_bound};
use starseq::embedding::{embed, rows_monotone, verify_numeric, verify_pfd, Eta, Mode};
use starseq::factoring::{factor, is_prime, FactorBudget, PrimePower};
use starseq::mother::Mother;
use starseq::star_core::{gross_prefix, star, DEFAULT_MAX_DIGITS};
use starseq::Nat;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_recomposes(n in 2u64..) {
        let f = factor(&Nat::from(n), &FactorBudget::default()).unwrap();
        prop_assert!(f.is_complete());
        prop_assert_eq!(f.recompose(), Nat::from(n));
        for pp in f.parts() {
            prop_assert!(is_prime(pp.prime()).unwrap());
        }
        prop_assert!(f.parts().windows(2).all(|w| w[0].prime() < w[1].prime()));
    }

    #[test]
    fn products_of_two_large_primes(a in 1u64 << 30..1 << 32, b in 1u64 << 30..1 << 32) {
        let next = |mut v: Nat| { while !is_prime(&v).unwrap() { v += 1u32; } v };
        let (p, q) = (next(Nat::from(a)), next(Nat::from(b)));
        let f = factor(&(&p * &q), &FactorBudget::default()).unwrap();
        prop_assert!(f.is_complete());
        prop_assert_eq!(f.recompose(), &p * &q);
    }

    #[test]
    fn star_terms_coprime(x in 1u64..10_000) {
        let t = gross_prefix(&Nat::from(x), 6, DEFAULT_MAX_DIGITS).unwrap();
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                prop_assert!(t[i].gcd(&t[j]).is_one());
            }
        }
        prop_assert_eq!(star(&Nat::from(x)).unwrap(), Nat::from(x) * Nat::from(x + 1));
    }

    #[test]
    fn reciprocal_identity(x in 1u64..1_000_000, n in 1usize..6) {
        let r = recip_check(&Nat::from(x), n).unwrap();
        prop_assert!(r.equal);
        prop_assert!(tail_bound(&Nat::from(x), n + 1).unwrap() < tail_bound(&Nat::from(x), n).unwrap());
    }

    #[test]
    fn sigma_is_additive(a in proptest::collection::btree_set(1u64..1000, 0..8), b in proptest::collection::btree_set(1000u64..2000, 0..8)) {
        let to = |s: &std::collections::BTreeSet<u64>| s.iter().map(|&v| Nat::from(v)).collect::<std::collections::BTreeSet<_>>();
        let union: std::collections::BTreeSet<Nat> = to(&a).union(&to(&b)).cloned().collect();
        prop_assert_eq!(sigma_partial(&union).unwrap(), sigma_partial(&to(&a)).unwrap() + sigma_partial(&to(&b)).unwrap());
    }

    #[test]
    fn prime_power_text_round_trips(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101, 65537]), e in 1u32..12) {
        let pp = PrimePower::new(Nat::from(p), e).unwrap();
        let back: PrimePower = pp.to_string().parse().unwrap();
        prop_assert_eq!(&back, &pp);
        let json = serde_json::to_string(&pp).unwrap();
        prop_assert_eq!(serde_json::from_str::<PrimePower>(&json).unwrap(), pp);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn embeddings_stay_disjoint(values in proptest::collection::vec(prop::sample::select(vec!["2", "3", "2^2", "5", "7", "3^2", "11", "13"]), 1..6), steps in 1u64..80) {
        let eta: Vec<PrimePower> = values.iter().map(|s| s.parse().unwrap()).collect();
        let mut m = Mother::default();
        let lit = embed(Eta::Finite(eta.clone()), steps, Mode::Literal, &mut m).unwrap();
        let mono = embed(Eta::Finite(eta), steps, Mode::Monotone, &mut m).unwrap();
        for s in [&lit, &mono] {
            prop_assert_eq!(s.steps() as u64, steps);
            prop_assert!(verify_pfd(s));
            prop_assert!(verify_numeric(s));
        }
        prop_assert!(rows_monotone(&mono));
    }
}
