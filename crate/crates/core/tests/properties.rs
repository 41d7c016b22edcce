//! Property tests for the algebraic and geometric invariants, over random
//! elements of every ambient. The heavyweight fixed-seed batteries live in
//! the command-line harness; these cover the same laws with proptest's
//! shrinking on top.

use std::sync::Arc;

use num::bigint::{BigInt, BigUint};
use proptest::prelude::*;

use sumprod_core::field::{FieldElement, FieldSpec};
use sumprod_core::geometry::{
    ball_compare, build_forest, critical_balls, extract_separable, is_separable, longest_chain,
    verify_chain, verify_separable, Ball, BallRelation,
};
use sumprod_core::notation::{parse_laurent, parse_padic};
use sumprod_core::oracle;
use sumprod_core::sumset::{k_fold_sum, productset, sumset, FiniteSet};
use sumprod_core::valued::{Laurent, NormExponent, Padic, ValuedElement};

fn f2() -> Arc<FieldSpec> {
    Arc::new(FieldSpec::prime(2).unwrap())
}

fn f4() -> Arc<FieldSpec> {
    Arc::new(FieldSpec::extension(2, 2, &[1, 1, 1]).unwrap())
}

fn laurent_strategy(spec: Arc<FieldSpec>) -> impl Strategy<Value = Laurent> {
    let p = i64::from(spec.p());
    let e = spec.e();
    prop::collection::vec((-6i64..=6, prop::collection::vec(0..p, e)), 0..4).prop_map(
        move |raw| {
            let terms = raw
                .into_iter()
                .map(|(exp, coeffs)| (exp, FieldElement::new(&spec, &coeffs).unwrap()))
                .collect();
            Laurent::new(&spec, terms).unwrap()
        },
    )
}

fn padic_strategy(p: u32) -> impl Strategy<Value = Padic> {
    (-1_000_000i64..=1_000_000, 0u32..6)
        .prop_map(move |(num, sexp)| Padic::new(p, BigInt::from(num), sexp).unwrap())
}

fn check_ultrametric<T: ValuedElement>(x: &T, y: &T) {
    let nx = x.norm_exp();
    let ny = y.norm_exp();
    let sum = x.try_add(y).unwrap().norm_exp();
    assert!(sum <= nx.max(ny));
    if nx != ny {
        // Sharpened form: strict maximum is attained exactly.
        assert_eq!(sum, nx.max(ny));
    }
    // Multiplicativity for nonzero operands.
    let prod = x.try_mul(y).unwrap().norm_exp();
    match (nx.finite(), ny.finite()) {
        (Some(a), Some(b)) => assert_eq!(prod, NormExponent::Finite(a + b)),
        _ => assert_eq!(prod, NormExponent::NegInfinity),
    }
    // Norm symmetry.
    assert_eq!(x.neg().norm_exp(), nx);
}

proptest! {
    #[test]
    fn ultrametric_laws_laurent_f2(x in laurent_strategy(f2()), y in laurent_strategy(f2())) {
        check_ultrametric(&x, &y);
    }

    #[test]
    fn ultrametric_laws_laurent_f4(x in laurent_strategy(f4()), y in laurent_strategy(f4())) {
        check_ultrametric(&x, &y);
    }

    #[test]
    fn ultrametric_laws_padic(x in padic_strategy(3), y in padic_strategy(3)) {
        check_ultrametric(&x, &y);
    }

    #[test]
    fn padic_matches_rational_oracle(x in padic_strategy(2), y in padic_strategy(2)) {
        let sum = x.try_add(&y).unwrap();
        prop_assert_eq!(
            oracle::padic_rational::to_rational(&sum),
            oracle::padic_rational::add(&x, &y)
        );
        let prod = x.try_mul(&y).unwrap();
        prop_assert_eq!(
            oracle::padic_rational::to_rational(&prod),
            oracle::padic_rational::mul(&x, &y)
        );
        prop_assert_eq!(
            oracle::rational_norm_exp(&oracle::padic_rational::to_rational(&x), 2),
            x.norm_exp()
        );
    }

    #[test]
    fn literal_roundtrip_laurent(x in laurent_strategy(f4())) {
        let spec = f4();
        prop_assert_eq!(parse_laurent(&x.to_string(), &spec).unwrap(), x);
    }

    #[test]
    fn literal_roundtrip_padic(x in padic_strategy(3)) {
        prop_assert_eq!(parse_padic(&x.to_string(), 3).unwrap(), x);
    }

    #[test]
    fn sumsets_match_the_naive_oracle(
        raw in prop::collection::vec(laurent_strategy(f2()), 1..10)
    ) {
        let a = FiniteSet::new(raw).unwrap();
        let fast = sumset(&a, &a).unwrap();
        prop_assert_eq!(fast.elements(), &oracle::sumset_naive(&a, &a).unwrap()[..]);
        let fast = productset(&a, &a).unwrap();
        prop_assert_eq!(fast.elements(), &oracle::productset_naive(&a, &a).unwrap()[..]);
    }

    #[test]
    fn multiplicities_sum_to_the_power(
        raw in prop::collection::vec(laurent_strategy(f2()), 1..6),
        k in 1usize..4
    ) {
        let a = FiniteSet::new(raw).unwrap();
        let m = k_fold_sum(&a, k).unwrap();
        prop_assert_eq!(m.total(), (a.len() as u128).pow(k as u32));
        // Support of the 2-fold map is exactly the sumset.
        if k == 2 {
            let support = m.support();
            prop_assert_eq!(support, sumset(&a, &a).unwrap());
        }
        // Energy is the second moment.
        let e = sumprod_core::sumset::energy(&a, k).unwrap();
        let second: BigUint = m
            .iter()
            .map(|(_, mult)| BigUint::from(mult) * BigUint::from(mult))
            .sum();
        prop_assert_eq!(e.value, second);
    }

    #[test]
    fn ball_compare_matches_point_family(
        c1 in 0usize..8, r1 in -2i64..=3, c2 in 0usize..8, r2 in -2i64..=3
    ) {
        let spec = f2();
        let centers = oracle::laurent_point_family(&spec, 0, 2);
        let family = oracle::laurent_point_family(&spec, -2, 3);
        let b1 = Ball::new(centers[c1].clone(), r1);
        let b2 = Ball::new(centers[c2].clone(), r2);
        let fast = ball_compare(&b1, &b2).unwrap();
        let slow = oracle::ball_relation_pointwise(&b1, &b2, &family).unwrap();
        prop_assert_eq!(Some(fast), slow);
        // Equal-radius dichotomy.
        if r1 == r2 {
            prop_assert!(matches!(fast, BallRelation::Disjoint | BallRelation::Equal));
        }
    }

    #[test]
    fn chain_pipeline_invariants(
        raw in prop::collection::vec(laurent_strategy(f2()), 2..9)
    ) {
        let a = FiniteSet::new(raw).unwrap();
        prop_assume!(a.len() >= 2);
        let forest = build_forest(&critical_balls(&a).unwrap());
        // Weights account for every element; classes fit the residue field.
        prop_assert_eq!(forest.total_weight(), a.len() as u64);
        prop_assert!(forest.max_class_size() <= a.base());

        let chain = longest_chain(&forest);
        verify_chain(&a, &chain).unwrap();
        prop_assert_eq!(chain.len(), oracle::longest_chain_exhaustive(&a).unwrap());

        let sep = extract_separable(&chain);
        verify_separable(&sep).unwrap();
        prop_assert!(sep.len() as u64 >= (chain.len() as u64).div_ceil(a.base()));
        let extracted = FiniteSet::new(sep.elements.clone()).unwrap();
        prop_assert!(is_separable(&extracted).unwrap().is_some());
    }

    #[test]
    fn separability_decision_matches_exhaustive(
        raw in prop::collection::vec(laurent_strategy(f2()), 1..7)
    ) {
        let s = FiniteSet::new(raw).unwrap();
        prop_assume!(s.len() <= 6);
        let fast = is_separable(&s).unwrap();
        let slow = oracle::separable_exhaustive(&s).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(cert) = fast {
            verify_separable(&cert).unwrap();
        }
    }
}
