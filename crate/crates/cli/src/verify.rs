//! Fixed-seed invariant batteries behind `sumprod verify <suite>`.
//!
//! Suites: `balls` (containment trichotomy against the point-family oracle),
//! `arithmetic` (norm laws, field axioms, rational-oracle parity, literal
//! round-trips), `energy` (multiplicity identities, the separable-set
//! energy census, differential sumsets), `lemmas` (chain bound, extraction,
//! class bound, quadratic growth, the monomial golden values), and `all`.

use std::sync::Arc;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use sumprod_core::field::{enumerate_elements, FieldElement, FieldSpec};
use sumprod_core::geometry::{
    ball_compare, build_forest, critical_balls, is_separable, longest_chain,
    verify_chain, verify_separable, Ball, BallRelation,
};
use sumprod_core::notation::{parse_laurent, parse_padic, Ambient};
use sumprod_core::oracle;
use sumprod_core::report::{growth_report, Budgets};
use sumprod_core::sumset::{
    energy, k_fold_sum, productset, sumset, trivial_count, FiniteSet,
};
use sumprod_core::valued::{Laurent, NormExponent, Padic, ValuedElement};

use crate::corpus::{reference_ambients, separable_fixtures, standard_corpus};
use crate::error::CliError;
use crate::with_set;

/// Outcome of one named battery.
#[derive(Debug, Clone)]
pub struct Battery {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

fn battery(name: &str, pass: bool, detail: String) -> Battery {
    Battery { name: name.to_string(), detail, pass }
}

pub const SUITES: [&str; 5] = ["balls", "arithmetic", "energy", "lemmas", "all"];

pub fn run_suite(suite: &str) -> Result<Vec<Battery>, CliError> {
    match suite {
        "balls" => Ok(suite_balls()),
        "arithmetic" => Ok(suite_arithmetic()),
        "energy" => Ok(suite_energy()),
        "lemmas" => Ok(suite_lemmas()),
        "all" => {
            let mut out = suite_balls();
            out.extend(suite_arithmetic());
            out.extend(suite_energy());
            out.extend(suite_lemmas());
            Ok(out)
        }
        other => Err(CliError::Usage(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

pub fn render(batteries: &[Battery]) -> (String, bool) {
    let mut out = String::new();
    let mut failures = 0;
    for b in batteries {
        let tag = if b.pass { "ok" } else { "FAIL" };
        if !b.pass {
            failures += 1;
        }
        out.push_str(&format!("{tag} {} — {}\n", b.name, b.detail));
    }
    out.push_str(&format!(
        "summary: checks={} failures={failures}\n",
        batteries.len()
    ));
    (out, failures == 0)
}

// ---- balls ----

pub fn suite_balls() -> Vec<Battery> {
    let spec = Arc::new(FieldSpec::prime(2).unwrap());
    let centers = oracle::laurent_point_family(&spec, 0, 2);
    let family = oracle::laurent_point_family(&spec, -2, 3);
    let mut balls = Vec::new();
    for c in &centers {
        for rexp in -2..=3 {
            balls.push(Ball::new(c.clone(), rexp));
        }
    }
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    let mut dichotomy_violations = 0usize;
    for b1 in &balls {
        for b2 in &balls {
            pairs += 1;
            let fast = ball_compare(b1, b2).expect("same ambient");
            let slow = oracle::ball_relation_pointwise(b1, b2, &family).expect("same ambient");
            if slow != Some(fast) {
                mismatches += 1;
            }
            if b1.rexp() == b2.rexp()
                && !matches!(fast, BallRelation::Disjoint | BallRelation::Equal)
            {
                dichotomy_violations += 1;
            }
        }
    }
    vec![
        battery(
            "balls.trichotomy-exhaustive",
            mismatches == 0,
            format!(
                "{pairs} ball pairs over {} centers match the {}-point membership oracle",
                centers.len(),
                family.len()
            ),
        ),
        battery(
            "balls.equal-radius-dichotomy",
            dichotomy_violations == 0,
            "equal radii imply disjoint-or-equal on every pair".to_string(),
        ),
    ]
}

// ---- arithmetic ----

fn random_laurent(rng: &mut ChaCha12Rng, spec: &Arc<FieldSpec>) -> Laurent {
    let p = u64::from(spec.p());
    let nterms = (rng.next_u64() % 5) as usize;
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let exp = (rng.next_u64() % 17) as i64 - 8;
        let coeffs: Vec<i64> = (0..spec.e()).map(|_| (rng.next_u64() % p) as i64).collect();
        terms.push((exp, FieldElement::new(spec, &coeffs).expect("reduced")));
    }
    Laurent::new(spec, terms).expect("same spec")
}

fn random_padic(rng: &mut ChaCha12Rng, p: u32) -> Padic {
    let num = (rng.next_u64() % 2_000_003) as i64 - 1_000_001;
    let sexp = (rng.next_u64() % 7) as u32;
    Padic::new(p, BigInt::from(num), sexp).expect("prime p")
}

fn norm_laws_hold<T: ValuedElement>(x: &T, y: &T) -> bool {
    let nx = x.norm_exp();
    let ny = y.norm_exp();
    let sum = x.try_add(y).expect("same ambient").norm_exp();
    if sum > nx.max(ny) {
        return false;
    }
    if nx != ny && sum != nx.max(ny) {
        return false;
    }
    let prod = x.try_mul(y).expect("same ambient").norm_exp();
    let expected = match (nx.finite(), ny.finite()) {
        (Some(a), Some(b)) => NormExponent::Finite(a + b),
        _ => NormExponent::NegInfinity,
    };
    prod == expected && x.neg().norm_exp() == nx
}

const TRIPLES: usize = 100_000;

/// Norm laws on random triples, all five reference ambients.
pub fn battery_norm_laws() -> Battery {
    let mut failures = 0usize;
    for ambient in reference_ambients() {
        let mut rng = ChaCha12Rng::seed_from_u64(101);
        match ambient {
            Ambient::Field(spec) => {
                for _ in 0..TRIPLES {
                    let x = random_laurent(&mut rng, &spec);
                    let y = random_laurent(&mut rng, &spec);
                    let z = random_laurent(&mut rng, &spec);
                    if !(norm_laws_hold(&x, &y)
                        && norm_laws_hold(&y, &z)
                        && norm_laws_hold(&x, &z))
                    {
                        failures += 1;
                    }
                }
            }
            Ambient::Padic(p) => {
                for _ in 0..TRIPLES {
                    let x = random_padic(&mut rng, p);
                    let y = random_padic(&mut rng, p);
                    let z = random_padic(&mut rng, p);
                    if !(norm_laws_hold(&x, &y)
                        && norm_laws_hold(&y, &z)
                        && norm_laws_hold(&x, &z))
                    {
                        failures += 1;
                    }
                }
            }
        }
    }
    battery(
        "arithmetic.norm-laws",
        failures == 0,
        format!("{TRIPLES} random triples per ambient: ultrametric inequality (with the sharp equal-norm case), multiplicativity, symmetry"),
    )
}

/// Field axioms on random triples per tested spec.
pub fn battery_field_axioms() -> Battery {
    let specs = vec![
        Arc::new(FieldSpec::prime(2).unwrap()),
        Arc::new(FieldSpec::prime(3).unwrap()),
        Arc::new(FieldSpec::extension(2, 2, &[1, 1, 1]).unwrap()),
        Arc::new(FieldSpec::extension(2, 3, &[1, 1, 0, 1]).unwrap()),
        Arc::new(FieldSpec::extension(3, 2, &[1, 0, 1]).unwrap()),
    ];
    let mut failures = 0usize;
    for spec in &specs {
        let mut rng = ChaCha12Rng::seed_from_u64(103);
        let p = u64::from(spec.p());
        let rand_elem = |rng: &mut ChaCha12Rng| {
            let coeffs: Vec<i64> = (0..spec.e()).map(|_| (rng.next_u64() % p) as i64).collect();
            FieldElement::new(spec, &coeffs).expect("reduced")
        };
        for _ in 0..TRIPLES {
            let a = rand_elem(&mut rng);
            let b = rand_elem(&mut rng);
            let c = rand_elem(&mut rng);
            let ok = a.add(&b).unwrap() == b.add(&a).unwrap()
                && a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap()
                && a.mul(&b).unwrap() == b.mul(&a).unwrap()
                && a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap()
                && a.mul(&b.add(&c).unwrap()).unwrap()
                    == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                && a.add(&a.neg()).unwrap().is_zero()
                && (a.is_zero() || a.mul(&a.inv().unwrap()).unwrap().is_one());
            if !ok {
                failures += 1;
            }
        }
    }
    battery(
        "arithmetic.field-axioms",
        failures == 0,
        format!("{TRIPLES} random triples per spec (q = 2, 3, 4, 8, 9): associativity, commutativity, distributivity, inverses"),
    )
}

/// Multiplicative group order, exhaustively for q <= 64.
pub fn battery_group_order() -> Battery {
    let mut group_specs = vec![
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(7).unwrap(),
        FieldSpec::prime(11).unwrap(),
        FieldSpec::prime(13).unwrap(),
        FieldSpec::prime(17).unwrap(),
        FieldSpec::prime(19).unwrap(),
        FieldSpec::prime(23).unwrap(),
        FieldSpec::prime(29).unwrap(),
        FieldSpec::prime(31).unwrap(),
        FieldSpec::prime(37).unwrap(),
        FieldSpec::prime(41).unwrap(),
        FieldSpec::prime(43).unwrap(),
        FieldSpec::prime(47).unwrap(),
        FieldSpec::prime(53).unwrap(),
        FieldSpec::prime(59).unwrap(),
        FieldSpec::prime(61).unwrap(),
        FieldSpec::extension(2, 2, &[1, 1, 1]).unwrap(),
        FieldSpec::extension(2, 3, &[1, 1, 0, 1]).unwrap(),
        FieldSpec::extension(2, 4, &[1, 1, 0, 0, 1]).unwrap(),
        FieldSpec::extension(2, 5, &[1, 0, 1, 0, 0, 1]).unwrap(),
        FieldSpec::extension(2, 6, &[1, 1, 0, 0, 0, 0, 1]).unwrap(),
        FieldSpec::extension(3, 2, &[1, 0, 1]).unwrap(),
        FieldSpec::extension(3, 3, &[1, 2, 0, 1]).unwrap(),
        FieldSpec::extension(5, 2, &[1, 1, 1]).unwrap(),
        FieldSpec::extension(7, 2, &[1, 0, 1]).unwrap(),
    ];
    group_specs.retain(|s| s.q() <= 64);
    let mut failures = 0usize;
    let count = group_specs.len();
    for spec in group_specs {
        let spec = Arc::new(spec);
        let q = spec.q();
        let nonzero: Vec<FieldElement> = enumerate_elements(&spec)
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect();
        if nonzero.len() as u64 != q - 1 {
            failures += 1;
            continue;
        }
        for x in &nonzero {
            if !x.pow(q - 1).is_one() || !x.mul(&x.inv().unwrap()).unwrap().is_one() {
                failures += 1;
            }
        }
    }
    battery(
        "arithmetic.multiplicative-group-order",
        failures == 0,
        format!("exhaustive x^(q-1) = 1 and inverse checks over {count} fields with q <= 64"),
    )
}

/// Rational-oracle parity for the p-adic ambients.
pub fn battery_padic_parity() -> Battery {
    const PAIRS: usize = 10_000;
    let mut failures = 0usize;
    for p in [2u32, 3] {
        let mut rng = ChaCha12Rng::seed_from_u64(107);
        for _ in 0..PAIRS {
            let x = random_padic(&mut rng, p);
            let y = random_padic(&mut rng, p);
            let sum_ok = oracle::padic_rational::to_rational(&x.try_add(&y).unwrap())
                == oracle::padic_rational::add(&x, &y);
            let prod_ok = oracle::padic_rational::to_rational(&x.try_mul(&y).unwrap())
                == oracle::padic_rational::mul(&x, &y);
            let val_ok = oracle::rational_norm_exp(&oracle::padic_rational::to_rational(&x), p)
                == x.norm_exp();
            if !(sum_ok && prod_ok && val_ok) {
                failures += 1;
            }
        }
    }
    battery(
        "arithmetic.padic-rational-parity",
        failures == 0,
        format!("{PAIRS} random pairs per p in {{2, 3}}: add/mul against reduced fractions, valuation against division counting"),
    )
}

/// Literal round-trips per ambient.
pub fn battery_literal_roundtrip() -> Battery {
    const LITERALS: usize = 10_000;
    let mut failures = 0usize;
    for ambient in reference_ambients() {
        let mut rng = ChaCha12Rng::seed_from_u64(109);
        for _ in 0..LITERALS {
            match &ambient {
                Ambient::Field(spec) => {
                    let x = random_laurent(&mut rng, spec);
                    if parse_laurent(&x.to_string(), spec).ok() != Some(x) {
                        failures += 1;
                    }
                }
                Ambient::Padic(p) => {
                    let x = random_padic(&mut rng, *p);
                    if parse_padic(&x.to_string(), *p).ok() != Some(x) {
                        failures += 1;
                    }
                }
            }
        }
    }
    battery(
        "arithmetic.literal-roundtrip",
        failures == 0,
        format!("{LITERALS} random elements per ambient survive format -> parse exactly"),
    )
}

pub fn suite_arithmetic() -> Vec<Battery> {
    vec![
        battery_norm_laws(),
        battery_field_axioms(),
        battery_group_order(),
        battery_padic_parity(),
        battery_literal_roundtrip(),
    ]
}

// ---- energy ----

pub fn suite_energy() -> Vec<Battery> {
    let mut out = Vec::new();
    let corpus = standard_corpus();

    // Multiplicity identities on corpus sets up to 64 elements.
    let mut checked = 0usize;
    let mut failures = 0usize;
    for entry in corpus.iter().filter(|e| e.set.len() <= 64) {
        with_set!(&entry.set, |s| {
            for k in [2usize, 3] {
                let m = k_fold_sum(s, k).expect("within budget");
                if m.total() != (s.len() as u128).pow(k as u32) {
                    failures += 1;
                }
                let e = energy(s, k).expect("within budget");
                let second: BigUint = m
                    .iter()
                    .map(|(_, mult)| BigUint::from(mult) * BigUint::from(mult))
                    .sum();
                if e.value != second {
                    failures += 1;
                }
                // Cauchy-Schwarz: |A|^{2k} <= |kA| E_k.
                let lhs = BigUint::from(s.len() as u64).pow(2 * k as u32);
                if lhs > BigUint::from(m.support_size() as u64) * &e.value {
                    failures += 1;
                }
                checked += 1;
            }
            let e1 = energy(s, 1).expect("k = 1");
            if e1.value != BigUint::from(s.len() as u64) {
                failures += 1;
            }
            let m2 = k_fold_sum(s, 2).expect("within budget");
            if m2.support() != sumset(s, s).expect("same ambient") {
                failures += 1;
            }
        });
    }
    out.push(battery(
        "energy.multiplicity-identities",
        failures == 0,
        format!("{checked} (set, k) pairs: total mass |A|^k, E_k as second moment, Cauchy-Schwarz, 2-fold support = sumset"),
    ));

    // The census on separable fixtures: E_k has only trivial solutions.
    let fixtures = separable_fixtures(&[3, 4, 5, 6, 7, 8], &[1, 2]);
    let mut checked = 0usize;
    let mut failures = 0usize;
    for entry in &fixtures {
        with_set!(&entry.set, |s| {
            if is_separable(s).expect("computable").is_none() {
                failures += 1;
            }
            for k in [2usize, 3] {
                let e = energy(s, k).expect("within budget");
                let trivial = trivial_count(s, k).expect("within budget");
                if e.value != BigUint::from(trivial) || e.trivial != Some(trivial) {
                    failures += 1;
                }
                checked += 1;
            }
        });
    }
    out.push(battery(
        "energy.separable-census",
        failures == 0,
        format!("{checked} (set, k) pairs over {} separable fixtures: E_k equals the trivial-solution census exactly", fixtures.len()),
    ));

    // Closed-form cross-check of the census at k = 2.
    let mut failures = 0usize;
    let mut checked = 0usize;
    for entry in &fixtures {
        let char2 = match &entry.set {
            crate::AnySet::Laurent(s) => s.elements()[0].spec().has_characteristic_two() as u64,
            crate::AnySet::Padic(_) => 0,
        };
        with_set!(&entry.set, |s| {
            let n = s.len() as u64;
            let expected = n + 2 * n * (n - 1) + char2 * n * (n - 1);
            if trivial_count(s, 2).expect("within budget") != expected {
                failures += 1;
            }
            checked += 1;
        });
    }
    out.push(battery(
        "energy.census-closed-form",
        failures == 0,
        format!("{checked} fixtures: k = 2 census equals n + 2n(n-1) (+ n(n-1) in characteristic 2)"),
    ));

    // Differential sumset test against the naive oracle.
    let mut checked = 0usize;
    let mut failures = 0usize;
    for entry in corpus.iter().filter(|e| e.set.len() <= 256) {
        with_set!(&entry.set, |s| {
            let fast_sum = sumset(s, s).expect("same ambient");
            if fast_sum.elements() != &oracle::sumset_naive(s, s).expect("same ambient")[..] {
                failures += 1;
            }
            let fast_prod = productset(s, s).expect("same ambient");
            if fast_prod.elements() != &oracle::productset_naive(s, s).expect("same ambient")[..] {
                failures += 1;
            }
            checked += 1;
        });
    }
    out.push(battery(
        "energy.sumset-differential",
        failures == 0,
        format!("{checked} corpus sets (|A| <= 256): hash-aggregated sumset and product set equal the naive double loop"),
    ));

    out
}

// ---- lemmas ----

pub fn suite_lemmas() -> Vec<Battery> {
    let mut out = Vec::new();
    let corpus = standard_corpus();
    let budgets = Budgets::default();

    // Golden values of the monomial family.
    let f2 = Arc::new(FieldSpec::prime(2).unwrap());
    let family = FiniteSet::new(
        (0..=10)
            .map(|j| Laurent::monomial(&f2, j, 1).unwrap())
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let zero = Laurent::zero(&f2);
    let cb = critical_balls(&family).unwrap();
    let balls_contain_zero = cb.items().iter().all(|i| i.ball.contains(&zero).unwrap());
    let report = growth_report(&family, &budgets).unwrap();
    let oracle_sum = oracle::sumset_naive(&family, &family).unwrap().len();
    let oracle_prod = oracle::productset_naive(&family, &family).unwrap().len();
    let golden_ok = balls_contain_zero
        && report.chain.len() == 11
        && report.separable.len() == 10
        && oracle_sum == 56
        && oracle_prod == 21
        && report.sum_size == oracle_sum
        && report.prod_size == oracle_prod;
    out.push(battery(
        "lemmas.monomial-family-goldens",
        golden_ok,
        "t^0..t^10 over F_2: all 11 critical balls contain 0, chain 11, separable 10, |A+A| = 56, |AA| = 21".to_string(),
    ));

    // Chain bound, extraction bound, and class bound on the whole corpus.
    let mut chain_failures = 0usize;
    let mut extraction_failures = 0usize;
    let mut class_failures = 0usize;
    let mut optimality_failures = 0usize;
    let mut small_checked = 0usize;
    for entry in &corpus {
        with_set!(&entry.set, |s| {
            assert!(s.len() >= 2, "corpus sets have >= 2 elements");
            let r = growth_report(s, &budgets).expect("within budget");
            let chain_len = BigRational::from(BigInt::from(r.chain.len() as u64));
            if chain_len < r.chain_bound {
                chain_failures += 1;
            }
            if verify_chain(s, &r.chain).is_err() {
                chain_failures += 1;
            }
            if verify_separable(&r.separable).is_err()
                || (r.separable.len() as u64) < r.sep_bound
                || is_separable(&FiniteSet::new(r.separable.elements.clone()).unwrap())
                    .expect("computable")
                    .is_none()
            {
                extraction_failures += 1;
            }
            let forest = build_forest(&critical_balls(s).expect("size checked"));
            if forest.max_class_size() > s.base() {
                class_failures += 1;
            }
            if s.len() <= 10 {
                small_checked += 1;
                let exhaustive = oracle::longest_chain_exhaustive(s).expect("small set");
                if longest_chain(&forest).len() != exhaustive {
                    optimality_failures += 1;
                }
            }
        });
    }
    out.push(battery(
        "lemmas.chain-bound",
        chain_failures == 0,
        format!(
            "{} corpus sets: longest chain >= |A|^5/(2^7 |A+A|^2 |AA|^2 ceil(log2|A|)^3), exact rationals",
            corpus.len()
        ),
    ));
    out.push(battery(
        "lemmas.chain-optimality-small",
        optimality_failures == 0,
        format!("{small_checked} sets with |A| <= 10: forest chain equals the exhaustive subset search"),
    ));
    out.push(battery(
        "lemmas.extraction-and-class-bound",
        extraction_failures == 0 && class_failures == 0,
        format!(
            "{} corpus sets: extraction is verified separable with size >= ceil(chain/q); every ball class has <= q elements",
            corpus.len()
        ),
    ));

    // Quadratic growth of separable sets: 3 |S+S| >= |S|^2.
    let growth_fixtures = separable_fixtures(&[4, 8, 16, 32, 64], &[3]);
    let mut failures = 0usize;
    for entry in &growth_fixtures {
        with_set!(&entry.set, |s| {
            if is_separable(s).expect("computable").is_none() {
                failures += 1;
            }
            let n = s.len() as u64;
            let sum = sumset(s, s).expect("same ambient").len() as u64;
            if 3 * sum < n * n {
                failures += 1;
            }
        });
    }
    out.push(battery(
        "lemmas.separable-growth",
        failures == 0,
        format!(
            "{} separable sets (sizes 4-64, all ambients): 3 |S+S| >= |S|^2 exactly",
            growth_fixtures.len()
        ),
    ));

    // The sumset-iteration consequence: |2A| |A| <= |A+A|^2.
    let mut checked = 0usize;
    let mut failures = 0usize;
    for entry in corpus.iter().filter(|e| e.set.len() <= 64) {
        with_set!(&entry.set, |s| {
            let n = BigUint::from(s.len() as u64);
            let sum = BigUint::from(sumset(s, s).expect("same ambient").len() as u64);
            let two = BigUint::from(k_fold_sum(s, 2).expect("within budget").support_size() as u64);
            if &two * &n > &sum * &sum {
                failures += 1;
            }
            checked += 1;
        });
    }
    out.push(battery(
        "lemmas.iterated-sumset-bound",
        failures == 0,
        format!("{checked} corpus sets (|A| <= 64): |2A| |A| <= |A+A|^2 as exact integers"),
    ));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_a_usage_error() {
        assert!(matches!(run_suite("bogus"), Err(CliError::Usage(_))));
    }

    #[test]
    fn balls_suite_passes() {
        let (text, pass) = render(&suite_balls());
        assert!(pass, "{text}");
    }
}
