//! Independent reference implementations used to cross-check the fast
//! paths. Everything in here is deliberately naive: plain double loops,
//! point-family membership vectors, exhaustive subset and ordering searches,
//! and off-the-shelf rational arithmetic. None of it shares code with the
//! implementations it checks.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use std::sync::Arc;

use crate::field::FieldSpec;
use crate::geometry::{Ball, BallRelation, GeometryError};
use crate::sumset::FiniteSet;
use crate::valued::{AmbientMismatch, Laurent, NormExponent, Padic, ValuedElement};

/// Sumset by the naive double loop; sort-and-dedup instead of hashing.
pub fn sumset_naive<T: ValuedElement>(
    a: &FiniteSet<T>,
    b: &FiniteSet<T>,
) -> Result<Vec<T>, AmbientMismatch> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x.try_add(y)?);
        }
    }
    out.sort_by_cached_key(|x| x.to_string());
    out.dedup();
    Ok(out)
}

/// Product set by the naive double loop.
pub fn productset_naive<T: ValuedElement>(
    a: &FiniteSet<T>,
    b: &FiniteSet<T>,
) -> Result<Vec<T>, AmbientMismatch> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            out.push(x.try_mul(y)?);
        }
    }
    out.sort_by_cached_key(|x| x.to_string());
    out.dedup();
    Ok(out)
}

/// Compares two balls by their membership vectors over a finite point
/// family. Returns `None` when the vectors are incomparable, which would
/// contradict the containment trichotomy.
pub fn ball_relation_pointwise<T: ValuedElement>(
    b1: &Ball<T>,
    b2: &Ball<T>,
    family: &[T],
) -> Result<Option<BallRelation>, AmbientMismatch> {
    let mut m1 = Vec::with_capacity(family.len());
    let mut m2 = Vec::with_capacity(family.len());
    for x in family {
        m1.push(b1.contains(x)?);
        m2.push(b2.contains(x)?);
    }
    let common = m1.iter().zip(&m2).any(|(&a, &b)| a && b);
    if !common {
        return Ok(Some(BallRelation::Disjoint));
    }
    let one_in_two = m1.iter().zip(&m2).all(|(&a, &b)| !a || b);
    let two_in_one = m1.iter().zip(&m2).all(|(&a, &b)| !b || a);
    Ok(match (one_in_two, two_in_one) {
        (true, true) => Some(BallRelation::Equal),
        (true, false) => Some(BallRelation::Subset),
        (false, true) => Some(BallRelation::Superset),
        (false, false) => None,
    })
}

/// All Laurent elements with support inside the exponent window
/// `[lo, hi]` — a covering point family for balls whose centers and radii
/// live in the window.
pub fn laurent_point_family(spec: &Arc<FieldSpec>, lo: i64, hi: i64) -> Vec<Laurent> {
    let q = spec.q();
    let span = (hi - lo + 1) as u32;
    let total = q.checked_pow(span).expect("family fits in memory");
    assert!(total <= 1_000_000, "point family too large");
    let field_elems = crate::field::enumerate_elements(spec);
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; span as usize];
    loop {
        let mut terms = Vec::new();
        for (slot, &d) in digits.iter().enumerate() {
            if d != 0 {
                terms.push((lo + slot as i64, field_elems[d].clone()));
            }
        }
        out.push(Laurent::new(spec, terms).expect("same spec"));
        let mut i = 0;
        loop {
            if i == digits.len() {
                return out;
            }
            digits[i] += 1;
            if digits[i] < q as usize {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Longest chain by exhaustive subset search: a subset is a chain iff its
/// critical balls (taken in the full set) pairwise nest. Only for
/// `|A| ≤ 20`.
pub fn longest_chain_exhaustive<T: ValuedElement>(
    set: &FiniteSet<T>,
) -> Result<usize, GeometryError> {
    let n = set.len();
    assert!(n <= 20, "exhaustive chain search is exponential");
    let cb = crate::geometry::critical_balls(set)?;
    let balls: Vec<Ball<T>> = cb.items().iter().map(|i| i.ball.clone()).collect();
    let mut best = 0usize;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
        let mut ok = true;
        'pairs: for (ai, &i) in members.iter().enumerate() {
            for &j in &members[ai + 1..] {
                let rel = crate::geometry::ball_compare(&balls[i], &balls[j])?;
                if rel == BallRelation::Disjoint {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            best = size;
        }
    }
    Ok(best)
}

/// Separability by exhaustive search over all orderings, using minimal
/// enclosing balls as witnesses (any witness can be shrunk to the minimal
/// ball of its prefix, so this loses no generality). Only for `|S| ≤ 8`.
pub fn separable_exhaustive<T: ValuedElement>(
    set: &FiniteSet<T>,
) -> Result<Option<Vec<T>>, AmbientMismatch> {
    let elems = set.elements();
    let n = elems.len();
    assert!(n <= 8, "exhaustive ordering search is factorial");
    if n == 1 {
        return Ok(Some(elems.to_vec()));
    }
    let mut dist = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = elems[i].dist_exp(&elems[j])?.finite().expect("distinct");
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        if ordering_works(&order, &dist) {
            return Ok(Some(order.iter().map(|&i| elems[i].clone()).collect()));
        }
        if !next_permutation(&mut order) {
            return Ok(None);
        }
    }
}

/// Checks one candidate ordering: for every prefix, the minimal enclosing
/// ball (radius = prefix diameter from the first element; below the nearest
/// neighbor for the singleton prefix) must exclude all later elements.
fn ordering_works(order: &[usize], dist: &[Vec<i64>]) -> bool {
    let n = order.len();
    let first = order[0];
    let min_to_rest = (0..n)
        .filter(|&x| x != first)
        .map(|x| dist[first][x])
        .min()
        .expect("n >= 2");
    let mut radius = min_to_rest - 1;
    for j in 0..n {
        if j > 0 {
            radius = radius.max(dist[first][order[j]]);
        }
        for &later in &order[j + 1..] {
            if dist[first][later] <= radius {
                return false;
            }
        }
    }
    true
}

/// Lexicographic next permutation; returns false after the last one.
fn next_permutation(arr: &mut [usize]) -> bool {
    let n = arr.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// Off-the-shelf rational-arithmetic oracle for the p-adic ambient: converts
/// to reduced fractions, operates there, and measures the valuation by
/// literally counting divisions.
pub mod padic_rational {
    use super::*;

    pub fn to_rational(x: &Padic) -> BigRational {
        let denom = BigInt::from(x.p()).pow(x.sexp());
        BigRational::new(x.num().clone(), denom)
    }

    pub fn add(x: &Padic, y: &Padic) -> BigRational {
        to_rational(x) + to_rational(y)
    }

    pub fn mul(x: &Padic, y: &Padic) -> BigRational {
        to_rational(x) * to_rational(y)
    }

    /// p-adic valuation of a reduced fraction by repeated division.
    pub fn valuation_by_division(x: &BigRational, p: u32) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(count_factors(&x.numer().abs(), p) - count_factors(&x.denom().abs(), p))
    }

    fn count_factors(n: &BigInt, p: u32) -> i64 {
        let pb = BigInt::from(p);
        let mut m = n.clone();
        let mut count = 0;
        loop {
            let (q, r) = num::Integer::div_rem(&m, &pb);
            if r.is_zero() && !m.is_zero() {
                count += 1;
                m = q;
            } else {
                return count;
            }
        }
    }
}

/// Norm exponent read off a rational: `-ν` as an exponent, `-∞` for zero.
pub fn rational_norm_exp(x: &BigRational, p: u32) -> NormExponent {
    match padic_rational::valuation_by_division(x, p) {
        None => NormExponent::NegInfinity,
        Some(v) => NormExponent::Finite(-v),
    }
}
