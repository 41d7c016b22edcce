//! Sumsets, product sets, k-fold representation multiplicities, additive
//! energy, and the trivial-solution census.
//!
//! Energy is always computed from convolution multiplicities, never by
//! enumerating 2k-tuples; the tuple enumeration lives only in
//! [`trivial_count`], which doubles as the independent oracle for the
//! separable-set energy identity.

use std::collections::HashMap;

use num::bigint::BigUint;
use thiserror::Error;

use crate::valued::{AmbientMismatch, ValuedElement};

/// Largest k accepted by the k-fold operations.
pub const MAX_K: usize = 6;

/// Hard cap on `|A|^{2k}` for the trivial-solution census.
pub const TRIVIAL_BUDGET: u128 = 100_000_000;

/// Cap on intermediate convolution support, to fail loudly instead of
/// exhausting memory on absurd (k, |A|) combinations.
pub const SUPPORT_LIMIT: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("a finite set must be non-empty")]
    Empty,
    #[error(transparent)]
    Ambient(#[from] AmbientMismatch),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnergyError {
    #[error("k = {0} is out of range (1 ..= {MAX_K})")]
    KOutOfRange(usize),
    #[error("computation of size {cost} exceeds the budget {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },
    #[error("multiplicity overflow")]
    Overflow,
    #[error(transparent)]
    Ambient(#[from] AmbientMismatch),
}

/// A non-empty, deduplicated finite set in one ambient field, kept in the
/// canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet<T: ValuedElement> {
    elements: Vec<T>,
}

impl<T: ValuedElement> FiniteSet<T> {
    pub fn new(mut elements: Vec<T>) -> Result<Self, SetError> {
        let first = elements.first().ok_or(SetError::Empty)?.clone();
        for x in &elements {
            if !first.same_ambient(x) {
                return Err(first.ambient_mismatch(x).into());
            }
        }
        elements.sort_by_cached_key(|x| x.to_string());
        elements.dedup();
        Ok(FiniteSet { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Norm base of the ambient (q or p); also the residue-field size.
    pub fn base(&self) -> u64 {
        self.elements[0].base()
    }

    pub fn ambient_label(&self) -> String {
        self.elements[0].ambient_label()
    }

    fn check_ambient(&self, other: &Self) -> Result<(), AmbientMismatch> {
        if self.elements[0].same_ambient(&other.elements[0]) {
            Ok(())
        } else {
            Err(self.elements[0].ambient_mismatch(&other.elements[0]))
        }
    }
}

/// `A + B = {a + b}`, deduplicated, via hash aggregation.
pub fn sumset<T: ValuedElement>(
    a: &FiniteSet<T>,
    b: &FiniteSet<T>,
) -> Result<FiniteSet<T>, SetError> {
    a.check_ambient(b)?;
    let mut out = HashMap::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            let s = x.try_add(y)?;
            out.insert(s, ());
        }
    }
    FiniteSet::new(out.into_keys().collect())
}

/// `A · B = {a b}`, deduplicated, via hash aggregation.
pub fn productset<T: ValuedElement>(
    a: &FiniteSet<T>,
    b: &FiniteSet<T>,
) -> Result<FiniteSet<T>, SetError> {
    a.check_ambient(b)?;
    let mut out = HashMap::with_capacity(a.len() * b.len());
    for x in a.iter() {
        for y in b.iter() {
            let s = x.try_mul(y)?;
            out.insert(s, ());
        }
    }
    FiniteSet::new(out.into_keys().collect())
}

/// The representation-count map of the k-fold sumset: `μ(x)` is the number
/// of ordered k-tuples summing to `x`. `Σ μ(x) = |A|^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityMap<T: ValuedElement> {
    k: usize,
    map: HashMap<T, u64>,
}

impl<T: ValuedElement> MultiplicityMap<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn support_size(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, x: &T) -> u64 {
        self.map.get(x).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, u64)> {
        self.map.iter().map(|(x, &m)| (x, m))
    }

    /// Total mass `Σ μ(x)`.
    pub fn total(&self) -> u128 {
        self.map.values().map(|&m| u128::from(m)).sum()
    }

    /// Support as a canonical set.
    pub fn support(&self) -> FiniteSet<T> {
        FiniteSet::new(self.map.keys().cloned().collect()).expect("non-empty support")
    }
}

/// Exact `μ` over `kA` by iterated convolution.
pub fn k_fold_sum<T: ValuedElement>(
    a: &FiniteSet<T>,
    k: usize,
) -> Result<MultiplicityMap<T>, EnergyError> {
    if k == 0 || k > MAX_K {
        return Err(EnergyError::KOutOfRange(k));
    }
    let mut map: HashMap<T, u64> = a.iter().map(|x| (x.clone(), 1)).collect();
    for _ in 1..k {
        let mut next: HashMap<T, u64> = HashMap::with_capacity(map.len());
        for (x, m) in &map {
            for y in a.iter() {
                let s = x.try_add(y)?;
                let slot = next.entry(s).or_insert(0);
                *slot = slot.checked_add(*m).ok_or(EnergyError::Overflow)?;
            }
            if next.len() > SUPPORT_LIMIT {
                return Err(EnergyError::BudgetExceeded {
                    cost: next.len() as u128,
                    budget: SUPPORT_LIMIT as u128,
                });
            }
        }
        map = next;
    }
    Ok(MultiplicityMap { k, map })
}

/// k-fold additive energy: the number of 2k-tuples with
/// `a_1 + … + a_k = b_1 + … + b_k`, plus the trivial-solution count when the
/// census fits the budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyValue {
    pub k: usize,
    pub value: BigUint,
    pub trivial: Option<u64>,
}

/// `E_k(A) = Σ_x μ(x)^2`, from the convolution multiplicities. The trivial
/// count is filled by [`trivial_count`] when `|A|^{2k} ≤ 10^8` and left
/// absent otherwise.
pub fn energy<T: ValuedElement>(a: &FiniteSet<T>, k: usize) -> Result<EnergyValue, EnergyError> {
    let mm = k_fold_sum(a, k)?;
    let mut value = BigUint::ZERO;
    for (_, m) in mm.iter() {
        value += BigUint::from(m) * BigUint::from(m);
    }
    let cost = (a.len() as u128).checked_pow(2 * k as u32);
    let trivial = match cost {
        Some(c) if c <= TRIVIAL_BUDGET => Some(trivial_count(a, k)?),
        _ => None,
    };
    Ok(EnergyValue { k, value, trivial })
}

/// Exact count of 2k-tuples solving the energy equation with at most k
/// distinct elements among all 2k coordinates. Brute-force census over
/// ordered k-tuples grouped by sum; refuses to run past `|A|^{2k} > 10^8`.
pub fn trivial_count<T: ValuedElement>(a: &FiniteSet<T>, k: usize) -> Result<u64, EnergyError> {
    if k == 0 || k > MAX_K {
        return Err(EnergyError::KOutOfRange(k));
    }
    let n = a.len();
    let cost = (n as u128)
        .checked_pow(2 * k as u32)
        .ok_or(EnergyError::Overflow)?;
    if cost > TRIVIAL_BUDGET {
        return Err(EnergyError::BudgetExceeded { cost, budget: TRIVIAL_BUDGET });
    }
    // Enumerate ordered k-tuples of indices; bucket them by their sum
    // together with the sorted list of distinct indices used.
    let elems = a.elements();
    let mut buckets: HashMap<T, Vec<Vec<u16>>> = HashMap::new();
    let mut idx = vec![0usize; k];
    loop {
        let mut sum = elems[idx[0]].clone();
        for &i in &idx[1..] {
            sum = sum.try_add(&elems[i])?;
        }
        let mut used: Vec<u16> = idx.iter().map(|&i| i as u16).collect();
        used.sort_unstable();
        used.dedup();
        buckets.entry(sum).or_default().push(used);
        // Odometer step.
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(count_trivial_pairs(&buckets, k));
            }
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn count_trivial_pairs<T: ValuedElement>(buckets: &HashMap<T, Vec<Vec<u16>>>, k: usize) -> u64 {
    let mut count = 0u64;
    for tuples in buckets.values() {
        for left in tuples {
            for right in tuples {
                if merged_distinct_at_most(left, right, k) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Counts the distinct values in the merge of two sorted deduped lists,
/// returning whether the count stays within `limit`.
fn merged_distinct_at_most(a: &[u16], b: &[u16], limit: usize) -> bool {
    let (mut i, mut j, mut distinct) = (0usize, 0usize, 0usize);
    while i < a.len() || j < b.len() {
        distinct += 1;
        if distinct > limit {
            return false;
        }
        if i < a.len() && (j == b.len() || a[i] < b[j]) {
            i += 1;
        } else if j < b.len() && (i == a.len() || b[j] < a[i]) {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    true
}
