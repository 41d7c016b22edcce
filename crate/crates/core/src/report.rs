//! Growth statistics for one set: sumset and product-set sizes, energy,
//! chain and separable certificates, and the exact bound values they are
//! measured against.

use num::bigint::BigInt;
use num::rational::BigRational;
use thiserror::Error;

use crate::geometry::{
    build_forest, chain_bound, critical_balls, extract_separable, longest_chain,
    ChainCertificate, GeometryError, SeparableCertificate,
};
use crate::sumset::{energy, productset, sumset, EnergyError, EnergyValue, FiniteSet, SetError};
use crate::valued::ValuedElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReportError {
    #[error("growth statistics need at least two elements")]
    Singleton,
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Desk-scale computation limits, overridable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Largest set accepted for full statistics.
    pub max_size: usize,
    /// Cap on the work (measured in map entries, `|A|^k`) any energy
    /// computation may take; past it the energy fields are left absent.
    pub energy_budget: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_size: 512, energy_budget: 100_000_000 }
    }
}

/// Everything measured about one input set.
#[derive(Debug, Clone)]
pub struct GrowthReport<T: ValuedElement> {
    pub size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    /// `E_2(A)`; absent when the budget rules it out.
    pub energy2: Option<EnergyValue>,
    pub chain: ChainCertificate<T>,
    /// Guaranteed chain length for these sizes, as an exact rational.
    pub chain_bound: BigRational,
    pub separable: SeparableCertificate<T>,
    /// `⌈chain length / base⌉`: what extraction is guaranteed to reach.
    pub sep_bound: u64,
    /// `|A|^5 / (q |A+A|^2 |AA|^2 ⌈log2|A|⌉^3)`, the quantity the chain and
    /// extraction pipeline converts into separable structure.
    pub k_value: BigRational,
    /// `log(max(|A+A|, |AA|)) / log|A| - 1`, as a 6-digit decimal string.
    /// Purely descriptive; never used in a comparison.
    pub delta_hat: String,
}

fn ceil_log2(n: u64) -> u64 {
    u64::from((n - 1).ilog2()) + 1
}

/// The exact rational `|A|^5 / (q S^2 P^2 ⌈log2|A|⌉^3)`.
pub fn k_quantity(size_a: usize, size_sum: usize, size_prod: usize, base: u64) -> BigRational {
    let log = BigInt::from(ceil_log2(size_a as u64));
    let numer = BigInt::from(size_a).pow(5);
    let denom = BigInt::from(base)
        * BigInt::from(size_sum).pow(2)
        * BigInt::from(size_prod).pow(2)
        * log.pow(3);
    BigRational::new(numer, denom)
}

/// Computes the full growth report for a set of at least two elements.
pub fn growth_report<T: ValuedElement>(
    set: &FiniteSet<T>,
    budgets: &Budgets,
) -> Result<GrowthReport<T>, ReportError> {
    let n = set.len();
    if n < 2 {
        return Err(ReportError::Singleton);
    }
    let sum = sumset(set, set)?;
    let prod = productset(set, set)?;
    let energy2 = if (n as u128).pow(2) <= budgets.energy_budget {
        Some(energy(set, 2)?)
    } else {
        None
    };
    let assignment = critical_balls(set)?;
    let forest = build_forest(&assignment);
    let chain = longest_chain(&forest);
    let separable = extract_separable(&chain);
    let bound = chain_bound(n, sum.len(), prod.len())?;
    let base = set.base();
    let sep_bound = (chain.len() as u64).div_ceil(base);
    let k_value = k_quantity(n, sum.len(), prod.len(), base);
    let max_growth = sum.len().max(prod.len()) as f64;
    let delta_hat = format!("{:.6}", max_growth.ln() / (n as f64).ln() - 1.0);
    Ok(GrowthReport {
        size: n,
        sum_size: sum.len(),
        prod_size: prod.len(),
        energy2,
        chain,
        chain_bound: bound,
        separable,
        sep_bound,
        k_value,
        delta_hat,
    })
}

/// One CSV/JSON row of a growth report. The column set and order are frozen:
/// family, ambient, n, sum_size, prod_size, e2, chain_len, chain_bound,
/// sep_len, sep_bound, k_value, delta_hat. New columns append only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub family: String,
    pub ambient: String,
    pub n: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    pub e2: Option<String>,
    pub chain_len: usize,
    pub chain_bound: String,
    pub sep_len: usize,
    pub sep_bound: u64,
    pub k_value: String,
    pub delta_hat: String,
}

impl ReportRow {
    pub fn from_report<T: ValuedElement>(
        family: &str,
        ambient: &str,
        report: &GrowthReport<T>,
    ) -> Self {
        ReportRow {
            family: family.to_string(),
            ambient: ambient.to_string(),
            n: report.size,
            sum_size: report.sum_size,
            prod_size: report.prod_size,
            e2: report.energy2.as_ref().map(|e| e.value.to_string()),
            chain_len: report.chain.len(),
            chain_bound: report.chain_bound.to_string(),
            sep_len: report.separable.len(),
            sep_bound: report.sep_bound,
            k_value: report.k_value.to_string(),
            delta_hat: report.delta_hat.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::geometry::{verify_chain, verify_separable};
    use crate::valued::Laurent;
    use std::sync::Arc;

    fn monomial_family(n: i64) -> FiniteSet<Laurent> {
        let spec = Arc::new(FieldSpec::prime(2).unwrap());
        FiniteSet::new(
            (0..=n)
                .map(|j| Laurent::monomial(&spec, j, 1).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn monomial_family_report() {
        let a = monomial_family(10);
        let r = growth_report(&a, &Budgets::default()).unwrap();
        assert_eq!(r.size, 11);
        assert_eq!(r.sum_size, 56);
        assert_eq!(r.prod_size, 21);
        assert_eq!(r.chain.len(), 11);
        assert_eq!(r.separable.len(), 10);
        assert_eq!(r.sep_bound, 6);
        verify_chain(&a, &r.chain).unwrap();
        verify_separable(&r.separable).unwrap();
        // Bound below measured chain length, exactly.
        assert!(BigRational::from(BigInt::from(r.chain.len() as u64)) >= r.chain_bound);
        // Sum-driven growth: delta is visibly positive.
        assert!(r.delta_hat.parse::<f64>().unwrap() > 0.5);
        assert!(r.sum_size > r.prod_size);
    }

    #[test]
    fn constants_have_no_growth() {
        let spec = Arc::new(FieldSpec::extension(2, 2, &[1, 1, 1]).unwrap());
        let consts: Vec<Laurent> = crate::field::enumerate_elements(&spec)
            .into_iter()
            .map(Laurent::from_field)
            .collect();
        let a = FiniteSet::new(consts).unwrap();
        let r = growth_report(&a, &Budgets::default()).unwrap();
        assert!(r.sum_size <= 4);
        assert!(r.prod_size <= 4);
        assert_eq!(r.delta_hat, "0.000000");
    }

    #[test]
    fn singleton_is_rejected() {
        let spec = Arc::new(FieldSpec::prime(2).unwrap());
        let a = FiniteSet::new(vec![Laurent::zero(&spec)]).unwrap();
        assert!(matches!(
            growth_report(&a, &Budgets::default()),
            Err(ReportError::Singleton)
        ));
    }

    #[test]
    fn k_quantity_scales_with_base() {
        // Same sizes, larger base: smaller K.
        let k2 = k_quantity(16, 16, 16, 2);
        let k4 = k_quantity(16, 16, 16, 4);
        assert_eq!(k2, k4 * BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn rows_serialize_all_columns() {
        let a = monomial_family(4);
        let r = growth_report(&a, &Budgets::default()).unwrap();
        let row = ReportRow::from_report("monomials", &a.ambient_label(), &r);
        assert_eq!(row.n, 5);
        assert!(row.e2.is_some());
        assert!(!row.chain_bound.is_empty());
    }
}
