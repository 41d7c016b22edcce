//! Finitely supported Laurent elements of `F_q((1/t))`.
//!
//! Only the subring `F_q[t, 1/t]` is representable. Every finite input set
//! lives there and the subring is closed under `+`, `-`, `×`, so no
//! truncation policy is needed anywhere. Division is deliberately absent.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::field::{FieldElement, FieldError, FieldSpec};

use super::{AmbientMismatch, NormExponent, ValuedElement};

/// A finitely supported element `Σ a_i t^i` with nonzero `a_i ∈ F_q`.
/// Terms are stored sorted by ascending exponent; the zero element has no
/// terms. `deg` is the largest exponent present.
#[derive(Debug, Clone)]
pub struct Laurent {
    spec: Arc<FieldSpec>,
    terms: Vec<(i64, FieldElement)>,
}

impl Laurent {
    /// Builds an element from arbitrary (exponent, coefficient) pairs,
    /// accumulating repeated exponents and pruning zero coefficients.
    pub fn new(
        spec: &Arc<FieldSpec>,
        terms: Vec<(i64, FieldElement)>,
    ) -> Result<Self, FieldError> {
        let mut acc: BTreeMap<i64, FieldElement> = BTreeMap::new();
        for (exp, coeff) in terms {
            if coeff.spec() != spec {
                return Err(FieldError::SpecMismatch);
            }
            match acc.remove(&exp) {
                Some(prev) => {
                    let sum = prev.add(&coeff)?;
                    if !sum.is_zero() {
                        acc.insert(exp, sum);
                    }
                }
                None => {
                    if !coeff.is_zero() {
                        acc.insert(exp, coeff);
                    }
                }
            }
        }
        Ok(Laurent { spec: Arc::clone(spec), terms: acc.into_iter().collect() })
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Laurent { spec: Arc::clone(spec), terms: Vec::new() }
    }

    /// `c * t^exp` for an integer coefficient `c`.
    pub fn monomial(spec: &Arc<FieldSpec>, exp: i64, coeff: i64) -> Result<Self, FieldError> {
        let c = FieldElement::from_int(spec, coeff);
        Self::new(spec, vec![(exp, c)])
    }

    pub fn constant(spec: &Arc<FieldSpec>, value: i64) -> Self {
        Self::monomial(spec, 0, value).expect("constant term")
    }

    pub fn from_field(coeff: FieldElement) -> Self {
        let spec = Arc::clone(coeff.spec());
        Self::new(&spec, vec![(0, coeff)]).expect("same spec")
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &[(i64, FieldElement)] {
        &self.terms
    }

    /// Largest exponent present; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn coeff(&self, exp: i64) -> FieldElement {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => FieldElement::zero(&self.spec),
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<(), AmbientMismatch> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(self.ambient_mismatch(other))
        }
    }
}

impl PartialEq for Laurent {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
            && self.terms == other.terms
    }
}

impl Eq for Laurent {}

impl Hash for Laurent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for (exp, coeff) in &self.terms {
            exp.hash(state);
            coeff.hash(state);
        }
    }
}

impl PartialOrd for Laurent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Laurent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string()
            .cmp(&other.to_string())
            .then_with(|| self.ambient_label().cmp(&other.ambient_label()))
    }
}

impl ValuedElement for Laurent {
    fn base(&self) -> u64 {
        self.spec.q()
    }

    fn ambient_label(&self) -> String {
        format!("field: {}", self.spec)
    }

    fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn zero_like(&self) -> Self {
        Laurent::zero(&self.spec)
    }

    fn try_add(&self, other: &Self) -> Result<Self, AmbientMismatch> {
        self.check_ambient(other)?;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match ea.cmp(eb) {
                Ordering::Less => {
                    out.push((*ea, ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((*eb, cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let sum = ca.add(cb).expect("same spec");
                    if !sum.is_zero() {
                        out.push((*ea, sum));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Ok(Laurent { spec: Arc::clone(&self.spec), terms: out })
    }

    fn try_mul(&self, other: &Self) -> Result<Self, AmbientMismatch> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.zero_like());
        }
        let mut acc: BTreeMap<i64, FieldElement> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = ea + eb;
                let prod = ca.mul(cb).expect("same spec");
                match acc.remove(&exp) {
                    Some(prev) => {
                        let sum = prev.add(&prod).expect("same spec");
                        if !sum.is_zero() {
                            acc.insert(exp, sum);
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            acc.insert(exp, prod);
                        }
                    }
                }
            }
        }
        Ok(Laurent { spec: Arc::clone(&self.spec), terms: acc.into_iter().collect() })
    }

    fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.neg())).collect();
        Laurent { spec: Arc::clone(&self.spec), terms }
    }

    fn norm_exp(&self) -> NormExponent {
        match self.degree() {
            Some(d) => NormExponent::Finite(d),
            None => NormExponent::NegInfinity,
        }
    }

    fn ball_residue(&self, rexp: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| *e > rexp)
            .cloned()
            .collect();
        Laurent { spec: Arc::clone(&self.spec), terms }
    }
}

impl fmt::Display for Laurent {
    /// Canonical form: terms in strictly decreasing exponent order joined by
    /// `" + "`. Prime-field coefficients print bare (`t^3`, `2*t`, `1`);
    /// extension coefficients always print as a full tuple (`(1,1)*t^2`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let tpart = match exp {
                0 => None,
                1 => Some("t".to_string()),
                e => Some(format!("t^{e}")),
            };
            if self.spec.e() == 1 {
                let c = coeff.coeffs()[0];
                match (&tpart, c) {
                    (None, _) => write!(f, "{c}")?,
                    (Some(tp), 1) => write!(f, "{tp}")?,
                    (Some(tp), _) => write!(f, "{c}*{tp}")?,
                }
            } else {
                match &tpart {
                    None => write!(f, "{coeff}")?,
                    Some(tp) => write!(f, "{coeff}*{tp}")?,
                }
            }
        }
        Ok(())
    }
}
