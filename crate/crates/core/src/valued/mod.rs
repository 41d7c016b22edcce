//! Elements of the two ambient valued fields under a shared discrete-
//! valuation interface.
//!
//! Both ambients carry a non-archimedean norm `‖x‖ = base^m` whose exponent
//! `m` is an integer (or `-∞` for zero): `base = q` with `m = deg x` for
//! Laurent elements, `base = p` with `m = -ν_p(x)` for p-adic numbers. The
//! exponent is all the geometry ever consumes, so the real number
//! `base^m` is never materialized and no floating point is involved.

mod laurent;
mod padic;

pub use laurent::Laurent;
pub use padic::Padic;

use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Mixing elements of different ambient fields (different field spec, or a
/// different p) is a usage error, reported rather than panicked on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ambient mismatch: `{left}` vs `{right}`")]
pub struct AmbientMismatch {
    pub left: String,
    pub right: String,
}

/// Norm exponent: `‖x‖ = base^value`, with a `-∞` marker encoding `‖0‖ = 0`.
/// The derived order puts the marker below every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormExponent {
    NegInfinity,
    Finite(i64),
}

impl NormExponent {
    pub fn finite(self) -> Option<i64> {
        match self {
            NormExponent::NegInfinity => None,
            NormExponent::Finite(v) => Some(v),
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        matches!(self, NormExponent::NegInfinity)
    }
}

impl fmt::Display for NormExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormExponent::NegInfinity => write!(f, "-inf"),
            NormExponent::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// An exact element of a non-archimedean valued field.
///
/// The `Ord` instance is the platform-wide canonical order: lexicographic on
/// the canonical serialized literal (with the ambient label as a tie-break so
/// the order stays consistent with `Eq` across ambients). Every deterministic
/// tie-break in the library goes through this single order.
pub trait ValuedElement:
    Clone + Eq + Ord + Hash + fmt::Display + fmt::Debug + Send + Sync + Sized
{
    /// Norm base: `q` for Laurent ambients, `p` for p-adic ones. This is
    /// also the size of the residue field, which caps critical-ball
    /// equivalence classes.
    fn base(&self) -> u64;

    /// Ambient descriptor, e.g. `field: p=2,e=2,modulus=1,1,1` or `padic: p=3`.
    fn ambient_label(&self) -> String;

    fn same_ambient(&self, other: &Self) -> bool;

    fn is_zero(&self) -> bool;

    /// The zero of this element's ambient.
    fn zero_like(&self) -> Self;

    fn try_add(&self, other: &Self) -> Result<Self, AmbientMismatch>;

    fn try_mul(&self, other: &Self) -> Result<Self, AmbientMismatch>;

    fn neg(&self) -> Self;

    fn try_sub(&self, other: &Self) -> Result<Self, AmbientMismatch> {
        self.try_add(&other.neg())
    }

    /// `deg x` for Laurent elements, `-ν_p(x)` for p-adic ones; the `-∞`
    /// marker for zero.
    fn norm_exp(&self) -> NormExponent;

    /// Exponent of `‖x - y‖`; symmetric because `‖x‖ = ‖-x‖`.
    fn dist_exp(&self, other: &Self) -> Result<NormExponent, AmbientMismatch> {
        Ok(self.try_sub(other)?.norm_exp())
    }

    /// Canonical residue of this element modulo the ball `B(·, base^rexp)`:
    /// two elements lie in a common ball of radius exponent `rexp` iff their
    /// residues are equal. Laurent: the sub-element with exponents above
    /// `rexp`. P-adic: the canonical coset representative in
    /// `[0, p^{-rexp})`, computed with denominators cleared so that only
    /// integer arithmetic is involved.
    fn ball_residue(&self, rexp: i64) -> Self;

    fn ambient_mismatch(&self, other: &Self) -> AmbientMismatch {
        AmbientMismatch {
            left: self.ambient_label(),
            right: other.ambient_label(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::sync::Arc;

    #[test]
    fn norm_exponent_order() {
        assert!(NormExponent::NegInfinity < NormExponent::Finite(i64::MIN));
        assert!(NormExponent::Finite(-3) < NormExponent::Finite(0));
        assert_eq!(NormExponent::NegInfinity.finite(), None);
        assert_eq!(NormExponent::Finite(5).finite(), Some(5));
    }

    #[test]
    fn canonical_order_is_total_and_matches_eq() {
        let spec = Arc::new(FieldSpec::prime(2).unwrap());
        let a = Laurent::monomial(&spec, 1, 1).unwrap();
        let b = Laurent::monomial(&spec, 2, 1).unwrap();
        assert!(a < b); // "t" < "t^2" lexicographically
        assert_eq!(a.cmp(&a), std::cmp::Ordering::Equal);
    }
}
