//! Exact `Z[1/p]` representatives of `Q_p`.
//!
//! Elements are stored as `num / p^sexp` with an arbitrary-precision
//! numerator, canonicalized so that `sexp = 0` or `p ∤ num` (and `num = 0`
//! forces `sexp = 0`). Digit streams are deliberately not used: negating a
//! finite digit expansion has an infinite expansion, so finite digit support
//! is not closed under ring operations, while `Z[1/p]` is. Every norm and
//! ball predicate depends only on the valuation, which rationals deliver
//! exactly.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::Zero;

use crate::field::FieldError;

use super::{AmbientMismatch, NormExponent, ValuedElement};

/// An element of `Z[1/p]`, value `num / p^sexp`, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Padic {
    p: u32,
    num: BigInt,
    sexp: u32,
}

fn prime_check(p: u32) -> Result<(), FieldError> {
    if p < 2 {
        return Err(FieldError::NotPrime(p));
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return Err(FieldError::NotPrime(p));
        }
        d += 1;
    }
    Ok(())
}

impl Padic {
    /// Builds `num / p^sexp`, validating that `p` is prime and
    /// canonicalizing the representation.
    pub fn new(p: u32, num: BigInt, sexp: u32) -> Result<Self, FieldError> {
        prime_check(p)?;
        Ok(Self::canonical(p, num, sexp))
    }

    pub fn from_integer(p: u32, n: i64) -> Result<Self, FieldError> {
        Self::new(p, BigInt::from(n), 0)
    }

    pub(crate) fn canonical(p: u32, mut num: BigInt, mut sexp: u32) -> Self {
        if num.is_zero() {
            return Padic { p, num, sexp: 0 };
        }
        let pb = BigInt::from(p);
        while sexp > 0 {
            let (q, r) = num.div_rem(&pb);
            if r.is_zero() {
                num = q;
                sexp -= 1;
            } else {
                break;
            }
        }
        Padic { p, num, sexp }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn sexp(&self) -> u32 {
        self.sexp
    }

    /// Exact p-adic valuation; `None` encodes `ν(0) = ∞`.
    pub fn valuation(&self) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        if self.sexp > 0 {
            // Canonical form: p does not divide num.
            return Some(-i64::from(self.sexp));
        }
        let pb = BigInt::from(self.p);
        let mut v = 0i64;
        let mut m = self.num.clone();
        loop {
            let (q, r) = m.div_rem(&pb);
            if r.is_zero() {
                v += 1;
                m = q;
            } else {
                return Some(v);
            }
        }
    }

    fn check_ambient(&self, other: &Self) -> Result<(), AmbientMismatch> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(self.ambient_mismatch(other))
        }
    }

    fn pow_p(&self, k: u32) -> BigInt {
        BigInt::from(self.p).pow(k)
    }
}

impl Hash for Padic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.sexp.hash(state);
    }
}

impl PartialOrd for Padic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Padic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string()
            .cmp(&other.to_string())
            .then_with(|| self.p.cmp(&other.p))
    }
}

impl ValuedElement for Padic {
    fn base(&self) -> u64 {
        u64::from(self.p)
    }

    fn ambient_label(&self) -> String {
        format!("padic: p={}", self.p)
    }

    fn same_ambient(&self, other: &Self) -> bool {
        self.p == other.p
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn zero_like(&self) -> Self {
        Padic { p: self.p, num: BigInt::zero(), sexp: 0 }
    }

    fn try_add(&self, other: &Self) -> Result<Self, AmbientMismatch> {
        self.check_ambient(other)?;
        let s = self.sexp.max(other.sexp);
        let num = &self.num * self.pow_p(s - self.sexp) + &other.num * self.pow_p(s - other.sexp);
        Ok(Padic::canonical(self.p, num, s))
    }

    fn try_mul(&self, other: &Self) -> Result<Self, AmbientMismatch> {
        self.check_ambient(other)?;
        let num = &self.num * &other.num;
        Ok(Padic::canonical(self.p, num, self.sexp + other.sexp))
    }

    fn neg(&self) -> Self {
        Padic { p: self.p, num: -&self.num, sexp: self.sexp }
    }

    fn norm_exp(&self) -> NormExponent {
        match self.valuation() {
            None => NormExponent::NegInfinity,
            Some(v) => NormExponent::Finite(-v),
        }
    }

    fn ball_residue(&self, rexp: i64) -> Self {
        // Membership in B(x, p^rexp) is x ≡ y (mod p^{-rexp}); clearing the
        // denominator by p^sexp turns this into an integer congruence
        // modulo p^{sexp - rexp}. The representative in [0, p^{-rexp}) is
        // independent of the clearing exponent.
        let scale = i64::from(self.sexp) - rexp;
        if scale <= 0 {
            return self.zero_like();
        }
        let modulus = self.pow_p(scale as u32);
        let r = self.num.mod_floor(&modulus);
        Padic::canonical(self.p, r, self.sexp)
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sexp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}^{}", self.num, self.p, self.sexp)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3(n: i64, s: u32) -> Padic {
        Padic::new(3, BigInt::from(n), s).unwrap()
    }

    #[test]
    fn exact_rational_addition() {
        // 1/3 + 2/3 = 1, valuation 0.
        let x = q3(1, 1);
        let y = q3(2, 1);
        let sum = x.try_add(&y).unwrap();
        assert_eq!(sum, q3(1, 0));
        assert_eq!(sum.valuation(), Some(0));
    }

    #[test]
    fn canonical_form() {
        // 6/3 canonicalizes to 2.
        let x = q3(6, 1);
        assert_eq!(x.num(), &BigInt::from(2));
        assert_eq!(x.sexp(), 0);
        // 0/3^5 is plain 0.
        let z = q3(0, 5);
        assert_eq!(z.sexp(), 0);
        assert!(z.is_zero());
    }

    #[test]
    fn norm_exponent_examples() {
        // ‖18‖_3 = 3^{-2}.
        let x = q3(18, 0);
        assert_eq!(x.norm_exp(), NormExponent::Finite(-2));
        assert_eq!(q3(0, 0).norm_exp(), NormExponent::NegInfinity);
        // ν(1/3) = -1 so the exponent is 1.
        assert_eq!(q3(1, 1).norm_exp(), NormExponent::Finite(1));
    }

    #[test]
    fn distance_example() {
        // v_2(5 - 1) = 2.
        let one = Padic::from_integer(2, 1).unwrap();
        let five = Padic::from_integer(2, 5).unwrap();
        assert_eq!(one.dist_exp(&five).unwrap(), NormExponent::Finite(-2));
    }

    #[test]
    fn residues_are_canonical_coset_representatives() {
        let x = Padic::new(2, BigInt::from(7), 1).unwrap(); // 7/2
        let r = x.ball_residue(-3);
        assert_eq!(r, Padic::new(2, BigInt::from(7), 1).unwrap());
        // -1 mod 9 is 8.
        let y = q3(-1, 0);
        assert_eq!(y.ball_residue(-2), q3(8, 0));
        // Everything collapses once the ball swallows the element.
        assert!(y.ball_residue(5).is_zero());
    }

    #[test]
    fn residues_agree_for_equivalent_scalings() {
        // 7/2 and 7/2 + 8 share a ball of radius 2^{-3}.
        let x = Padic::new(2, BigInt::from(7), 1).unwrap();
        let y = x.try_add(&Padic::from_integer(2, 8).unwrap()).unwrap();
        assert_eq!(x.ball_residue(-3), y.ball_residue(-3));
        assert_ne!(x.ball_residue(-4), y.ball_residue(-4));
    }

    #[test]
    fn mismatched_primes_error() {
        let a = Padic::from_integer(2, 1).unwrap();
        let b = Padic::from_integer(3, 1).unwrap();
        assert!(a.try_add(&b).is_err());
        assert!(a.try_mul(&b).is_err());
    }

    #[test]
    fn non_prime_p_rejected() {
        assert!(Padic::from_integer(4, 1).is_err());
        assert!(Padic::from_integer(1, 1).is_err());
    }
}
