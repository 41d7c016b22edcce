//! Exact arithmetic in finite fields `F_q`, `q = p^e`.
//!
//! A [`FieldSpec`] pins the field once (characteristic, extension degree,
//! modulus) and is shared behind an [`Arc`]; a [`FieldElement`] is an
//! immutable coefficient vector over `F_p`, little-endian in the extension
//! generator. Extension fields require a caller-supplied irreducible
//! modulus; there is no built-in polynomial table.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Field size cap: keeps every intermediate product inside 64-bit arithmetic.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {q} exceeds the 2^16 cap")]
    FieldTooLarge { q: u64 },
    #[error("invalid extension degree {0}")]
    BadDegree(usize),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("elements belong to different field specs")]
    SpecMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("coefficient vector of length {len} does not fit extension degree {e}")]
    CoefficientRange { len: usize, e: usize },
}

/// Description of a finite field `F_{p^e}`.
///
/// For `e = 1` no modulus is stored; for `e > 1` the modulus is a monic
/// irreducible polynomial of degree `e` over `F_p`, stored little-endian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    e: usize,
    modulus: Option<Vec<u32>>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if u64::from(p) > MAX_FIELD_SIZE {
            return Err(FieldError::FieldTooLarge { q: u64::from(p) });
        }
        Ok(FieldSpec { p, e: 1, modulus: None })
    }

    /// The extension field `F_{p^e}` with the given monic irreducible
    /// modulus (`e + 1` little-endian coefficients).
    pub fn extension(p: u32, e: usize, modulus: &[i64]) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e < 2 {
            return Err(FieldError::BadDegree(e));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.saturating_mul(u64::from(p));
            if q > MAX_FIELD_SIZE {
                return Err(FieldError::FieldTooLarge { q });
            }
        }
        if modulus.len() != e + 1 {
            return Err(FieldError::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                e + 1,
                modulus.len()
            )));
        }
        let reduced: Vec<u32> = modulus
            .iter()
            .map(|&c| (c.rem_euclid(i64::from(p))) as u32)
            .collect();
        if reduced[e] != 1 {
            return Err(FieldError::InvalidModulus("modulus is not monic".into()));
        }
        let spec = FieldSpec { p, e, modulus: Some(reduced) };
        spec.check_irreducible()?;
        Ok(spec)
    }

    /// Parses the textual form `p=3` or `p=2,e=2,modulus=1,1,1`.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let text = text.trim();
        let (kvpart, modpart) = match text.find("modulus=") {
            Some(idx) => (&text[..idx], Some(&text[idx + "modulus=".len()..])),
            None => (text, None),
        };
        let mut p: Option<u32> = None;
        let mut e: Option<usize> = None;
        for item in kvpart.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| FieldError::InvalidSpec(format!("bad item `{item}`")))?;
            match key.trim() {
                "p" => {
                    p = Some(value.trim().parse().map_err(|_| {
                        FieldError::InvalidSpec(format!("bad characteristic `{value}`"))
                    })?)
                }
                "e" => {
                    e = Some(value.trim().parse().map_err(|_| {
                        FieldError::InvalidSpec(format!("bad extension degree `{value}`"))
                    })?)
                }
                other => {
                    return Err(FieldError::InvalidSpec(format!("unknown key `{other}`")));
                }
            }
        }
        let p = p.ok_or_else(|| FieldError::InvalidSpec("missing p".into()))?;
        match (e, modpart) {
            (None, None) | (Some(1), None) => FieldSpec::prime(p),
            (Some(e), Some(modtext)) => {
                let coeffs: Result<Vec<i64>, _> = modtext
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect();
                let coeffs = coeffs.map_err(|_| {
                    FieldError::InvalidSpec(format!("bad modulus coefficients `{modtext}`"))
                })?;
                FieldSpec::extension(p, e, &coeffs)
            }
            (Some(_), None) => Err(FieldError::InvalidSpec(
                "extension degree given without modulus".into(),
            )),
            (None, Some(_)) => Err(FieldError::InvalidSpec(
                "modulus given without extension degree".into(),
            )),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// Field size `q = p^e`.
    pub fn q(&self) -> u64 {
        (0..self.e).fold(1u64, |acc, _| acc * u64::from(self.p))
    }

    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// Characteristic-2 fields need special-casing in trivial-solution
    /// counting, where `x + x = 0` creates extra coincidences.
    pub fn has_characteristic_two(&self) -> bool {
        self.p == 2
    }

    fn check_irreducible(&self) -> Result<(), FieldError> {
        let f: Vec<u64> = self
            .modulus
            .as_ref()
            .expect("extension spec")
            .iter()
            .map(|&c| u64::from(c))
            .collect();
        let p = u64::from(self.p);
        if self.e <= 3 {
            // Degree 2 or 3: irreducible over F_p iff it has no roots.
            for x in 0..p {
                let mut acc = 0u64;
                for &c in f.iter().rev() {
                    acc = (acc * x + c) % p;
                }
                if acc == 0 {
                    return Err(FieldError::InvalidModulus(format!(
                        "modulus has root {x} in F_{p}"
                    )));
                }
            }
            return Ok(());
        }
        // Degree > 3: gcd-with-Frobenius test. f of degree e is irreducible
        // iff x^{p^e} = x (mod f) and gcd(x^{p^{e/r}} - x, f) = 1 for every
        // prime r dividing e.
        let x = vec![0, 1];
        let frob_e = frobenius_power(&x, self.e, &f, p);
        if frob_e != x {
            return Err(FieldError::InvalidModulus(
                "x^{p^e} != x mod f".into(),
            ));
        }
        for r in prime_divisors(self.e) {
            let g = frobenius_power(&x, self.e / r, &f, p);
            let diff = poly_sub(&g, &x, p);
            let gcd = poly_gcd(&diff, &f, p);
            if poly_degree(&gcd) != Some(0) {
                return Err(FieldError::InvalidModulus(format!(
                    "f shares a factor with x^{{p^{{e/{r}}}}} - x"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.p)?;
        if let Some(m) = &self.modulus {
            let coeffs: Vec<String> = m.iter().map(|c| c.to_string()).collect();
            write!(f, ",e={},modulus={}", self.e, coeffs.join(","))?;
        }
        Ok(())
    }
}

// ---- dense polynomial helpers over F_p (little-endian, values < p) ----

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_degree(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = (x + p - y) % p;
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - df;
        if lead != 0 {
            for i in 0..=df {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * f[i]) % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.len() <= df {
            break;
        }
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_powmod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut acc = poly_rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = poly_mulmod(&result, &acc, f, p);
        }
        acc = poly_mulmod(&acc, &acc, f, p);
        exp >>= 1;
    }
    result
}

/// `g^{p^k} mod f`, computed as k successive p-th powers.
fn frobenius_power(g: &[u64], k: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(g, f, p);
    for _ in 0..k {
        acc = poly_powmod(&acc, p, f, p);
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        // Scale y monic so poly_rem applies.
        let lead = y[y.len() - 1];
        let inv = int_inverse(lead, p);
        let monic: Vec<u64> = y.iter().map(|&c| (c * inv) % p).collect();
        let r = poly_rem(&x, &monic, p);
        x = y;
        y = r;
    }
    x
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Inverse of `a` modulo the prime `p` via extended Euclid.
fn int_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i64, p as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r.abs(), 1, "inverse of nonzero residue mod prime");
    (old_s.rem_euclid(p as i64)) as u64
}

/// An element of `F_q`, stored as `e` residues mod `p` (little-endian in the
/// extension generator). Equality and hashing are determined by the
/// coefficient vector; elements of different specs never compare equal.
#[derive(Debug, Clone)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    coeffs: Vec<u32>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec)
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl FieldElement {
    /// Builds an element from up to `e` integer coefficients, reducing each
    /// into `[0, p)` and padding the high coordinates with zero.
    pub fn new(spec: &Arc<FieldSpec>, coeffs: &[i64]) -> Result<Self, FieldError> {
        if coeffs.len() > spec.e() {
            return Err(FieldError::CoefficientRange { len: coeffs.len(), e: spec.e() });
        }
        let p = i64::from(spec.p());
        let mut v: Vec<u32> = coeffs.iter().map(|&c| c.rem_euclid(p) as u32).collect();
        v.resize(spec.e(), 0);
        Ok(FieldElement { spec: Arc::clone(spec), coeffs: v })
    }

    /// The constant embedding of an integer.
    pub fn from_int(spec: &Arc<FieldSpec>, n: i64) -> Self {
        let mut v = vec![0u32; spec.e()];
        v[0] = n.rem_euclid(i64::from(spec.p())) as u32;
        FieldElement { spec: Arc::clone(spec), coeffs: v }
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        FieldElement { spec: Arc::clone(spec), coeffs: vec![0; spec.e()] }
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::from_int(spec, 1)
    }

    /// The extension generator (the class of x); only defined for `e > 1`.
    pub fn generator(spec: &Arc<FieldSpec>) -> Result<Self, FieldError> {
        if spec.e() < 2 {
            return Err(FieldError::BadDegree(spec.e()));
        }
        let mut v = vec![0u32; spec.e()];
        v[1] = 1;
        Ok(FieldElement { spec: Arc::clone(spec), coeffs: v })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check_spec(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_spec(other)?;
        let p = self.spec.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        Ok(FieldElement { spec: Arc::clone(&self.spec), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.p();
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement { spec: Arc::clone(&self.spec), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_spec(other)?;
        let p = u64::from(self.spec.p());
        let e = self.spec.e();
        if e == 1 {
            let prod = (u64::from(self.coeffs[0]) * u64::from(other.coeffs[0])) % p;
            return Ok(FieldElement {
                spec: Arc::clone(&self.spec),
                coeffs: vec![prod as u32],
            });
        }
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(a) * u64::from(b)) % p;
            }
        }
        let f: Vec<u64> = self
            .spec
            .modulus()
            .expect("extension spec")
            .iter()
            .map(|&c| u64::from(c))
            .collect();
        let rem = poly_rem(&prod, &f, p);
        let mut coeffs: Vec<u32> = rem.iter().map(|&c| c as u32).collect();
        coeffs.resize(e, 0);
        Ok(FieldElement { spec: Arc::clone(&self.spec), coeffs })
    }

    /// Multiplicative inverse via extended gcd in the modulus ring.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let p = u64::from(self.spec.p());
        let e = self.spec.e();
        if e == 1 {
            let inv = int_inverse(u64::from(self.coeffs[0]), p);
            return Ok(FieldElement {
                spec: Arc::clone(&self.spec),
                coeffs: vec![inv as u32],
            });
        }
        // Extended Euclid on (self, modulus) over F_p[x].
        let f: Vec<u64> = self
            .spec
            .modulus()
            .expect("extension spec")
            .iter()
            .map(|&c| u64::from(c))
            .collect();
        let mut a: Vec<u64> = self.coeffs.iter().map(|&c| u64::from(c)).collect();
        poly_trim(&mut a);
        let (mut old_r, mut r) = (a, f.clone());
        let (mut old_s, mut s) = (vec![1u64], Vec::new());
        while !r.is_empty() {
            // Monic divisor step: r = lead * monic, quotient tracked on s.
            let lead = r[r.len() - 1];
            let lead_inv = int_inverse(lead, p);
            let monic: Vec<u64> = r.iter().map(|&c| (c * lead_inv) % p).collect();
            let (q, rem) = poly_divmod(&old_r, &monic, p);
            // old_r = q * monic + rem = (q * lead_inv) * r + rem
            let q_scaled: Vec<u64> = q.iter().map(|&c| (c * lead_inv) % p).collect();
            let new_s = poly_sub(&old_s, &poly_mul_plain(&q_scaled, &s, p), p);
            old_r = r;
            r = rem;
            old_s = s;
            s = new_s;
        }
        // old_r is a nonzero constant c; inverse = old_s / c mod f.
        debug_assert_eq!(poly_degree(&old_r), Some(0));
        let c_inv = int_inverse(old_r[0], p);
        let scaled: Vec<u64> = old_s.iter().map(|&c| (c * c_inv) % p).collect();
        let rem = poly_rem(&scaled, &f, p);
        let mut coeffs: Vec<u32> = rem.iter().map(|&c| c as u32).collect();
        coeffs.resize(e, 0);
        Ok(FieldElement { spec: Arc::clone(&self.spec), coeffs })
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = Self::one(&self.spec);
        let mut acc = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&acc).expect("same spec");
            }
            acc = acc.mul(&acc).expect("same spec");
            n >>= 1;
        }
        result
    }
}

/// Plain polynomial product (no reduction), little-endian.
fn poly_mul_plain(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Division with remainder by a monic polynomial.
fn poly_divmod(a: &[u64], f: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    if r.len() <= df {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - df];
    while r.len() > df {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - df;
        if lead != 0 {
            q[shift] = lead;
            for i in 0..=df {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead * f[i]) % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    poly_trim(&mut q);
    (q, r)
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.e() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// Enumerates all `q` elements of the field, in lexicographic coefficient
/// order. Intended for exhaustive checks on small fields.
pub fn enumerate_elements(spec: &Arc<FieldSpec>) -> Vec<FieldElement> {
    let p = spec.p();
    let e = spec.e();
    let mut out = Vec::with_capacity(spec.q() as usize);
    let mut coeffs = vec![0u32; e];
    loop {
        out.push(FieldElement { spec: Arc::clone(spec), coeffs: coeffs.clone() });
        let mut i = 0;
        loop {
            if i == e {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}
