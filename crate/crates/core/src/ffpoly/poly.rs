//! Univariate polynomials over `F_q`.
//!
//! The `*_raw` helpers work on coefficient vectors (low-to-high, no trailing
//! zeros, the zero polynomial is empty) and do no field-compatibility checks;
//! [`PolyFq`] is the checked public face.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use super::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn add_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn scale_raw(f: &FieldSpec, a: &[u64], c: u64) -> Vec<u64> {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub(crate) fn mul_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divmod_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    let mut rem = a.to_vec();
    let mut quot = vec![0u64; a.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        let factor = f.mul(c, lead_inv);
        quot[i - db] = factor;
        for j in 0..=db {
            rem[i - db + j] = f.sub(rem[i - db + j], f.mul(factor, b[j]));
        }
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

pub(crate) fn rem_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    divmod_raw(f, a, b).1
}

pub(crate) fn monic_raw(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&1) => a.to_vec(),
        Some(&lead) => scale_raw(f, a, f.inv(lead)),
    }
}

/// Monic gcd; `gcd(0, 0)` is the zero polynomial.
pub(crate) fn gcd_raw(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = rem_raw(f, &x, &y);
        x = y;
        y = r;
    }
    monic_raw(f, &x)
}

pub(crate) fn mulmod_raw(f: &FieldSpec, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem_raw(f, &mul_raw(f, a, b), m)
}

pub(crate) fn powmod_raw(f: &FieldSpec, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = rem_raw(f, &[1], m);
    let mut b = rem_raw(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_raw(f, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod_raw(f, &b, &b, m);
        }
    }
    acc
}

pub(crate) fn powmod_big_raw(f: &FieldSpec, base: &[u64], e: &BigUint, m: &[u64]) -> Vec<u64> {
    let mut acc = rem_raw(f, &[1], m);
    let b = rem_raw(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = mulmod_raw(f, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod_raw(f, &acc, &b, m);
        }
    }
    acc
}

pub(crate) fn derivative_raw(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    let p = f.p();
    let mut out: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| {
            let n = (i as u64) % p;
            // n * c as repeated addition in F_q; n < p
            let mut acc = 0u64;
            for _ in 0..n {
                acc = f.add(acc, c);
            }
            acc
        })
        .collect();
    trim(&mut out);
    out
}

/// For `a(x) = b(x)^p`, returns `b`. Requires every exponent of `a` to be a multiple of `p`.
pub(crate) fn pth_root_raw(f: &FieldSpec, a: &[u64]) -> Vec<u64> {
    let p = f.p() as usize;
    let mut out: Vec<u64> = a.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
    trim(&mut out);
    out
}

fn small_prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Rabin's test on a polynomial with nonzero leading coefficient.
pub(crate) fn is_irreducible_raw(f: &FieldSpec, a: &[u64]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let n = a.len() - 1;
    if n == 1 {
        return true;
    }
    let m = monic_raw(f, a);
    let x = rem_raw(f, &[0, 1], &m);
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(x.clone());
    for i in 1..=n {
        let next = powmod_raw(f, &frob[i - 1], f.q(), &m);
        frob.push(next);
    }
    if frob[n] != x {
        return false;
    }
    small_prime_divisors(n).into_iter().all(|r| {
        let h = sub_raw(f, &frob[n / r], &x);
        gcd_raw(f, &h, &m) == [1]
    })
}

/// A polynomial over `F_q`.
///
/// The semigroup elements are the monic ones; general polynomials appear as
/// division remainders and parser output.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyFq {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl PolyFq {
    /// From packed coefficients, low-to-high. Trailing zeros are dropped.
    pub fn new(field: &FieldSpec, mut coeffs: Vec<u64>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::InvalidInput(format!("coefficient {c} outside F_{}", field.q())));
        }
        trim(&mut coeffs);
        Ok(PolyFq {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn from_elements(field: &FieldSpec, elems: &[FieldElement]) -> Result<Self> {
        if elems.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Self::new(field, elems.iter().map(FieldElement::value).collect())
    }

    pub(crate) fn from_raw(field: &FieldSpec, coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.last() != Some(&0));
        PolyFq {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::from_raw(field, vec![1])
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::from_raw(field, vec![0, 1])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Packed coefficients, low-to-high.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> FieldElement {
        FieldElement::from_value(&self.field, self.coeffs.get(i).copied().unwrap_or(0))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, add_raw(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, sub_raw(&self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::from_raw(&self.field, mul_raw(&self.field, &self.coeffs, &other.coeffs)))
    }

    /// `(quotient, remainder)` with `self = quotient * other + remainder`.
    pub fn divmod(&self, other: &Self) -> Result<(Self, Self)> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let (q, r) = divmod_raw(&self.field, &self.coeffs, &other.coeffs);
        Ok((Self::from_raw(&self.field, q), Self::from_raw(&self.field, r)))
    }

    /// Monic greatest common divisor. Fails only for `gcd(0, 0)`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        Ok(Self::from_raw(&self.field, gcd_raw(&self.field, &self.coeffs, &other.coeffs)))
    }

    /// Monic least common multiple of two nonzero polynomials.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        let g = self.gcd(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let (q, _) = self.mul(other)?.divmod(&g)?;
        Ok(Self::from_raw(&self.field, monic_raw(&self.field, &q.coeffs)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = Self::from_raw(&self.field, mul_raw(&self.field, &acc.coeffs, &self.coeffs));
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_raw(&self.field, derivative_raw(&self.field, &self.coeffs))
    }

    pub fn is_irreducible(&self) -> bool {
        is_irreducible_raw(&self.field, &self.coeffs)
    }

    /// Position of a monic polynomial within [`super::enumerate_monic`] for its degree.
    pub fn enumeration_index(&self) -> BigUint {
        let q = self.field.q_big();
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .rev()
            .fold(BigUint::default(), |acc, &c| acc * &q + c)
    }
}

/// Degree first, then coefficients compared from the top down. On monic
/// polynomials of one degree this is the enumeration order.
impl Ord for PolyFq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for PolyFq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coef = self.field.render(c);
            let coef = if coef.contains('+') && i > 0 {
                format!("({coef})")
            } else {
                coef
            };
            match (i, c) {
                (0, _) => write!(f, "{coef}")?,
                (_, 1) => {}
                _ => write!(f, "{coef}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
