//! Finite fields `F_q`, `q = p^k`, realized as `F_p[t]/(modulus)`.
//!
//! Elements are packed into a `u64` as base-`p` digits, digit `i` being the
//! coefficient of `t^i`. For prime fields the packing is the residue itself.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Largest supported characteristic. Products of two residues fit in `u64`.
const MAX_P: u64 = 1 << 31;
/// Largest supported field size.
const MAX_Q: u64 = 1 << 62;
/// Extension fields up to this size get a precomputed multiplication table.
const TABLE_LIMIT: u64 = 256;

/// A finite field of `q = p^k` elements.
///
/// Cheap to clone; two specs compare equal when they share `p`, `k` and the
/// defining modulus.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

struct FieldInner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus over `F_p`, low-to-high, length `k + 1`. `None` iff `k == 1`.
    modulus: Option<Vec<u64>>,
    mul_table: Option<Vec<u32>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.k.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if let Some(m) = &self.inner.modulus {
            write!(f, " = F_{}[t]/({})", self.p(), render_prime_poly(m, 't'))?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds `F_{p^k}`. For `k > 1` the modulus is the first monic
    /// irreducible of degree `k` over `F_p`, scanning coefficient tuples
    /// `(c_0, ..., c_{k-1})` in lexicographic order.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NonPrimeP(p));
        }
        if k == 0 {
            return Err(Error::ZeroExtensionDegree);
        }
        if p >= MAX_P {
            return Err(Error::FieldTooLarge(format!("p = {p}")));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_Q)
            .ok_or_else(|| Error::FieldTooLarge(format!("{p}^{k}")))?;
        let prime = FieldSpec {
            inner: Arc::new(FieldInner {
                p,
                k: 1,
                q: p,
                modulus: None,
                mul_table: None,
            }),
        };
        if k == 1 {
            return Ok(prime);
        }
        let modulus = first_irreducible_modulus(&prime, k);
        let mut inner = FieldInner {
            p,
            k,
            q,
            modulus: Some(modulus),
            mul_table: None,
        };
        if q <= TABLE_LIMIT {
            let tmp = FieldSpec {
                inner: Arc::new(FieldInner {
                    p,
                    k,
                    q,
                    modulus: inner.modulus.clone(),
                    mul_table: None,
                }),
            };
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in a..q {
                    let c = tmp.mul_slow(a, b) as u32;
                    table[(a * q + b) as usize] = c;
                    table[(b * q + a) as usize] = c;
                }
            }
            inner.mul_table = Some(table);
        }
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u64 {
        self.inner.q
    }

    pub fn q_big(&self) -> BigUint {
        BigUint::from(self.inner.q)
    }

    /// The defining modulus over `F_p` (low-to-high, monic), if `k > 1`.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.inner.modulus.as_deref()
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: 1,
        }
    }

    /// Element from its coordinate vector over `F_p` (coefficient of `t^i` at `i`).
    pub fn element(&self, rep: &[u64]) -> Result<FieldElement> {
        if rep.len() > self.k() as usize {
            return Err(Error::InvalidInput(format!(
                "coordinate vector of length {} for a degree-{} extension",
                rep.len(),
                self.k()
            )));
        }
        let mut value = 0u64;
        for &c in rep.iter().rev() {
            if c >= self.p() {
                return Err(Error::InvalidInput(format!("coordinate {c} not reduced mod {}", self.p())));
            }
            value = value * self.p() + c;
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub(crate) fn digits(&self, mut a: u64) -> Vec<u64> {
        let p = self.p();
        (0..self.k())
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    fn pack(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p() + d)
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        if self.inner.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut scale = 1u64;
        for _ in 0..self.inner.k {
            let d = (a % p + b % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub(crate) fn neg(&self, a: u64) -> u64 {
        let p = self.inner.p;
        if self.inner.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return a;
        }
        let digits: Vec<u64> = self.digits(a).into_iter().map(|d| (p - d) % p).collect();
        self.pack(&digits)
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        if self.inner.k == 1 {
            return a * b % self.inner.p;
        }
        if let Some(t) = &self.inner.mul_table {
            return t[(a * self.inner.q + b) as usize] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let p = self.p();
        let k = self.k() as usize;
        let modulus = self.inner.modulus.as_ref().expect("extension field has a modulus");
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                // subtract c * modulus[j] * t^(i-k+j)
                prod[i - k + j] = (prod[i - k + j] + (p - c) * modulus[j]) % p;
            }
        }
        self.pack(&prod[..k])
    }

    pub(crate) fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub(crate) fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.q() - 2)
    }

    /// The unique `b` with `b^p = a` (inverse Frobenius).
    pub(crate) fn pth_root(&self, a: u64) -> u64 {
        if self.k() == 1 {
            return a;
        }
        self.pow(a, self.q() / self.p())
    }

    /// Writes an element as a polynomial in the generator `t`.
    pub(crate) fn render(&self, a: u64) -> String {
        if self.k() == 1 {
            return a.to_string();
        }
        render_prime_poly(&self.digits(a), 't')
    }
}

/// Renders a polynomial with `F_p` coefficients (low-to-high) in `var`.
pub(crate) fn render_prime_poly(coeffs: &[u64], var: char) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

fn first_irreducible_modulus(prime: &FieldSpec, k: u32) -> Vec<u64> {
    let p = prime.p();
    let total = p.pow(k);
    for idx in 0..total {
        // c_0 is the most significant digit of idx
        let mut coeffs = vec![0u64; k as usize + 1];
        let mut rest = idx;
        for i in (0..k as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if super::poly::is_irreducible_raw(prime, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial exists in every degree")
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldSpec,
    value: u64,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Packed base-`p` encoding in `[0, q)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub(crate) fn from_value(field: &FieldSpec, value: u64) -> Self {
        debug_assert!(value < field.q());
        FieldElement {
            field: field.clone(),
            value,
        }
    }

    /// Coordinates over `F_p`, length `k`.
    pub fn rep(&self) -> Vec<u64> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_value(&self.field, self.field.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::from_value(&self.field, self.field.mul(self.value, other.value)))
    }

    pub fn inverse(&self) -> Option<Self> {
        (self.value != 0).then(|| Self::from_value(&self.field, self.field.inv(self.value)))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.render(self.value))
    }
}
