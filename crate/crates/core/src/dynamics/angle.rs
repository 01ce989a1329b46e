//! Points of `R/Z` as 128-bit binary fractions.
//!
//! Closed forms are evaluated in big-integer fixed point before rounding, so
//! `k * alpha mod 1` is a wrapping multiply with error at most `k * 2^-128`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FRAC_BITS: u32 = 128;
const GUARD_BITS: u32 = 32;

/// An element of `R/Z` with the expression it came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Angle {
    frac: u128,
    label: String,
}

fn low_128(x: &BigUint) -> u128 {
    let digits = x.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    lo | (hi << 64)
}

/// `atan(1/x)` scaled by `2^bits`.
fn atan_inv(x: u64, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x) * x;
    let mut power = &one / x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

impl Angle {
    pub fn from_bits(frac: u128, label: impl Into<String>) -> Self {
        Angle { frac, label: label.into() }
    }

    pub fn zero() -> Self {
        Angle::from_bits(0, "0")
    }

    /// `sqrt(n) mod 1`.
    pub fn sqrt(n: u64) -> Self {
        let s = (BigUint::from(n) << (2 * FRAC_BITS)).sqrt();
        Angle::from_bits(low_128(&s), format!("sqrt{n}"))
    }

    /// `(sqrt(5) - 1) / 2`, the fractional part of the golden ratio.
    pub fn golden() -> Self {
        let s = (BigUint::from(5u32) << (2 * FRAC_BITS + 2)).sqrt();
        let phi = (s + (BigUint::one() << (FRAC_BITS + 1))) >> 2u32;
        Angle::from_bits(low_128(&phi), "golden")
    }

    /// `pi mod 1` via Machin's formula.
    pub fn pi() -> Self {
        let bits = FRAC_BITS + GUARD_BITS;
        let pi: BigInt = atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4;
        let pi = (pi >> GUARD_BITS).to_biguint().expect("positive");
        Angle::from_bits(low_128(&pi), "pi")
    }

    /// `num / den mod 1`, rounded down.
    pub fn rational(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let r = BigInt::from(num).mod_floor_u(den);
        let frac = (r << FRAC_BITS) / den;
        Ok(Angle::from_bits(low_128(&frac), format!("{num}/{den}")))
    }

    pub fn from_f64(x: f64) -> Self {
        let f = x - x.floor();
        let frac = (f * 2f64.powi(64)) as u64 as u128;
        Angle::from_bits(frac << 64, format!("{x}"))
    }

    pub fn bits(&self) -> u128 {
        self.frac
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn to_f64(&self) -> f64 {
        (self.frac >> 64) as f64 / 2f64.powi(64) + (self.frac as u64) as f64 / 2f64.powi(128)
    }

    /// `self + k * other mod 1`.
    pub fn add_multiple(&self, other: &Angle, k: i64) -> u128 {
        self.frac.wrapping_add(other.frac.wrapping_mul(k as i128 as u128))
    }

    /// The first continued-fraction convergent `p/q` with `q < 10^6` that lies
    /// within `1e-12` of the angle, if any.
    pub fn near_rational(&self) -> Option<(u64, u64)> {
        let x = self.to_f64();
        if x == 0.0 {
            return Some((0, 1));
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut rest = x;
        while q1 < 1_000_000 {
            let a = rest.floor();
            let a_int = a as u64;
            let (p2, q2) = (a_int * p1 + p0, a_int * q1 + q0);
            if q2 >= 1_000_000 {
                break;
            }
            if q2 > 0 && (x - p2 as f64 / q2 as f64).abs() < 1e-12 {
                return Some((p2, q2));
            }
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let f = rest - a;
            if f < 1e-15 {
                break;
            }
            rest = 1.0 / f;
        }
        None
    }
}

trait ModFloorU {
    fn mod_floor_u(&self, m: u64) -> BigUint;
}

impl ModFloorU for BigInt {
    fn mod_floor_u(&self, m: u64) -> BigUint {
        let m = BigInt::from(m);
        let mut r = self % &m;
        if r.is_negative() {
            r += m;
        }
        r.to_biguint().expect("reduced into [0, m)")
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// `sqrtN`, `golden`, `pi`, `p/q`, or a decimal.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown angle {s:?}"));
        if let Some(n) = s.strip_prefix("sqrt") {
            let n = n.trim_end_matches("-1");
            let n: u64 = n.parse().map_err(|_| bad())?;
            return Ok(Angle::sqrt(n).with_label(s));
        }
        match s {
            "golden" => return Ok(Angle::golden()),
            "pi" => return Ok(Angle::pi()),
            _ => {}
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            return Angle::rational(a, b);
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        Ok(Angle::from_f64(x).with_label(s))
    }
}

impl Angle {
    fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }
}

/// `e^(2 pi i t)` for `t` given as a 128-bit fraction.
pub fn unit_root(t: u128) -> num_complex::Complex64 {
    let x = (t >> 64) as f64 / 2f64.powi(64) + (t as u64) as f64 / 2f64.powi(128);
    let theta = std::f64::consts::TAU * x;
    num_complex::Complex64::new(theta.cos(), theta.sin())
}
