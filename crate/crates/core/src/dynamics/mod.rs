//! Uniquely ergodic rotations and observables with known integrals.
//!
//! Two families: the rotation `j -> j + 1` on `Z/mZ` with counting measure,
//! and translations `t -> t + alpha` of the torus `(R/Z)^d` with Lebesgue
//! measure (uniquely ergodic when `1, alpha_1, ..., alpha_d` are rationally
//! independent).

mod angle;
mod window;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use angle::{unit_root, Angle};
pub use window::WindowFn;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;

pub(crate) fn params(text: &str) -> Result<BTreeMap<String, String>> {
    crate::semigroup::parse_key_values(&text.replace(',', "\n"))
}

pub(crate) fn param_or<T: FromStr>(map: &BTreeMap<String, String>, key: &str, default: T) -> Result<T> {
    match map.get(key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DynSystem {
    /// `j -> j + 1 mod m`.
    FiniteRotation { m: u64 },
    /// `t -> t + alpha mod 1`, componentwise.
    Torus { alpha: Vec<Angle> },
}

/// A point of the phase space of a [`DynSystem`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Point {
    Finite(u64),
    /// Coordinates as 128-bit fractions of 1.
    Torus(Vec<u128>),
}

impl DynSystem {
    pub fn finite(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("rotation modulus must be at least 1".into()));
        }
        Ok(DynSystem::FiniteRotation { m })
    }

    /// A torus rotation. Logs a warning when some coordinate is within
    /// `1e-12` of a fraction with denominator below `10^6`.
    pub fn torus(alpha: Vec<Angle>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidInput("torus rotation needs at least one angle".into()));
        }
        for a in &alpha {
            if let Some((p, q)) = a.near_rational() {
                log::warn!("rotation angle {a} is within 1e-12 of {p}/{q}; the rotation is not uniquely ergodic");
            }
        }
        Ok(DynSystem::Torus { alpha })
    }

    pub fn origin(&self) -> Point {
        match self {
            DynSystem::FiniteRotation { .. } => Point::Finite(0),
            DynSystem::Torus { alpha } => Point::Torus(vec![0; alpha.len()]),
        }
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        match (self, x) {
            (DynSystem::FiniteRotation { m }, Point::Finite(j)) if j < m => Ok(()),
            (DynSystem::Torus { alpha }, Point::Torus(t)) if t.len() == alpha.len() => Ok(()),
            _ => Err(Error::DomainMismatch(format!("point {x:?} is not in {self}"))),
        }
    }

    /// `T^k x`.
    pub fn iterate(&self, x: &Point, k: u64) -> Result<Point> {
        self.check_point(x)?;
        Ok(match (self, x) {
            (DynSystem::FiniteRotation { m }, Point::Finite(j)) => {
                Point::Finite(((*j as u128 + k as u128) % *m as u128) as u64)
            }
            (DynSystem::Torus { alpha }, Point::Torus(t)) => Point::Torus(
                t.iter()
                    .zip(alpha)
                    .map(|(ti, a)| ti.wrapping_add(a.bits().wrapping_mul(k as u128)))
                    .collect(),
            ),
            _ => unreachable!("checked above"),
        })
    }

    /// Parses a point: `3` on `Z/mZ`, or `|`-separated angles on the torus.
    pub fn parse_point(&self, s: &str) -> Result<Point> {
        let x = match self {
            DynSystem::FiniteRotation { .. } => Point::Finite(
                s.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {s:?}")))?,
            ),
            DynSystem::Torus { .. } => Point::Torus(
                s.split('|')
                    .map(|a| a.parse::<Angle>().map(|a| a.bits()))
                    .collect::<Result<_>>()?,
            ),
        };
        self.check_point(&x)?;
        Ok(x)
    }
}

impl fmt::Display for DynSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynSystem::FiniteRotation { m } => write!(f, "finite:m={m}"),
            DynSystem::Torus { alpha } => {
                let a: Vec<&str> = alpha.iter().map(Angle::label).collect();
                write!(f, "torus:alpha={}", a.join("|"))
            }
        }
    }
}

impl FromStr for DynSystem {
    type Err = Error;

    /// `finite:m=3` or `torus:alpha=sqrt2` (`|` separates coordinates).
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let map = params(rest)?;
        match kind {
            "finite" => DynSystem::finite(param_or(&map, "m", 2)?),
            "torus" => {
                let alpha = map.get("alpha").map(String::as_str).unwrap_or("sqrt2");
                DynSystem::torus(alpha.split('|').map(str::parse).collect::<Result<_>>()?)
            }
            other => Err(Error::Parse(format!("unknown system {other:?}"))),
        }
    }
}

/// A continuous function on the phase space.
#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Observable {
    /// Constant function on any system.
    Constant(Complex64),
    /// `1_{r}` on `Z/mZ`.
    Indicator { r: u64 },
    /// `f(j) = values[j]` on `Z/mZ` (length must be `m`).
    Tabulated {
        #[serde_as(as = "Vec<serde_with::DisplayFromStr>")]
        values: Vec<BigRational>,
    },
    /// `sum_h c_h e^(2 pi i <h, t>)` on the torus.
    TrigPolynomial { terms: Vec<(Vec<i64>, Complex64)> },
}

impl Default for Observable {
    fn default() -> Self {
        Observable::character(vec![1])
    }
}

impl Observable {
    pub fn character(freq: Vec<i64>) -> Self {
        Observable::TrigPolynomial {
            terms: vec![(freq, Complex64::new(1.0, 0.0))],
        }
    }

    /// `1_{0} - 1_{1}` on `Z/2Z`: with `x = 0`, `f(T^k x) = (-1)^k`.
    pub fn parity() -> Self {
        Observable::Tabulated {
            values: vec![BigRational::from_integer(1.into()), BigRational::from_integer((-1).into())],
        }
    }

    fn check(&self, sys: &DynSystem) -> Result<()> {
        let ok = match (self, sys) {
            (Observable::Constant(_), _) => true,
            (Observable::Indicator { r }, DynSystem::FiniteRotation { m }) => r < m,
            (Observable::Tabulated { values }, DynSystem::FiniteRotation { m }) => {
                values.len() as u64 == *m
            }
            (Observable::TrigPolynomial { terms }, DynSystem::Torus { alpha }) => {
                terms.iter().all(|(h, _)| h.len() == alpha.len())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!("observable {self} does not live on {sys}")))
        }
    }

    /// Exact value at `j` on `Z/mZ`, when the observable is rational there.
    fn finite_value(&self, j: u64) -> Option<BigRational> {
        match self {
            Observable::Constant(c) if c.im == 0.0 => BigRational::from_float(c.re),
            Observable::Indicator { r } => Some(BigRational::from_integer(BigInt::from((j == *r) as u8))),
            Observable::Tabulated { values } => values.get(j as usize).cloned(),
            _ => None,
        }
    }

    fn value(&self, x: &Point) -> Complex64 {
        match (self, x) {
            (Observable::Constant(c), _) => *c,
            (Observable::TrigPolynomial { terms }, Point::Torus(t)) => {
                let mut acc = ComplexSum::default();
                for (h, c) in terms {
                    let phase = h
                        .iter()
                        .zip(t)
                        .fold(0u128, |s, (hj, tj)| s.wrapping_add(tj.wrapping_mul(*hj as i128 as u128)));
                    acc.add(c * unit_root(phase));
                }
                acc.value()
            }
            (_, Point::Finite(j)) => {
                let v = self.finite_value(*j).expect("checked observable");
                Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
            }
            _ => unreachable!("checked observable"),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Constant(c) if c.im == 0.0 => write!(f, "constant:c={}", c.re),
            Observable::Constant(c) => write!(f, "constant:c={}{:+}i", c.re, c.im),
            Observable::Indicator { r } => write!(f, "indicator:r={r}"),
            Observable::Tabulated { values } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "table:values={}", v.join("|"))
            }
            Observable::TrigPolynomial { terms } if terms.len() == 1 && terms[0].1 == Complex64::new(1.0, 0.0) => {
                let h: Vec<String> = terms[0].0.iter().map(|x| x.to_string()).collect();
                write!(f, "character:freq={}", h.join("|"))
            }
            Observable::TrigPolynomial { terms } => write!(f, "trig:{} terms", terms.len()),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    /// `indicator:r=1`, `character:freq=1` (`|` separates coordinates),
    /// `constant:c=5`, `parity`, `table:values=1|-1|1/2`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let map = params(rest)?;
        match kind {
            "indicator" => Ok(Observable::Indicator { r: param_or(&map, "r", 0)? }),
            "character" => {
                let freq = map.get("freq").map(String::as_str).unwrap_or("1");
                let freq = freq
                    .split('|')
                    .map(|h| h.trim().parse().map_err(|_| Error::Parse(format!("bad frequency {h:?}"))))
                    .collect::<Result<_>>()?;
                Ok(Observable::character(freq))
            }
            "constant" => Ok(Observable::Constant(Complex64::new(param_or(&map, "c", 1.0)?, 0.0))),
            "parity" => Ok(Observable::parity()),
            "table" => {
                let values = map
                    .get("values")
                    .ok_or_else(|| Error::Parse("table needs values=".into()))?
                    .split('|')
                    .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad value {v:?}"))))
                    .collect::<Result<_>>()?;
                Ok(Observable::Tabulated { values })
            }
            other => Err(Error::Parse(format!("unknown observable {other:?}"))),
        }
    }
}

/// An exact rational, or a complex number when exactness is not available.
#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Value {
    Exact(#[serde_as(as = "serde_with::DisplayFromStr")] BigRational),
    Complex(Complex64),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(r) => Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Value::Complex(z) => *z,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Complex(_) => None,
        }
    }
}

/// `f(T^k x)`.
pub fn orbit_value(sys: &DynSystem, x: &Point, k: u64, f: &Observable) -> Result<Complex64> {
    f.check(sys)?;
    Ok(f.value(&sys.iterate(x, k)?))
}

/// `f(T^k x)` for `k = 0..=kmax`.
pub fn orbit_values(sys: &DynSystem, x: &Point, f: &Observable, kmax: usize) -> Result<Vec<Complex64>> {
    f.check(sys)?;
    (0..=kmax as u64)
        .map(|k| Ok(f.value(&sys.iterate(x, k)?)))
        .collect()
}

/// Exact `f(T^k x)` for `k = 0..=kmax`, when the system is finite and `f` rational.
pub fn orbit_values_exact(
    sys: &DynSystem,
    x: &Point,
    f: &Observable,
    kmax: usize,
) -> Result<Option<Vec<BigRational>>> {
    f.check(sys)?;
    if !matches!(sys, DynSystem::FiniteRotation { .. }) {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax as u64 {
        match sys.iterate(x, k)? {
            Point::Finite(j) => match f.finite_value(j) {
                Some(v) => out.push(v),
                None => return Ok(None),
            },
            Point::Torus(_) => unreachable!("finite system"),
        }
    }
    Ok(Some(out))
}

pub fn invariant_integral(sys: &DynSystem, f: &Observable) -> Result<Value> {
    f.check(sys)?;
    match (sys, f) {
        (DynSystem::FiniteRotation { m }, _) => {
            let mut acc = BigRational::zero();
            for j in 0..*m {
                match f.finite_value(j) {
                    Some(v) => acc += v,
                    None => return Ok(Value::Complex(f.value(&Point::Finite(j)) )),
                }
            }
            Ok(Value::Exact(acc / BigRational::from_integer(BigInt::from(*m))))
        }
        (DynSystem::Torus { .. }, Observable::Constant(c)) => Ok(Value::Complex(*c)),
        (DynSystem::Torus { .. }, Observable::TrigPolynomial { terms }) => {
            let c0 = terms
                .iter()
                .filter(|(h, _)| h.iter().all(|x| *x == 0))
                .map(|(_, c)| c)
                .sum();
            Ok(Value::Complex(c0))
        }
        _ => unreachable!("checked observable"),
    }
}

/// `(1/N) sum_{n=1..N} f(T^n x)`.
pub fn birkhoff_average(sys: &DynSystem, x: &Point, f: &Observable, n: u64) -> Result<Complex64> {
    f.check(sys)?;
    if n == 0 {
        return Err(Error::InvalidInput("Birkhoff average over zero terms".into()));
    }
    let mut acc = ComplexSum::default();
    for k in 1..=n {
        acc.add(f.value(&sys.iterate(x, k)?));
    }
    Ok(acc.value() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> DynSystem {
        DynSystem::torus(vec![Angle::sqrt(2)]).unwrap()
    }

    #[test]
    fn finite_orbit_values() {
        let sys = DynSystem::finite(2).unwrap();
        let f = Observable::Indicator { r: 0 };
        assert_eq!(orbit_value(&sys, &Point::Finite(0), 3, &f).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(orbit_value(&sys, &Point::Finite(0), 0, &f).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn torus_character_orbit() {
        let sys = torus();
        let f = Observable::character(vec![1]);
        let alpha = 2f64.sqrt() - 1.0;
        for k in [0u64, 1, 7, 500] {
            let z = orbit_value(&sys, &sys.origin(), k, &f).unwrap();
            let t = std::f64::consts::TAU * (k as f64 * alpha);
            assert!((z - Complex64::new(t.cos(), t.sin())).norm() < 1e-9);
        }
    }

    #[test]
    fn integrals() {
        let m3 = DynSystem::finite(3).unwrap();
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(invariant_integral(&m3, &Observable::Indicator { r: 1 }).unwrap(), Value::Exact(third));
        assert_eq!(
            invariant_integral(&torus(), &Observable::character(vec![1])).unwrap(),
            Value::Complex(Complex64::new(0.0, 0.0))
        );
        let five = Observable::Constant(Complex64::new(5.0, 0.0));
        assert_eq!(invariant_integral(&torus(), &five).unwrap().to_complex().re, 5.0);
        assert_eq!(invariant_integral(&m3, &five).unwrap().to_complex().re, 5.0);
    }

    #[test]
    fn domain_mismatch() {
        let m3 = DynSystem::finite(3).unwrap();
        assert!(matches!(
            orbit_value(&m3, &Point::Finite(0), 1, &Observable::character(vec![1])),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(
            orbit_value(&torus(), &Point::Finite(0), 1, &Observable::Indicator { r: 0 }),
            Err(Error::DomainMismatch(_))
        ));
        assert!(matches!(
            orbit_value(&m3, &Point::Finite(5), 1, &Observable::Indicator { r: 0 }),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn birkhoff_baselines() {
        let m2 = DynSystem::finite(2).unwrap();
        let f = Observable::Indicator { r: 0 };
        assert_eq!(birkhoff_average(&m2, &Point::Finite(0), &f, 10).unwrap().re, 0.5);
        let sys = torus();
        let n = 10_000u64;
        let avg = birkhoff_average(&sys, &sys.origin(), &Observable::character(vec![1]), n).unwrap();
        let alpha = 2f64.sqrt() - 1.0;
        let bound = 2.0 / (n as f64 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, std::f64::consts::TAU * alpha)).norm());
        assert!(avg.norm() <= bound, "{} > {bound}", avg.norm());
    }

    #[test]
    fn parse_round_trips() {
        for s in ["finite:m=3", "torus:alpha=sqrt2", "torus:alpha=golden|pi"] {
            assert_eq!(s.parse::<DynSystem>().unwrap().to_string(), s);
        }
        for s in ["indicator:r=1", "character:freq=1", "constant:c=5", "table:values=1|-1"] {
            assert_eq!(s.parse::<Observable>().unwrap().to_string(), s);
        }
        assert_eq!("parity".parse::<Observable>().unwrap(), Observable::parity());
    }

    #[test]
    fn exact_orbit_values_on_finite_systems() {
        let m2 = DynSystem::finite(2).unwrap();
        let v = orbit_values_exact(&m2, &Point::Finite(0), &Observable::parity(), 4).unwrap().unwrap();
        let signs: Vec<i64> = v.iter().map(|r| r.to_integer().try_into().unwrap()).collect();
        assert_eq!(signs, [1, -1, 1, -1, 1]);
        assert_eq!(orbit_values_exact(&torus(), &torus().origin(), &Observable::default(), 3).unwrap(), None);
    }
}
