//! The finite-`n` machinery behind the orbit-average theorem: the gcd
//! defect `Phi(g, h) = |gcd(g, h)| - 1`, its double logarithmic average
//! `E(B)`, the comparison inequality between `a` and its twists by `B`,
//! and the construction of matched sets of primes and 2-almost primes.

mod construct;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use construct::{construct_b_sets, Construction, ConstructionParams};

use crate::averages::{harmonic_sum, ReportValue};
use crate::counting::{CountTable, FactorCount};
use crate::dynamics::Value;
use crate::error::{Error, Result};
use crate::numeric::rational_f64;
use crate::semigroup::{Instance, NormBase, SemigroupElement};

/// An arithmetic function with rational values.
pub type ArithFn<'a> = &'a (dyn Fn(&SemigroupElement) -> BigRational + Sync);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BSetKind {
    Primes,
    TwoAlmost,
    General,
}

/// A finite set of elements with its harmonic sum `sum 1/|g|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BSet {
    pub instance: String,
    pub kind: BSetKind,
    pub elements: Vec<SemigroupElement>,
    pub harmonic_sum: Value,
}

impl BSet {
    /// Sorts and deduplicates `elements`, checking them against `kind`.
    pub fn new(instance: &Instance, mut elements: Vec<SemigroupElement>, kind: BSetKind) -> Result<Self> {
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        for g in &elements {
            instance.validate(g)?;
            let ok = match kind {
                BSetKind::Primes => g.big_omega() == 1,
                BSetKind::TwoAlmost => g.big_omega() == 2,
                BSetKind::General => true,
            };
            if !ok {
                return Err(Error::InvalidInput(format!("{g:?} does not belong to a {kind:?} set")));
            }
        }
        let harmonic_sum = match instance.norm_base() {
            NormBase::Integer(_) => Value::Exact(harmonic_sum(instance, &elements)?),
            NormBase::Real(q) => Value::Complex(
                elements.iter().map(|g| q.powi(-(g.degree() as i32))).sum::<f64>().into(),
            ),
        };
        Ok(BSet {
            instance: instance.label().to_string(),
            kind,
            elements,
            harmonic_sum,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `|B ∩ G(n)|` for every degree present.
    pub fn degree_counts(&self) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for g in &self.elements {
            *out.entry(g.degree()).or_insert(0) += 1;
        }
        out
    }
}

/// `Phi(g, h) = q^deg(gcd(g, h)) - 1`.
pub fn phi(instance: &Instance, g: &SemigroupElement, h: &SemigroupElement) -> Result<BigUint> {
    let d = instance.gcd(g, h)?.degree();
    match instance.norm_base() {
        NormBase::Integer(q) => Ok(q.pow(d as u32) - 1u32),
        NormBase::Real(q) => Err(Error::InvalidInput(format!(
            "norm base {q} is not an integer; use phi_f64"
        ))),
    }
}

pub fn phi_f64(instance: &Instance, g: &SemigroupElement, h: &SemigroupElement) -> Result<f64> {
    let d = instance.gcd(g, h)?.degree();
    Ok(instance.norm_base().as_f64().powi(d as i32) - 1.0)
}

/// `E(B)`, the double logarithmic average of `Phi` over `B x B`: exact for
/// an integer norm base.
pub fn error_functional(instance: &Instance, b: &BSet) -> Result<Value> {
    if b.is_empty() {
        return Err(Error::EmptySet);
    }
    let top = b.elements.iter().map(SemigroupElement::degree).max().unwrap_or(0);
    match instance.norm_base() {
        NormBase::Integer(q) => {
            // weights q^(top - deg) turn 1/|g| into integers
            let w: Vec<BigUint> = b.elements.iter().map(|g| q.pow((top - g.degree()) as u32)).collect();
            let num: BigUint = b
                .elements
                .par_iter()
                .zip(&w)
                .map(|(g, wg)| {
                    let mut row = BigUint::zero();
                    for (h, wh) in b.elements.iter().zip(&w) {
                        let d = g.gcd_degree(h);
                        if d > 0 {
                            row += (q.pow(d as u32) - 1u32) * wh;
                        }
                    }
                    row * wg
                })
                .sum();
            let den: BigUint = w.iter().sum();
            Ok(Value::Exact(BigRational::new(
                BigInt::from(num),
                BigInt::from(&den * &den),
            )))
        }
        NormBase::Real(q) => {
            let w: Vec<f64> = b.elements.iter().map(|g| q.powi(-((g.degree()) as i32))).collect();
            let num: f64 = b
                .elements
                .par_iter()
                .zip(&w)
                .map(|(g, wg)| {
                    b.elements
                        .iter()
                        .zip(&w)
                        .map(|(h, wh)| (q.powi(g.gcd_degree(h) as i32) - 1.0) * wg * wh)
                        .sum::<f64>()
                })
                .sum();
            let den: f64 = w.iter().sum();
            Ok(Value::Complex((num / (den * den)).into()))
        }
    }
}

fn clip(v: BigRational, clipped: &mut bool) -> BigRational {
    let one = BigRational::one();
    if v.abs() > one {
        *clipped = true;
        if v.is_positive() {
            one
        } else {
            -one
        }
    } else {
        v
    }
}

/// One degree of the finite-`n` comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop31Row {
    pub n: usize,
    /// `|E_{G_n} a(g) - E^log_{h in B} E_{G_{n - deg h}} a(gh)|`.
    pub lhs: ReportValue,
    /// `sqrt(E(B))`.
    pub rhs: f64,
    pub slack: ReportValue,
    /// `lhs <= rhs + slack`, decided exactly.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prop31Report {
    pub instance: String,
    pub error_functional: ReportValue,
    pub rows: Vec<Prop31Row>,
    pub all_hold: bool,
}

/// Compares the average of `a` over `G_n` with its average twisted by the
/// elements of `B`, against `sqrt(E(B)) + slack(n)`. Uses full enumeration
/// of `G_n`; values of `a` outside `[-1, 1]` are clipped with a warning.
pub fn proposition31_check(
    instance: &Instance,
    b: &BSet,
    a: ArithFn<'_>,
    grid: &[usize],
    slack: &dyn Fn(usize) -> BigRational,
) -> Result<Prop31Report> {
    let q = crate::averages::integer_base(instance)?;
    let e = match error_functional(instance, b)? {
        Value::Exact(e) => e,
        Value::Complex(_) => unreachable!("integer norm base"),
    };
    let nmax = grid.iter().copied().max().ok_or_else(|| Error::InvalidInput("empty degree grid".into()))?;
    let all = instance.enumerate_upto(nmax)?;
    let mut clipped = false;
    let mut rows = Vec::with_capacity(grid.len());
    for &n in grid {
        let upto = |m: usize| all.partition_point(|g| g.degree() <= m);
        let size = upto(n);
        let mean: BigRational = all[..size].iter().map(|g| clip(a(g), &mut clipped)).sum::<BigRational>()
            / BigRational::from_integer(size.into());
        let top = b.elements.iter().map(SemigroupElement::degree).max().unwrap_or(0);
        let mut num = BigRational::zero();
        let mut den = BigUint::zero();
        for h in &b.elements {
            if h.degree() > n {
                return Err(Error::InvalidInput(format!(
                    "degree {n} is below the degree {} of an element of B",
                    h.degree()
                )));
            }
            let inner = &all[..upto(n - h.degree())];
            let twisted: BigRational = inner.iter().map(|g| clip(a(&g.mul(h)), &mut clipped)).sum::<BigRational>()
                / BigRational::from_integer(inner.len().into());
            let w = q.pow((top - h.degree()) as u32);
            num += twisted * BigRational::from_integer(BigInt::from(w.clone()));
            den += w;
        }
        let twisted_mean = num / BigRational::from_integer(BigInt::from(den));
        let lhs = (mean - twisted_mean).abs();
        let s = slack(n);
        let gap = &lhs - &s;
        let holds = !gap.is_positive() || &gap * &gap <= e;
        rows.push(Prop31Row {
            n,
            lhs: ReportValue::rational(&lhs),
            rhs: rational_f64(&e).sqrt(),
            slack: ReportValue::rational(&s),
            holds,
        });
    }
    if clipped {
        log::warn!("arithmetic function exceeded modulus 1 and was clipped");
    }
    Ok(Prop31Report {
        instance: instance.label().to_string(),
        error_functional: ReportValue::rational(&e),
        all_hold: rows.iter().all(|r| r.holds),
        rows,
    })
}

/// How the identity evaluates `E_{G_m} a(g)`.
pub enum LemmaFn<'a> {
    /// `a` depends on `Omega(g)` only; averages come from the count table.
    ByOmega(&'a (dyn Fn(usize) -> BigRational + Sync), &'a CountTable),
    /// Arbitrary `a`; averages come from enumerating `G_m`.
    ByElement(ArithFn<'a>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma43Result {
    pub n: usize,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    pub equal: bool,
}

/// `E^log_{h in B1} E_{G_{n - deg h}} a = E^log_{h in B2} E_{G_{n - deg h}} a`,
/// both sides exactly, after checking `|B1 ∩ G(j)| = |B2 ∩ G(j)|` for all `j`.
pub fn lemma43_identity(instance: &Instance, b1: &BSet, b2: &BSet, a: &LemmaFn<'_>, n: usize) -> Result<Lemma43Result> {
    let (c1, c2) = (b1.degree_counts(), b2.degree_counts());
    for d in c1.keys().chain(c2.keys()) {
        if c1.get(d) != c2.get(d) {
            return Err(Error::DegreeMismatchSets(*d));
        }
    }
    let q = crate::averages::integer_base(instance)?;
    let top = *c1.keys().next_back().expect("nonempty sets");
    if top > n {
        return Err(Error::InvalidInput(format!("degree {n} is below the top degree {top} of the sets")));
    }
    let enumeration = match a {
        LemmaFn::ByElement(_) => Some(instance.enumerate_upto(n)?),
        LemmaFn::ByOmega(..) => None,
    };
    let mut cache: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut inner = |m: usize| -> Result<BigRational> {
        if let Some(v) = cache.get(&m) {
            return Ok(v.clone());
        }
        let v = match a {
            LemmaFn::ByOmega(f, table) => {
                crate::averages::Stats::new(instance, table, FactorCount::Total)?.weighted_exact(m, f)?
            }
            LemmaFn::ByElement(f) => {
                let all = enumeration.as_ref().expect("enumerated above");
                let upto = all.partition_point(|g| g.degree() <= m);
                all[..upto].iter().map(f).sum::<BigRational>() / BigRational::from_integer(upto.into())
            }
        };
        cache.insert(m, v.clone());
        Ok(v)
    };
    let mut side = |b: &BSet| -> Result<BigRational> {
        let mut num = BigRational::zero();
        let mut den = BigUint::zero();
        for h in &b.elements {
            let w = q.pow((top - h.degree()) as u32);
            num += inner(n - h.degree())? * BigRational::from_integer(BigInt::from(w.clone()));
            den += w;
        }
        Ok(num / BigRational::from_integer(BigInt::from(den)))
    };
    let lhs = side(b1)?;
    let rhs = side(b2)?;
    Ok(Lemma43Result {
        n,
        equal: lhs == rhs,
        lhs: ReportValue::rational(&lhs),
        rhs: ReportValue::rational(&rhs),
    })
}

/// `(-1)^Omega(g)`.
pub fn liouville(g: &SemigroupElement) -> BigRational {
    BigRational::from_integer(if g.big_omega().is_multiple_of(2) { 1 } else { -1 }.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{parse_poly, FieldSpec};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn f2() -> Instance {
        Instance::polynomial(&FieldSpec::prime(2).unwrap())
    }

    fn elem(inst: &Instance, s: &str) -> SemigroupElement {
        let p = inst.as_polynomial().unwrap();
        p.from_poly(&parse_poly(p.field(), s).unwrap()).unwrap()
    }

    #[test]
    fn phi_values() {
        let inst = f2();
        let (a, b) = (elem(&inst, "x^2+x"), elem(&inst, "x^2+1"));
        assert_eq!(phi(&inst, &a, &b).unwrap(), BigUint::from(1u32));
        assert_eq!(phi(&inst, &a, &a).unwrap(), BigUint::from(3u32));
        let (x, x1) = (elem(&inst, "x"), elem(&inst, "x+1"));
        assert_eq!(phi(&inst, &x, &x1).unwrap(), BigUint::zero());
    }

    #[test]
    fn error_functional_small_sets() {
        let inst = f2();
        let g = elem(&inst, "x^3+x+1");
        let single = BSet::new(&inst, vec![g], BSetKind::Primes).unwrap();
        assert_eq!(error_functional(&inst, &single).unwrap(), Value::Exact(rat(7, 1)));
        // two coprime primes of degree 3: (q^3 - 1) / 2
        let pair = BSet::new(&inst, vec![elem(&inst, "x^3+x+1"), elem(&inst, "x^3+x^2+1")], BSetKind::Primes).unwrap();
        assert_eq!(error_functional(&inst, &pair).unwrap(), Value::Exact(rat(7, 2)));
        let low = BSet::new(&inst, vec![elem(&inst, "x"), elem(&inst, "x+1"), elem(&inst, "x^2+x+1")], BSetKind::Primes).unwrap();
        assert_eq!(error_functional(&inst, &low).unwrap(), Value::Exact(rat(11, 25)));
    }

    #[test]
    fn prime_sets_obey_harmonic_bound() {
        let inst = f2();
        let primes: Vec<SemigroupElement> = (1..=5)
            .flat_map(|d| inst.primes(d).unwrap())
            .map(SemigroupElement::prime)
            .collect();
        let b = BSet::new(&inst, primes, BSetKind::Primes).unwrap();
        let (Value::Exact(e), Value::Exact(h)) = (error_functional(&inst, &b).unwrap(), b.harmonic_sum.clone()) else {
            panic!("integer base")
        };
        assert!(e <= h.recip());
    }

    #[test]
    fn kind_and_emptiness_checks() {
        let inst = f2();
        assert_eq!(BSet::new(&inst, vec![], BSetKind::General).unwrap_err(), Error::EmptySet);
        assert!(BSet::new(&inst, vec![elem(&inst, "x^2")], BSetKind::Primes).is_err());
        assert!(BSet::new(&inst, vec![elem(&inst, "x^2")], BSetKind::TwoAlmost).is_ok());
    }

    #[test]
    fn proposition31_trivial_function() {
        let inst = f2();
        let b = BSet::new(&inst, vec![elem(&inst, "x")], BSetKind::Primes).unwrap();
        let one = |_: &SemigroupElement| BigRational::one();
        let rep = proposition31_check(&inst, &b, &one, &[4, 6, 8], &|_| BigRational::zero()).unwrap();
        assert!(rep.rows.iter().all(|r| r.lhs.exact.as_deref() == Some("0") && r.holds));
    }

    #[test]
    fn lemma43_self_and_mismatch() {
        let inst = f2();
        let b1 = BSet::new(&inst, vec![elem(&inst, "x"), elem(&inst, "x^2+x+1")], BSetKind::Primes).unwrap();
        let res = lemma43_identity(&inst, &b1, &b1, &LemmaFn::ByElement(&liouville), 6).unwrap();
        assert!(res.equal);
        let b2 = BSet::new(&inst, vec![elem(&inst, "x"), elem(&inst, "x+1")], BSetKind::Primes).unwrap();
        assert_eq!(
            lemma43_identity(&inst, &b1, &b2, &LemmaFn::ByElement(&liouville), 6).unwrap_err(),
            Error::DegreeMismatchSets(1)
        );
    }
}
