//! Matched sets `B1` of primes and `B2` of 2-almost primes with equal
//! counts in every degree and large harmonic sums.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{error_functional, BSet, BSetKind};
use crate::averages::{harmonic_sum, ReportValue};
use crate::dynamics::Value;
use crate::error::{Error, Result};
use crate::numeric::rational_f64;
use crate::semigroup::{Instance, NormBase, PrimeId, SemigroupElement};

/// Largest total number of primes the construction will list.
pub const CONSTRUCTION_BUDGET: u64 = 1_000_000;

/// Degrees scanned for the constant `C` in `pi(n) >= C q^n / n`.
pub const DEFAULT_C_RANGE: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub epsilon: f64,
    pub j0: usize,
    /// `min_{1 <= n <= c_range} n pi(n) / q^n`.
    pub c: String,
    pub c_range: usize,
    pub s: usize,
    pub t: usize,
    /// `s` and `t` came from the caller rather than from `epsilon`.
    pub overridden: bool,
    pub p1_size: u64,
    pub p2_sizes: Vec<u64>,
    /// Degrees `j` where rounding `C q^(sj) / (2 |P1| sj)` up overshoots
    /// the upper size `C q^(sj) / (|P1| sj)`.
    pub p2_over_upper: Vec<usize>,
    /// `sum_{j0 <= l < s} C/l` and `sum_{j <= t} C/(2 |P1| s j)`.
    pub p1_condition_sum: f64,
    pub p2_condition_sum: f64,
    /// Both sums reach `3/epsilon`.
    pub epsilon_condition: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub params: ConstructionParams,
    pub p1: Vec<PrimeId>,
    pub p2: Vec<PrimeId>,
    pub harmonic_p1: ReportValue,
    pub harmonic_p2: ReportValue,
    pub b1: BSet,
    pub b2: BSet,
}

/// Both error functionals against their bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionBounds {
    pub e_b1: ReportValue,
    /// `1 / H(B1)`.
    pub bound_b1: ReportValue,
    pub e_b2: ReportValue,
    /// `1/H1 + 1/H2 + 1/(H1 H2)` with `H1 = H(P1)`, `H2 = H(P2)`.
    pub product_bound_b2: ReportValue,
    /// `3 / min(H1, H2)`, which dominates the product bound once
    /// `max(H1, H2) >= 1`.
    pub min_bound_b2: Option<ReportValue>,
    pub holds: bool,
}

impl Construction {
    /// Evaluates `E(B1)` and `E(B2)` exactly and compares them with their bounds.
    pub fn bounds(&self, instance: &Instance) -> Result<ConstructionBounds> {
        let exact = |v: Value| match v {
            Value::Exact(r) => Ok(r),
            Value::Complex(_) => Err(Error::NonIntegerBase),
        };
        let e1 = exact(error_functional(instance, &self.b1)?)?;
        let e2 = exact(error_functional(instance, &self.b2)?)?;
        let hb1 = exact(self.b1.harmonic_sum.clone())?;
        let h1 = exact_of(&self.harmonic_p1)?;
        let h2 = exact_of(&self.harmonic_p2)?;
        let bound1 = hb1.recip();
        let product = h1.recip() + h2.recip() + (&h1 * &h2).recip();
        let one = BigRational::one();
        let min_bound = (h1 >= one || h2 >= one)
            .then(|| BigRational::from_integer(3.into()) / (&h1).min(&h2).clone());
        let holds = e1 <= bound1 && e2 <= product && min_bound.as_ref().is_none_or(|m| e2 <= *m);
        Ok(ConstructionBounds {
            e_b1: ReportValue::rational(&e1),
            bound_b1: ReportValue::rational(&bound1),
            e_b2: ReportValue::rational(&e2),
            product_bound_b2: ReportValue::rational(&product),
            min_bound_b2: min_bound.as_ref().map(ReportValue::rational),
            holds,
        })
    }
}

fn exact_of(v: &ReportValue) -> Result<BigRational> {
    v.exact
        .as_deref()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::NonIntegerBase)
}

fn big_rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn ceil(r: &BigRational) -> BigUint {
    let (q, rem) = r.numer().div_rem(r.denom());
    let q = if rem > BigInt::zero() { q + 1 } else { q };
    q.to_biguint().unwrap_or_default()
}

fn infeasible(s: usize, t: &str, why: &str) -> Error {
    Error::InfeasibleScale(format!("s = {s}, t = {t}: {why}"))
}

/// Builds `B1` and `B2` from primes of `instance`.
///
/// With `overrides = None`, `s` is the least integer with
/// `sum_{j0 <= l < s} C/l >= 3/epsilon` and `t` the least with
/// `sum_{j <= t} C/(2 |P1| s j) >= 3/epsilon`; sizes beyond
/// [`CONSTRUCTION_BUDGET`] give `InfeasibleScale`. With `Some((s, t))`
/// those two are taken as given and the epsilon condition is only reported.
pub fn construct_b_sets(instance: &Instance, epsilon: f64, overrides: Option<(usize, usize)>) -> Result<Construction> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let q = match instance.norm_base() {
        NormBase::Integer(q) => q,
        NormBase::Real(_) => return Err(Error::NonIntegerBase),
    };
    let j0 = (1..).find(|&j| q.pow(j as u32) >= BigUint::from(2u32)).expect("q >= 2");

    let c_range = match overrides {
        Some((s, t)) => DEFAULT_C_RANGE.max(s * t + s),
        None => DEFAULT_C_RANGE,
    };
    let c_range = match instance.pi_table(c_range) {
        Ok(_) => c_range,
        Err(_) => (1..c_range).rev().find(|&n| instance.pi_table(n).is_ok()).unwrap_or(1),
    };
    let pi = instance.pi_table(c_range)?;
    let c = (1..=c_range)
        .map(|n| big_rat(BigInt::from(n) * BigInt::from(pi[n].clone())) / big_rat(q.pow(n as u32)))
        .min()
        .expect("nonempty range");
    if c.is_zero() {
        return Err(Error::DegenerateSequence("pi(n) vanishes for some n; no constant C > 0".into()));
    }
    let c_f = rational_f64(&c);
    let target = 3.0 / epsilon;

    let s = match overrides {
        Some((s, _)) => s,
        None => {
            let mut acc = 0.0;
            let mut s = j0;
            while acc < target {
                acc += c_f / s as f64;
                s += 1;
                if s > 10_000_000 {
                    return Err(infeasible(s, "?", "the prime-degree sum diverges too slowly"));
                }
            }
            s
        }
    };
    if s <= j0 {
        return Err(Error::InvalidInput(format!("s = {s} must exceed j0 = {j0}")));
    }
    let p1_condition_sum: f64 = (j0..s).map(|l| c_f / l as f64).sum();

    let p1_size: BigUint = match instance.pi_table(s - 1) {
        Ok(table) => table[j0..s].iter().sum(),
        Err(e) if overrides.is_some() => return Err(e),
        Err(_) => return Err(infeasible(s, "?", "prime counts are unavailable up to degree s - 1")),
    };
    let p1_f = p1_size.to_f64().unwrap_or(f64::INFINITY);

    let t = match overrides {
        Some((_, t)) => t,
        None => {
            // sum_{j <= t} 1/j >= target * 2 |P1| s / C
            let need = target * 2.0 * p1_f * s as f64 / c_f;
            let ln_t = need - 0.577_215_664_901_532_9;
            if p1_size > BigUint::from(CONSTRUCTION_BUDGET) || ln_t > (CONSTRUCTION_BUDGET as f64).ln() {
                let t_label = format!("about exp({ln_t:.3e})");
                return Err(infeasible(
                    s,
                    &t_label,
                    &format!("|P1| = {p1_f:.3e} and t exceed the construction budget {CONSTRUCTION_BUDGET}"),
                ));
            }
            let mut acc = 0.0;
            let mut t = 0;
            while acc < need {
                t += 1;
                acc += 1.0 / t as f64;
            }
            t
        }
    };
    if t == 0 {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    if p1_size > BigUint::from(CONSTRUCTION_BUDGET) {
        return Err(infeasible(s, &t.to_string(), &format!("|P1| = {p1_size} exceeds the construction budget")));
    }
    let p2_condition_sum: f64 = (1..=t).map(|j| c_f / (2.0 * p1_f * (s * j) as f64)).sum();

    let mut p1_by_degree = Vec::new();
    for l in j0..s {
        let n = instance.pi(l)?.to_u64().expect("bounded by |P1|");
        p1_by_degree.push((l, instance.first_primes(l, n)?));
    }

    let mut listed = p1_size.to_u64().expect("within budget");
    let mut p2_by_degree = Vec::new();
    let mut p2_sizes = Vec::new();
    let mut p2_over_upper = Vec::new();
    for j in 1..=t {
        let d = s * j;
        let upper = &c * big_rat(q.pow(d as u32)) / big_rat(BigInt::from(p1_size.clone()) * BigInt::from(d));
        let lower = &upper / big_rat(2);
        let size = ceil(&lower);
        if big_rat(BigInt::from(size.clone())) > upper {
            p2_over_upper.push(j);
        }
        let size = size
            .to_u64()
            .filter(|&n| listed.saturating_add(n) <= CONSTRUCTION_BUDGET)
            .ok_or_else(|| infeasible(s, &t.to_string(), &format!("|P2,{j}| exceeds the construction budget")))?;
        listed += size;
        p2_sizes.push(size);
        p2_by_degree.push((j, instance.first_primes(d, size)?));
    }
    if !p2_over_upper.is_empty() {
        log::warn!("rounding up |P2,j| overshoots the upper size for j in {p2_over_upper:?}");
    }

    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    for (j, p2j) in &p2_by_degree {
        for (l, p1l) in &p1_by_degree {
            let count = (p1l.len() * p2j.len()) as u64;
            listed = listed.saturating_add(2 * count);
            if listed > CONSTRUCTION_BUDGET {
                return Err(infeasible(s, &t.to_string(), "B1 and B2 exceed the construction budget"));
            }
            b1.extend(instance.first_primes(s * j + l, count)?.into_iter().map(SemigroupElement::prime));
            for a in p1l {
                for b in p2j {
                    b2.push(SemigroupElement::from_parts(vec![(*a, 1), (*b, 1)]));
                }
            }
        }
    }

    let p1: Vec<PrimeId> = p1_by_degree.into_iter().flat_map(|(_, v)| v).collect();
    let p2: Vec<PrimeId> = p2_by_degree.into_iter().flat_map(|(_, v)| v).collect();
    let h = |ps: &[PrimeId]| -> Result<BigRational> {
        let els: Vec<SemigroupElement> = ps.iter().map(|&p| SemigroupElement::prime(p)).collect();
        harmonic_sum(instance, &els)
    };
    let (h1, h2) = (h(&p1)?, h(&p2)?);
    Ok(Construction {
        params: ConstructionParams {
            epsilon,
            j0,
            c: c.to_string(),
            c_range,
            s,
            t,
            overridden: overrides.is_some(),
            p1_size: p1.len() as u64,
            p2_sizes,
            p2_over_upper,
            p1_condition_sum,
            p2_condition_sum,
            epsilon_condition: p1_condition_sum >= target && p2_condition_sum >= target,
        },
        harmonic_p1: ReportValue::rational(&h1),
        harmonic_p2: ReportValue::rational(&h2),
        b1: BSet::new(instance, b1, BSetKind::Primes)?,
        b2: BSet::new(instance, b2, BSetKind::TwoAlmost)?,
        p1,
        p2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::SyntheticInstance;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn synthetic2() -> Instance {
        Instance::synthetic(SyntheticInstance::gauss(2).unwrap())
    }

    #[test]
    fn small_override_matches_hand_count() {
        let inst = synthetic2();
        let con = construct_b_sets(&inst, 0.9, Some((3, 2))).unwrap();
        let p = &con.params;
        assert_eq!((p.j0, p.c.as_str(), p.p1_size), (1, "1/2", 3));
        assert_eq!(p.p2_sizes, vec![1, 1]);
        assert_eq!(p.p2_over_upper, vec![1]);
        assert!(!p.epsilon_condition);
        assert_eq!(con.harmonic_p1.exact.as_deref(), Some("5/4"));
        // one prime of degree 3 and one of degree 6
        assert_eq!(con.harmonic_p2.exact.as_deref(), Some("9/64"));
        let degrees: Vec<(usize, u64)> = con.b1.degree_counts().into_iter().collect();
        assert_eq!(degrees, vec![(4, 2), (5, 1), (7, 2), (8, 1)]);
        assert_eq!(con.b1.degree_counts(), con.b2.degree_counts());
        assert!(con.b2.elements.iter().all(|g| g.big_omega() == 2 && g.omega() == 2));
    }

    #[test]
    fn harmonic_sums_agree_and_factor() {
        let inst = synthetic2();
        let con = construct_b_sets(&inst, 0.9, Some((3, 2))).unwrap();
        let h1 = exact_of(&con.harmonic_p1).unwrap();
        let h2 = exact_of(&con.harmonic_p2).unwrap();
        assert_eq!(con.b1.harmonic_sum, Value::Exact(&h1 * &h2));
        assert_eq!(con.b2.harmonic_sum, Value::Exact(h1 * h2));
        let b = con.bounds(&inst).unwrap();
        assert!(b.holds);
        assert!(b.min_bound_b2.is_some());
    }

    #[test]
    fn literal_scale_is_infeasible() {
        let inst = synthetic2();
        let err = construct_b_sets(&inst, 0.9, None).unwrap_err();
        let Error::InfeasibleScale(msg) = err else { panic!("{err:?}") };
        assert!(msg.starts_with("s = 442,"), "{msg}");
    }

    #[test]
    fn bad_inputs() {
        let inst = synthetic2();
        assert!(construct_b_sets(&inst, 1.5, None).is_err());
        assert!(construct_b_sets(&inst, 0.5, Some((1, 2))).is_err());
        assert_eq!(ceil(&rat(7, 2)), BigUint::from(4u32));
        assert_eq!(ceil(&rat(4, 2)), BigUint::from(2u32));
    }
}
