//! Cesàro and logarithmic averages over explicit finite sets of elements.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::ComplexSum;
use crate::semigroup::{Instance, NormBase, SemigroupElement};

/// `(1/|B|) sum_{g in B} a(g)`, exactly.
pub fn cesaro_avg_exact<T>(set: &[T], a: impl Fn(&T) -> BigRational) -> Result<BigRational> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let sum: BigRational = set.iter().map(a).sum();
    Ok(sum / BigRational::from_integer(BigInt::from(set.len())))
}

/// `(1/|B|) sum_{g in B} a(g)`.
pub fn cesaro_avg<T>(set: &[T], a: impl Fn(&T) -> Complex64) -> Result<Complex64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut acc = ComplexSum::default();
    for g in set {
        acc.add(a(g));
    }
    Ok(acc.value() / set.len() as f64)
}

/// `(sum a(g)/|g|) / (sum 1/|g|)`, exactly; needs an integer norm base.
pub fn log_avg_exact(
    instance: &Instance,
    set: &[SemigroupElement],
    a: impl Fn(&SemigroupElement) -> BigRational,
) -> Result<BigRational> {
    let q = integer_base(instance)?;
    let top = set.iter().map(SemigroupElement::degree).max().ok_or(Error::EmptySet)?;
    // scale every weight by q^top so that they are integers q^(top - deg g)
    let mut num = BigRational::zero();
    let mut den = BigUint::zero();
    for g in set {
        let w = q.pow((top - g.degree()) as u32);
        num += a(g) * BigRational::from_integer(BigInt::from(w.clone()));
        den += w;
    }
    Ok(num / BigRational::from_integer(BigInt::from(den)))
}

/// `(sum a(g)/|g|) / (sum 1/|g|)`.
pub fn log_avg(
    instance: &Instance,
    set: &[SemigroupElement],
    a: impl Fn(&SemigroupElement) -> Complex64,
) -> Result<Complex64> {
    let low = set.iter().map(SemigroupElement::degree).min().ok_or(Error::EmptySet)?;
    let q = instance.norm_base().as_f64();
    let mut num = ComplexSum::default();
    let mut den = ComplexSum::default();
    for g in set {
        let w = q.powi(-((g.degree() - low) as i32));
        num.add(a(g) * w);
        den.add(Complex64::new(w, 0.0));
    }
    Ok(num.value() / den.value().re)
}

/// `sum_{g in B} 1/|g|`, exactly.
pub fn harmonic_sum(instance: &Instance, set: &[SemigroupElement]) -> Result<BigRational> {
    let q = integer_base(instance)?;
    Ok(set
        .iter()
        .map(|g| BigRational::new(BigInt::from(1), BigInt::from(q.pow(g.degree() as u32))))
        .sum())
}

pub(crate) fn integer_base(instance: &Instance) -> Result<BigUint> {
    match instance.norm_base() {
        NormBase::Integer(q) => Ok(q),
        NormBase::Real(q) => Err(Error::InvalidInput(format!(
            "exact averages need an integer norm base, got {q}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::FieldSpec;
    use crate::semigroup::PrimeId;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn singleton_and_constant() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let g = SemigroupElement::prime(PrimeId::new(3, 1));
        let a = |_: &SemigroupElement| rat(7, 3);
        assert_eq!(cesaro_avg_exact(std::slice::from_ref(&g), a).unwrap(), rat(7, 3));
        assert_eq!(log_avg_exact(&inst, std::slice::from_ref(&g), a).unwrap(), rat(7, 3));
        let all = inst.enumerate_upto(4).unwrap();
        assert_eq!(log_avg_exact(&inst, &all, |_| rat(1, 1)).unwrap(), rat(1, 1));
        assert!((log_avg(&inst, &all, |_| Complex64::new(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_degrees_make_averages_coincide() {
        let inst = Instance::polynomial(&FieldSpec::prime(3).unwrap());
        let set = inst.enumerate_degree(2).unwrap();
        let a = |g: &SemigroupElement| rat(g.big_omega() as i64, 1);
        assert_eq!(cesaro_avg_exact(&set, a).unwrap(), log_avg_exact(&inst, &set, a).unwrap());
    }

    #[test]
    fn empty_set() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        assert_eq!(cesaro_avg_exact::<u8>(&[], |_| rat(1, 1)).unwrap_err(), Error::EmptySet);
        assert_eq!(log_avg_exact(&inst, &[], |_| rat(1, 1)).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn log_weights_favour_small_norms() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let set = vec![
            SemigroupElement::prime(PrimeId::new(1, 0)),
            SemigroupElement::prime(PrimeId::new(2, 0)),
        ];
        // weights 1/2 and 1/4
        let a = |g: &SemigroupElement| rat(g.degree() as i64, 1);
        assert_eq!(log_avg_exact(&inst, &set, a).unwrap(), rat(4, 3));
        assert_eq!(harmonic_sum(&inst, &set).unwrap(), rat(3, 4));
    }
}
