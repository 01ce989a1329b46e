use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use semigroup_ergodic::counting::{count_table, FactorCount};
use semigroup_ergodic::dynamics::Value;
use semigroup_ergodic::ffpoly::{factorize, monic_from_index, FieldSpec};
use semigroup_ergodic::keyprop::{error_functional, lemma43_identity, BSet, BSetKind, LemmaFn};
use semigroup_ergodic::semigroup::{Instance, PrimeId, SemigroupElement, SyntheticInstance};

fn exact(v: Value) -> BigRational {
    match v {
        Value::Exact(r) => r,
        Value::Complex(z) => panic!("inexact {z}"),
    }
}

fn primes_upto(inst: &Instance, maxdeg: usize) -> Vec<SemigroupElement> {
    (1..=maxdeg)
        .flat_map(|d| inst.primes(d).unwrap())
        .map(SemigroupElement::prime)
        .collect()
}

fn pick<T: Clone>(pool: &[T], mask: &[bool]) -> Vec<T> {
    pool.iter().zip(mask).filter(|(_, &m)| m).map(|(x, _)| x.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_sets_within_reciprocal_harmonic_sum(p in prop::sample::select(vec![2u64, 3]), mask in prop::collection::vec(any::<bool>(), 32)) {
        let inst = Instance::polynomial(&FieldSpec::prime(p).unwrap());
        let pool = primes_upto(&inst, if p == 2 { 6 } else { 4 });
        let set = pick(&pool, &mask);
        prop_assume!(!set.is_empty());
        let b = BSet::new(&inst, set, BSetKind::Primes).unwrap();
        let e = exact(error_functional(&inst, &b).unwrap());
        let h = exact(b.harmonic_sum.clone());
        prop_assert!(e <= h.recip());
    }

    #[test]
    fn product_sets_within_product_bound(m1 in prop::collection::vec(any::<bool>(), 3), m2 in prop::collection::vec(any::<bool>(), 5)) {
        // P1 from degrees 1 and 2, P2 from degree 3 and 4 over F2: disjoint
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let p1: Vec<PrimeId> = pick(&[1, 2].iter().flat_map(|&d| inst.primes(d).unwrap()).collect::<Vec<_>>(), &m1);
        let p2: Vec<PrimeId> = pick(&[3, 4].iter().flat_map(|&d| inst.primes(d).unwrap()).collect::<Vec<_>>(), &m2);
        prop_assume!(!p1.is_empty() && !p2.is_empty());
        let h = |ps: &[PrimeId]| -> BigRational {
            ps.iter().map(|p| BigRational::new(1.into(), BigUint::from(2u32).pow(p.degree as u32).into())).sum()
        };
        let (h1, h2) = (h(&p1), h(&p2));
        let b: Vec<SemigroupElement> = p1
            .iter()
            .flat_map(|&a| p2.iter().map(move |&c| SemigroupElement::from_parts(vec![(a, 1), (c, 1)])))
            .collect();
        let b = BSet::new(&inst, b, BSetKind::TwoAlmost).unwrap();
        prop_assert_eq!(exact(b.harmonic_sum.clone()), &h1 * &h2);
        let e = exact(error_functional(&inst, &b).unwrap());
        prop_assert!(e <= h1.recip() + h2.recip() + (&h1 * &h2).recip());
        if h1 >= BigRational::one() || h2 >= BigRational::one() {
            prop_assert!(e <= BigRational::from_integer(3.into()) / h1.min(h2));
        }
    }

    #[test]
    fn matched_degree_sets_give_equal_twisted_averages(mask in prop::collection::vec(any::<bool>(), 12), shift in 0usize..4) {
        // B1: primes; B2: elements of the same degrees with Omega = 2
        let inst = Instance::synthetic(SyntheticInstance::gauss(2).unwrap());
        let b1 = pick(&primes_upto(&inst, 4), &mask);
        prop_assume!(!b1.is_empty());
        let mut b2 = Vec::new();
        for d in 1..=4 {
            let need = b1.iter().filter(|g| g.degree() == d).count();
            let pool: Vec<SemigroupElement> = inst
                .enumerate_degree(d)
                .unwrap()
                .into_iter()
                .filter(|g| g.big_omega() >= 1)
                .collect();
            prop_assume!(pool.len() >= need + shift);
            b2.extend(pool.into_iter().skip(shift).take(need));
        }
        let b1 = BSet::new(&inst, b1, BSetKind::Primes).unwrap();
        let b2 = BSet::new(&inst, b2, BSetKind::General).unwrap();
        let table = count_table(&inst, 8).unwrap();
        let parity = |k: usize| BigRational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into());
        let res = lemma43_identity(&inst, &b1, &b2, &LemmaFn::ByOmega(&parity, &table), 8).unwrap();
        prop_assert!(res.equal);
    }

    #[test]
    fn factor_counts_add_under_multiplication(p in prop::sample::select(vec![2u64, 3, 5]), da in 1usize..5, db in 1usize..5, ia in any::<u64>(), ib in any::<u64>()) {
        let field = FieldSpec::prime(p).unwrap();
        let a = monic_from_index(&field, da, ia % p.pow(da as u32));
        let b = monic_from_index(&field, db, ib % p.pow(db as u32));
        let (fa, fb) = (factorize(&a).unwrap(), factorize(&b).unwrap());
        let fab = factorize(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(fab.big_omega(), fa.big_omega() + fb.big_omega());
        prop_assert!(fab.omega() <= fa.omega() + fb.omega());
        let inst = Instance::polynomial(&field);
        let poly = inst.as_polynomial().unwrap();
        let (ga, gb) = (poly.from_poly(&a).unwrap(), poly.from_poly(&b).unwrap());
        prop_assert_eq!(poly.to_poly(&ga.gcd(&gb)).unwrap(), a.gcd(&b).unwrap());
        prop_assert_eq!(poly.to_poly(&ga.lcm(&gb)).unwrap(), a.lcm(&b).unwrap());
    }

    #[test]
    fn table_rows_sum_to_element_counts(p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 0usize..16) {
        let inst = Instance::polynomial(&FieldSpec::prime(p).unwrap());
        let table = count_table(&inst, n).unwrap();
        let row: BigUint = table.row(FactorCount::Total, n).iter().sum();
        prop_assert_eq!(row, BigUint::from(p).pow(n as u32));
        let cumulative: BigUint = (0..=n).map(|m| BigUint::from(p).pow(m as u32)).sum();
        prop_assert_eq!(table.cumulative(n), &cumulative);
    }
}
