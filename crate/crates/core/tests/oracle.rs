//! Count tables and statistics against brute force over explicit elements.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use semigroup_ergodic::averages::Stats;
use semigroup_ergodic::counting::{count_table, FactorCount};
use semigroup_ergodic::dynamics::{Angle, DynSystem, Observable, Point, Value};
use semigroup_ergodic::ffpoly::{enumerate_monic, factorize, FieldSpec};
use semigroup_ergodic::semigroup::{histogram, GraphSpec, Instance, SyntheticInstance};

/// `(Omega, omega)` of every monic polynomial of degree at most `nmax`, by degree.
fn factored(field: &FieldSpec, nmax: usize) -> Vec<Vec<(u32, u32)>> {
    (0..=nmax)
        .map(|n| {
            enumerate_monic(field, n)
                .map(|m| {
                    let f = factorize(&m).unwrap();
                    (f.big_omega(), f.omega())
                })
                .collect()
        })
        .collect()
}

#[test]
fn f4_table_matches_factorization() {
    let field = FieldSpec::new(2, 2).unwrap();
    let inst = Instance::polynomial(&field);
    let table = count_table(&inst, 5).unwrap().with_distinct();
    for (n, row) in factored(&field, 5).iter().enumerate() {
        for k in 0..=n {
            let big = row.iter().filter(|(b, _)| *b as usize == k).count();
            let small = row.iter().filter(|(_, s)| *s as usize == k).count();
            assert_eq!(table.count(FactorCount::Total, n, k), BigUint::from(big), "n={n} k={k}");
            assert_eq!(table.count(FactorCount::Distinct, n, k), BigUint::from(small), "n={n} k={k}");
        }
    }
}

#[test]
fn synthetic_and_graph_tables_match_enumeration() {
    let pi = vec![1u32, 2, 1, 3].into_iter().map(BigUint::from).collect();
    let instances = [
        Instance::synthetic(SyntheticInstance::from_list(2, pi).unwrap()),
        Instance::synthetic(SyntheticInstance::gauss(3).unwrap()),
        Instance::graph(GraphSpec::complete(4).unwrap()),
    ];
    for inst in &instances {
        let nmax = 4;
        let table = count_table(inst, nmax).unwrap();
        let hist = histogram(&inst.enumerate_upto(nmax).unwrap(), nmax);
        for n in 0..=nmax {
            assert_eq!(table.row(FactorCount::Total, n), &hist[n][..], "{} n={n}", inst.label());
        }
    }
}

#[test]
fn statistics_match_direct_averages() {
    let field = FieldSpec::prime(3).unwrap();
    let inst = Instance::polynomial(&field);
    let nmax = 6;
    let table = count_table(&inst, nmax).unwrap();
    let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
    let all: Vec<u32> = factored(&field, nmax).into_iter().flatten().map(|(b, _)| b).collect();
    let size = BigRational::from_integer(all.len().into());
    let frac = |count: usize| BigRational::from_integer(count.into()) / &size;

    assert_eq!(s.density_mod_m(3, 1, nmax).unwrap(), frac(all.iter().filter(|&&k| k % 3 == 1).count()));
    let even = all.iter().filter(|&&k| k % 2 == 0).count();
    let lam = frac(even) - frac(all.len() - even);
    assert_eq!(s.liouville_mean(nmax).unwrap(), lam);
    let total: usize = all.iter().map(|&k| k as usize).sum();
    assert_eq!(s.mean_count(nmax).unwrap(), frac(total));

    let alpha: Angle = "sqrt2-1".parse().unwrap();
    let a = alpha.to_f64();
    let direct: Complex64 = all
        .iter()
        .map(|&k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a * k as f64))
        .sum::<Complex64>()
        / all.len() as f64;
    assert!((s.weyl_sum(&alpha, 1, nmax).unwrap() - direct).norm() < 1e-12);

    let sys = DynSystem::finite(4).unwrap();
    let f = Observable::Indicator { r: 2 };
    let br = s.br_average(&sys, &Point::Finite(1), &f, nmax).unwrap();
    let hits = all.iter().filter(|&&k| (1 + k) % 4 == 2).count();
    assert_eq!(br, Value::Exact(frac(hits)));

    let mass: BigRational = (0..=nmax).map(|k| s.density_mod_m(nmax + 1, k, nmax).unwrap()).sum();
    assert!(!mass.is_zero());
    assert_eq!(mass, BigRational::from_integer(1.into()));
}
