//! Averages over `G_n`, the elements of degree at most `n`, computed from
//! the count table: every statistic here depends on an element `g` only
//! through `Omega(g)` (or `omega(g)`), so it is a weighted sum of the column
//! totals `M_n(k) = #{g in G_n : Omega(g) = k}`.
//!
//! The normalized count is `phi(g) = (Omega(g) - ln n) / sqrt(ln n)` with the
//! natural logarithm.

mod report;
mod sets;

use std::sync::atomic::{AtomicBool, Ordering};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

pub use report::{AverageReport, ReportValue};
pub(crate) use sets::integer_base;
pub use sets::{cesaro_avg, cesaro_avg_exact, harmonic_sum, log_avg, log_avg_exact};

use crate::counting::{CountTable, FactorCount};
use crate::dynamics::{orbit_values, orbit_values_exact, unit_root, Angle, DynSystem, Observable, Point, Value, WindowFn};
use crate::error::{Error, Result};
use crate::numeric::{ratio_f64, ComplexSum};
use crate::semigroup::Instance;

/// `(k - ln n) / sqrt(ln n)`.
pub fn normalized(k: usize, n: usize) -> f64 {
    let l = (n as f64).ln();
    (k as f64 - l) / l.sqrt()
}

/// Statistics of one instance read off its count table.
#[derive(Clone, Copy)]
pub struct Stats<'a> {
    instance: &'a Instance,
    table: &'a CountTable,
    which: FactorCount,
}

/// Empirical distribution of `phi` over `G_n`.
#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErdosKac {
    pub n: usize,
    /// `(phi, P(phi(g) <= phi))` at every jump.
    pub cdf: Vec<(f64, f64)>,
    /// Kolmogorov-Smirnov distance to the standard normal.
    pub ks: f64,
    /// Total probability, exactly.
    #[serde_as(as = "serde_with::DisplayFromStr")]
    pub mass: BigRational,
    /// Mean of `Omega` over `G_n`, exactly.
    #[serde_as(as = "serde_with::DisplayFromStr")]
    pub mean: BigRational,
}

fn rat(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

impl<'a> Stats<'a> {
    pub fn new(instance: &'a Instance, table: &'a CountTable, which: FactorCount) -> Result<Self> {
        if which == FactorCount::Distinct && !table.has_distinct() {
            return Err(Error::InvalidInput("count table has no omega table".into()));
        }
        Ok(Stats { instance, table, which })
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn which(&self) -> FactorCount {
        self.which
    }

    fn columns(&self, n: usize) -> Result<Vec<BigUint>> {
        if n > self.table.nmax() {
            return Err(Error::InvalidInput(format!(
                "degree {n} is beyond the count table (nmax = {})",
                self.table.nmax()
            )));
        }
        Ok(self.table.cumulative_row(self.which, n))
    }

    /// `|G_n|`.
    pub fn size(&self, n: usize) -> Result<BigUint> {
        self.columns(n)?;
        Ok(self.table.cumulative(n).clone())
    }

    /// `(1/|G_n|) sum_k M_n(k) w(k)`, exactly.
    pub fn weighted_exact(&self, n: usize, w: impl Fn(usize) -> BigRational) -> Result<BigRational> {
        let cols = self.columns(n)?;
        let mut acc = BigRational::zero();
        for (k, c) in cols.iter().enumerate() {
            if !c.is_zero() {
                acc += w(k) * rat(c);
            }
        }
        Ok(acc / rat(self.table.cumulative(n)))
    }

    /// `(1/|G_n|) sum_k M_n(k) w(k)` with each weight `M_n(k)/|G_n|` rounded once.
    pub fn weighted(&self, n: usize, w: impl Fn(usize) -> Complex64) -> Result<Complex64> {
        let cols = self.columns(n)?;
        let total = self.table.cumulative(n);
        let mut acc = ComplexSum::default();
        for (k, c) in cols.iter().enumerate() {
            if !c.is_zero() {
                acc.add(w(k) * ratio_f64(c, total));
            }
        }
        Ok(acc.value())
    }

    /// `(1/|G_n|) sum_{g in G_n} f(T^Omega(g) x)`.
    pub fn br_average(&self, sys: &DynSystem, x: &Point, f: &Observable, n: usize) -> Result<Value> {
        self.instance.require_classical()?;
        if let Some(vals) = orbit_values_exact(sys, x, f, n)? {
            return Ok(Value::Exact(self.weighted_exact(n, |k| vals[k].clone())?));
        }
        let vals = orbit_values(sys, x, f, n)?;
        Ok(Value::Complex(self.weighted(n, |k| vals[k])?))
    }

    /// `(1/|G_n|) sum_{g in G_n} F(phi(g)) f(T^Omega(g) x)`; identical to
    /// [`Stats::br_average`] when `F` is constant one.
    pub fn loyd_average(
        &self,
        sys: &DynSystem,
        x: &Point,
        f: &Observable,
        window: &WindowFn,
        n: usize,
    ) -> Result<Value> {
        if window.is_constant_one() {
            return self.br_average(sys, x, f, n);
        }
        self.instance.require_classical()?;
        check_log_range(n)?;
        let vals = orbit_values(sys, x, f, n)?;
        Ok(Value::Complex(self.weighted(n, |k| vals[k] * window.eval(normalized(k, n)))?))
    }

    /// Proportion of `G_n` with `Omega = r mod m`.
    pub fn density_mod_m(&self, m: usize, r: usize, n: usize) -> Result<BigRational> {
        if m < 2 || r >= m {
            return Err(Error::InvalidInput(format!("need m >= 2 and 0 <= r < m, got m={m}, r={r}")));
        }
        self.weighted_exact(n, |k| {
            if k % m == r {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    /// Mean of `(-1)^Omega` over `G_n`.
    pub fn liouville_mean(&self, n: usize) -> Result<BigRational> {
        self.weighted_exact(n, |k| BigRational::from_integer(if k % 2 == 0 { 1 } else { -1 }.into()))
    }

    /// `(1/|G_n|) sum_{g in G_n} e(h alpha Omega(g))`; exactly 1 when `h alpha`
    /// is an integer (to the 128-bit precision of the angle).
    pub fn weyl_sum(&self, alpha: &Angle, h: i64, n: usize) -> Result<Complex64> {
        let step = alpha.bits().wrapping_mul(h as i128 as u128);
        if step == 0 {
            self.columns(n)?;
            return Ok(Complex64::new(1.0, 0.0));
        }
        self.weighted(n, |k| unit_root(step.wrapping_mul(k as u128)))
    }

    /// Mean of `Omega` over `G_n`.
    pub fn mean_count(&self, n: usize) -> Result<BigRational> {
        self.weighted_exact(n, |k| BigRational::from_integer(k.into()))
    }

    pub fn erdos_kac(&self, n: usize) -> Result<ErdosKac> {
        check_log_range(n)?;
        let cols = self.columns(n)?;
        let total = self.table.cumulative(n);
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        let mut cdf = Vec::new();
        let mut mass = BigUint::zero();
        let mut below = 0.0f64;
        let mut ks = 0.0f64;
        for (k, c) in cols.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = normalized(k, n);
            let phi = normal.cdf(t);
            mass += c;
            let upto = ratio_f64(&mass, total);
            ks = ks.max((below - phi).abs()).max((upto - phi).abs());
            cdf.push((t, upto));
            below = upto;
        }
        Ok(ErdosKac {
            n,
            cdf,
            ks,
            mass: rat(&mass) / rat(total),
            mean: self.mean_count(n)?,
        })
    }

    /// `(1/|G_n|) sum F(phi(g)) (a(Omega(g) + 1) - a(Omega(g)))`. Values of `a`
    /// outside the unit disc are projected onto it, with a warning.
    pub fn shift_gap(&self, a: &dyn Fn(u64) -> Complex64, window: &WindowFn, n: usize) -> Result<Complex64> {
        if !window.is_constant_one() {
            check_log_range(n)?;
        }
        let clipped = AtomicBool::new(false);
        let a = |k: u64| {
            let v = a(k);
            if v.norm() > 1.0 {
                clipped.store(true, Ordering::Relaxed);
                v / v.norm()
            } else {
                v
            }
        };
        let gap = self.weighted(n, |k| {
            let w = if window.is_constant_one() { 1.0 } else { window.eval(normalized(k, n)) };
            (a(k as u64 + 1) - a(k as u64)) * w
        })?;
        if clipped.load(Ordering::Relaxed) {
            log::warn!("shift test function exceeded modulus 1 and was clipped");
        }
        Ok(gap)
    }

    /// [`Stats::shift_gap`] with `F = 1` and real rational `a`, exactly.
    /// Values outside `[-1, 1]` are clipped, with a warning.
    pub fn shift_gap_exact(&self, a: &dyn Fn(u64) -> BigRational, n: usize) -> Result<BigRational> {
        let one = BigRational::one();
        let clipped = AtomicBool::new(false);
        let a = |k: u64| {
            let v = a(k);
            if v.abs() > one {
                clipped.store(true, Ordering::Relaxed);
                if v.is_positive() { one.clone() } else { -one.clone() }
            } else {
                v
            }
        };
        let gap = self.weighted_exact(n, |k| a(k as u64 + 1) - a(k as u64))?;
        if clipped.load(Ordering::Relaxed) {
            log::warn!("shift test function exceeded modulus 1 and was clipped");
        }
        Ok(gap)
    }
}

fn check_log_range(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("normalization by ln n needs n >= 3, got {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::count_table;
    use crate::ffpoly::FieldSpec;

    fn f2(nmax: usize) -> (Instance, CountTable) {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let table = count_table(&inst, nmax).unwrap().with_distinct();
        (inst, table)
    }

    #[test]
    fn constant_observable_gives_constant() {
        let (inst, table) = f2(20);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let sys = DynSystem::finite(3).unwrap();
        let c = Observable::Constant(Complex64::new(2.5, 0.0));
        for n in [0, 5, 20] {
            assert_eq!(s.br_average(&sys, &Point::Finite(1), &c, n).unwrap(), Value::Exact(BigRational::new(5.into(), 2.into())));
        }
        let m1 = DynSystem::finite(1).unwrap();
        let one = s.br_average(&m1, &Point::Finite(0), &Observable::Indicator { r: 0 }, 7).unwrap();
        assert_eq!(one, Value::Exact(BigRational::one()));
    }

    #[test]
    fn density_partition() {
        let (inst, table) = f2(30);
        for which in [FactorCount::Total, FactorCount::Distinct] {
            let s = Stats::new(&inst, &table, which).unwrap();
            for m in [2, 3, 5] {
                let total: BigRational = (0..m).map(|r| s.density_mod_m(m, r, 30).unwrap()).sum();
                assert_eq!(total, BigRational::one());
            }
        }
    }

    #[test]
    fn liouville_closed_form_at_twenty() {
        let (inst, table) = f2(20);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let d = s.density_mod_m(2, 0, 20).unwrap();
        let err = (d - BigRational::new(1.into(), 2.into())).abs();
        assert!(err <= BigRational::new(2.into(), BigInt::from(1u32 << 10)));
    }

    #[test]
    fn weyl_degenerate_cases() {
        let (inst, table) = f2(10);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let a = Angle::sqrt(2);
        assert_eq!(s.weyl_sum(&a, 0, 10).unwrap(), Complex64::new(1.0, 0.0));
        let half = Angle::rational(1, 2).unwrap();
        assert_eq!(s.weyl_sum(&half, 2, 10).unwrap(), Complex64::new(1.0, 0.0));
        // h alpha = 1/2 gives the Liouville mean
        let lm = crate::numeric::rational_f64(&s.liouville_mean(10).unwrap());
        assert!((s.weyl_sum(&half, 1, 10).unwrap().re - lm).abs() < 1e-14);
    }

    #[test]
    fn window_degeneracy() {
        let (inst, table) = f2(12);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let sys = DynSystem::torus(vec![Angle::sqrt(2)]).unwrap();
        let f = Observable::character(vec![1]);
        for n in [3, 8, 12] {
            assert_eq!(
                s.loyd_average(&sys, &sys.origin(), &f, &WindowFn::ConstantOne, n).unwrap(),
                s.br_average(&sys, &sys.origin(), &f, n).unwrap()
            );
        }
    }

    #[test]
    fn far_window_is_negligible() {
        let (inst, table) = f2(40);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let sys = DynSystem::finite(1).unwrap();
        let f = Observable::Indicator { r: 0 };
        let w = WindowFn::hat(5.0, 6.0).unwrap();
        let v = s.loyd_average(&sys, &Point::Finite(0), &f, &w, 40).unwrap().to_complex();
        // the Omega distribution is still right-skewed at n = 40
        assert!(v.norm() < 5e-3, "{v}");
    }

    #[test]
    fn erdos_kac_mass_is_one() {
        let (inst, table) = f2(30);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let ek = s.erdos_kac(30).unwrap();
        assert_eq!(ek.mass, BigRational::one());
        assert!((ek.cdf.last().unwrap().1 - 1.0).abs() < 1e-15);
        assert!(ek.ks > 0.0 && ek.ks < 1.0);
    }

    #[test]
    fn shift_gaps() {
        let (inst, table) = f2(20);
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let c = |_: u64| BigRational::new(1.into(), 3.into());
        assert!(s.shift_gap_exact(&c, 20).unwrap().is_zero());
        let sign = |k: u64| BigRational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into());
        let gap = s.shift_gap_exact(&sign, 19).unwrap();
        assert_eq!(gap.abs(), s.liouville_mean(19).unwrap().abs() * BigRational::from_integer(2.into()));
        let big = |_: u64| Complex64::new(3.0, 0.0);
        assert_eq!(s.shift_gap(&big, &WindowFn::ConstantOne, 10).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn distinct_needs_table() {
        let inst = Instance::polynomial(&FieldSpec::prime(2).unwrap());
        let table = count_table(&inst, 5).unwrap();
        assert!(Stats::new(&inst, &table, FactorCount::Distinct).is_err());
    }

    #[test]
    fn non_classical_instances_are_refused() {
        let inst = Instance::graph(crate::semigroup::GraphSpec::complete_bipartite(3, 3).unwrap());
        let table = count_table(&inst, 10).unwrap();
        let s = Stats::new(&inst, &table, FactorCount::Total).unwrap();
        let sys = DynSystem::finite(2).unwrap();
        assert!(matches!(
            s.br_average(&sys, &Point::Finite(0), &Observable::parity(), 10),
            Err(Error::NonClassicalInstance(_))
        ));
    }
}
